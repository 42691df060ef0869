#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "hicu/convolution.hpp"
#include "hicu/error.hpp"
#include "hicu/fft.hpp"
#include "hicu/io.hpp"
#include "hicu/mask.hpp"
#include "hicu/phantom.hpp"
#include "support/oracles.hpp"

using namespace hicu;
namespace fs = std::filesystem;

namespace {

fs::path temp_path(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "hicu_data_test";
  fs::create_directories(dir);
  return dir / name;
}

std::vector<std::uint8_t> slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

void spit(const fs::path& p, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

MultiCoilKSpace float_valued(int nx, int ny, int nc, std::uint64_t seed) {
  auto y = hicu::testing::random_kspace(nx, ny, nc, seed);
  for (auto& v : y.data()) v = Complex(static_cast<float>(v.real()), static_cast<float>(v.imag()));
  return y;
}

}  // namespace

TEST(Phantom, UniformDiskRoundTrip) {
  PhantomSpec spec;
  spec.nx = spec.ny = 32;
  spec.nc = 1;
  spec.ellipses = {Ellipse{0.0, 0.0, 0.6, 0.6, 0.0, 1.0}};
  spec.coils.uniform = true;
  const Phantom ph = make_phantom(spec);
  int inside = 0;
  for (int y = 0; y < 32; ++y)
    for (int x = 0; x < 32; ++x) {
      const double u = (x - 16) / 16.0, v = (y - 16) / 16.0;
      const bool in_disk = u * u + v * v <= 0.36;
      inside += in_disk;
      EXPECT_EQ(ph.coil_images(x, y, 0), in_disk ? Complex(1.0) : Complex(0.0));
    }
  EXPECT_GT(inside, 100);
  EXPECT_LE((to_images(ph.kspace) - ph.coil_images).norm(), 1e-10 * ph.coil_images.norm());
  EXPECT_EQ(ph.kspace, ph.clean_kspace);
}

TEST(Phantom, DeterministicForSeed) {
  const Phantom a = make_phantom(default_phantom_spec(32, 24, 3, 7));
  const Phantom b = make_phantom(default_phantom_spec(32, 24, 3, 7));
  EXPECT_EQ(a.kspace, b.kspace);
  PhantomSpec noisy = default_phantom_spec(32, 24, 3, 7);
  noisy.noise_db = 15.0;
  EXPECT_EQ(make_phantom(noisy).kspace, make_phantom(noisy).kspace);
  noisy.seed = 8;
  EXPECT_FALSE(make_phantom(noisy).kspace == make_phantom(default_phantom_spec(32, 24, 3, 7)).kspace);
}

TEST(Phantom, CoilImagesAreSensitivityTimesObject) {
  const Phantom ph = make_phantom(default_phantom_spec(24, 24, 4));
  for (int c = 0; c < 4; ++c)
    for (int y = 0; y < 24; ++y)
      for (int x = 0; x < 24; ++x)
        EXPECT_LE(std::abs(ph.coil_images(x, y, c) - ph.sensitivities(x, y, c) * ph.object(x, y, 0)),
                  1e-14);
  // Coils see the object differently.
  double spread = 0.0;
  for (std::size_t i = 0; i < ph.sensitivities.coil(0).size(); ++i)
    spread += std::abs(ph.sensitivities.coil(0)[i] - ph.sensitivities.coil(1)[i]);
  EXPECT_GT(spread, 1.0);
}

TEST(Phantom, SmoothCoilsGiveLowRankConvolutionMatrix) {
  const Phantom ph = make_phantom(default_phantom_spec(64, 64, 4));
  const KernelSpec k{3, 3, 4};
  const CMatrix h = materialize_convolution_matrix(ph.kspace, k, full_valid_region(64, 64, k));
  const Eigen::VectorXd s = Eigen::JacobiSVD<CMatrix>(h).singularValues();
  int first = -1;
  for (int r = 1; r < s.size(); ++r)
    if (s(r) / s(0) < 0.05) {
      first = r;
      break;
    }
  ASSERT_GT(first, 0);
  EXPECT_LE(first, k.length() / 2);
}

TEST(Phantom, NoiseHasExactRatio) {
  const Phantom ph = make_phantom(default_phantom_spec(32, 32, 2));
  const auto noisy = add_noise(ph.kspace, 15.0, 3);
  EXPECT_NEAR(20 * std::log10(ph.kspace.norm() / (noisy - ph.kspace).norm()), 15.0, 1e-9);
  EXPECT_EQ(noisy, add_noise(ph.kspace, 15.0, 3));
}

TEST(Phantom, InvalidGeometry) {
  EXPECT_THROW(make_phantom(default_phantom_spec(64, 64, 0)), ConfigError);
  EXPECT_THROW(make_phantom(default_phantom_spec(2, 64, 1)), ConfigError);
  PhantomSpec spec = default_phantom_spec(16, 16, 1);
  spec.ellipses = {Ellipse{0.8, 0.0, 0.5, 0.2, 0.0, 1.0}};
  EXPECT_THROW(make_phantom(spec), ConfigError);
  spec.ellipses.clear();
  EXPECT_THROW(make_phantom(spec), ConfigError);
}

TEST(Phantom, RootSumOfSquares) {
  const Phantom ph = make_phantom(default_phantom_spec(16, 16, 3));
  const auto rss = root_sum_of_squares(ph.coil_images);
  EXPECT_EQ(rss.nc(), 1);
  double s = 0;
  for (int c = 0; c < 3; ++c) s += std::norm(ph.coil_images(5, 7, c));
  EXPECT_NEAR(rss(5, 7, 0).real(), std::sqrt(s), 1e-14);
  EXPECT_EQ(rss(5, 7, 0).imag(), 0.0);
}

TEST(Mask, FullySampledAtUnitAcceleration) {
  for (const auto p : {SamplingPattern::S1, SamplingPattern::S2}) {
    const SamplingMask m = make_mask(MaskSpec{p, 1.0, 0.1, 0.1, 0}, 20, 16);
    EXPECT_EQ(m.count(), 320u);
  }
}

TEST(Mask, S1SampledFractionAt384) {
  const SamplingMask m = make_mask(MaskSpec{SamplingPattern::S1, 4.0, 0.08, 0.1, 2}, 384, 384);
  EXPECT_GE(m.sampled_fraction(), 0.245);
  EXPECT_LE(m.sampled_fraction(), 0.255);
}

TEST(Mask, BudgetWithinOneSampleAndCentreKept) {
  for (const double r : {2.0, 3.0, 4.0, 5.0}) {
    const SamplingMask m = make_mask(MaskSpec{SamplingPattern::S1, r, 0.125, 0.1, 4}, 64, 48);
    EXPECT_LE(std::abs(static_cast<double>(m.count()) - 64 * 48 / r), 1.0);
    for (int y = 21; y < 27; ++y)
      for (int x = 28; x < 36; ++x) EXPECT_TRUE(m(x, y));
    const SamplingMask l = make_mask(MaskSpec{SamplingPattern::S2, r, 0.125, 0.1, 4}, 64, 48);
    EXPECT_LE(std::abs(static_cast<double>(l.count()) / 64 - 48 / r), 1.0);
    for (int y = 21; y < 27; ++y) EXPECT_TRUE(l(0, y));
  }
}

TEST(Mask, S2SamplesWholeLines) {
  const SamplingMask m = make_mask(MaskSpec{SamplingPattern::S2, 4.0, 0.08, 0.1, 5}, 64, 64);
  int lines = 0;
  for (int y = 0; y < 64; ++y) {
    bool any = false, all = true;
    for (int x = 0; x < 64; ++x) {
      any = any || m(x, y);
      all = all && m(x, y);
    }
    EXPECT_EQ(any, all) << y;
    lines += all;
  }
  EXPECT_EQ(lines, 16);
}

TEST(Mask, S2DensityFavoursTheCentre) {
  int centre = 0, edge = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const SamplingMask m = make_mask(MaskSpec{SamplingPattern::S2, 4.0, 0.0, 0.1, seed}, 8, 64);
    for (int y = 0; y < 64; ++y) {
      if (!m(0, y)) continue;
      if (std::abs(y - 32) < 8) ++centre;
      if (std::abs(y - 32) >= 24) ++edge;
    }
  }
  EXPECT_GT(centre, 2 * edge);
}

TEST(Mask, DeterministicAndNestedInPriorityOrder) {
  const MaskSpec a{SamplingPattern::S1, 3.0, 0.1, 0.1, 9};
  EXPECT_EQ(make_mask(a, 40, 40), make_mask(a, 40, 40));
  MaskSpec other = a;
  other.seed = 10;
  EXPECT_FALSE(make_mask(a, 40, 40) == make_mask(other, 40, 40));
  MaskSpec sparser = a;
  sparser.acceleration = 5.0;
  const SamplingMask dense = make_mask(a, 40, 40), sparse = make_mask(sparser, 40, 40);
  for (int y = 0; y < 40; ++y)
    for (int x = 0; x < 40; ++x)
      if (sparse(x, y)) EXPECT_TRUE(dense(x, y));
}

TEST(Mask, InfeasibleSpecs) {
  EXPECT_THROW(make_mask(MaskSpec{SamplingPattern::S1, 8.0, 0.5, 0.1, 0}, 32, 32), ConfigError);
  EXPECT_THROW(make_mask(MaskSpec{SamplingPattern::S2, 8.0, 0.5, 0.1, 0}, 32, 32), ConfigError);
  EXPECT_THROW(make_mask(MaskSpec{SamplingPattern::S1, 0.5, 0.1, 0.1, 0}, 32, 32), ConfigError);
  EXPECT_THROW(make_mask(MaskSpec{SamplingPattern::S1, 3.0, 1.5, 0.1, 0}, 32, 32), ConfigError);
  EXPECT_THROW(parse_pattern("S3"), ConfigError);
  EXPECT_EQ(parse_pattern("S2"), SamplingPattern::S2);
}

TEST(Io, KSpaceRoundTripIsBitwise) {
  const auto y = float_valued(32, 32, 4, 70);
  const auto p = temp_path("rt.ksp");
  write_kspace(p, y);
  EXPECT_EQ(read_kspace(p), y);
  EXPECT_EQ(fs::file_size(p), 20u + 32u * 32u * 4u * 8u);
}

TEST(Io, DoublesAreNarrowedToFloat) {
  const auto y = hicu::testing::random_kspace(4, 4, 1, 71);
  const auto p = temp_path("narrow.ksp");
  write_kspace(p, y);
  const auto back = read_kspace(p);
  for (std::size_t i = 0; i < y.size(); ++i) {
    EXPECT_EQ(back.data()[i].real(), static_cast<double>(static_cast<float>(y.data()[i].real())));
  }
}

TEST(Io, CorruptFiles) {
  const auto p = temp_path("corrupt.ksp");
  write_kspace(p, float_valued(8, 8, 2, 72));
  const auto bytes = slurp(p);
  spit(p, std::vector<std::uint8_t>(bytes.begin(), bytes.end() - 3));
  EXPECT_THROW(read_kspace(p), TruncationError);
  spit(p, std::vector<std::uint8_t>(bytes.begin(), bytes.begin() + 12));
  EXPECT_THROW(read_kspace(p), TruncationError);
  auto longer = bytes;
  longer.insert(longer.end(), 8, 0);
  spit(p, longer);
  EXPECT_THROW(read_kspace(p), DimensionError);
  auto magic = bytes;
  magic[0] = 'X';
  spit(p, magic);
  EXPECT_THROW(read_kspace(p), IoError);
  EXPECT_THROW(read_kspace(temp_path("missing.ksp")), IoError);
  EXPECT_THROW(write_kspace(temp_path("no/such/dir/x.ksp"), float_valued(2, 2, 1, 1)), IoError);
}

TEST(Io, MaskRoundTripAndErrors) {
  const SamplingMask m = make_mask(MaskSpec{SamplingPattern::S1, 3.0, 0.1, 0.1, 1}, 17, 9);
  const auto p = temp_path("m.msk");
  write_mask(p, m);
  EXPECT_EQ(read_mask(p), m);
  const auto bytes = slurp(p);
  EXPECT_EQ(bytes.size(), 16u + 17u * 9u);
  spit(p, std::vector<std::uint8_t>(bytes.begin(), bytes.end() - 1));
  EXPECT_THROW(read_mask(p), TruncationError);
  auto bad = bytes;
  bad.back() = 2;
  spit(p, bad);
  EXPECT_THROW(read_mask(p), DimensionError);
  bad = bytes;
  bad.push_back(1);
  spit(p, bad);
  EXPECT_THROW(read_mask(p), DimensionError);
  bad = bytes;
  bad[4] = 'k';
  spit(p, bad);
  EXPECT_THROW(read_mask(p), IoError);
}
