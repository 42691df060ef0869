#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "hicu/io.hpp"
#include "hicu/kspace.hpp"
#include "hicu/mask.hpp"
#include "hicu/metrics.hpp"

namespace fs = std::filesystem;

namespace {

struct CliRun {
  int code = -1;
  std::string output;
};

// Runs the CLI inside the scratch directory, capturing stdout and stderr.
CliRun hicu_cli(const std::string& args) {
  static const fs::path dir = [] {
    const fs::path d = fs::temp_directory_path() / "hicu_cli_test";
    fs::create_directories(d);
    return d;
  }();
  const std::string cmd = "cd '" + dir.string() + "' && '" HICU_CLI "' " + args + " 2>&1";
  CliRun r;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.output.append(buf, n);
  const int status = ::pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

fs::path scratch(const std::string& name) {
  return fs::temp_directory_path() / "hicu_cli_test" / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

void make_phantom_file() {
  static bool done = false;
  if (done) return;
  ASSERT_EQ(hicu_cli("phantom --nx 64 --ny 64 --nc 4 --seed 7 --out ph.ksp").code, 0);
  done = true;
}

}  // namespace

TEST(Cli, HelpAndUsageErrors) {
  EXPECT_EQ(hicu_cli("--help").code, 0);
  EXPECT_EQ(hicu_cli("recon --help").code, 0);
  EXPECT_EQ(hicu_cli("").code, 2);
  EXPECT_EQ(hicu_cli("frobnicate").code, 2);
  EXPECT_EQ(hicu_cli("phantom --nx 64").code, 2);
  EXPECT_EQ(hicu_cli("phantom --nx 64 --out x.ksp --bogus").code, 2);
}

TEST(Cli, PhantomIsDeterministicAndValidated) {
  ASSERT_EQ(hicu_cli("phantom --nx 64 --ny 64 --nc 4 --seed 7 --out a.ksp").code, 0);
  ASSERT_EQ(hicu_cli("phantom --nx 64 --ny 64 --nc 4 --seed 7 --out b.ksp").code, 0);
  EXPECT_EQ(slurp(scratch("a.ksp")), slurp(scratch("b.ksp")));
  EXPECT_TRUE(fs::exists(scratch("a.ksp.img")));
  const CliRun bad = hicu_cli("phantom --nc 0 --out c.ksp");
  EXPECT_EQ(bad.code, 2);
  EXPECT_NE(bad.output.find("--nc"), std::string::npos);
  EXPECT_FALSE(fs::exists(scratch("c.ksp")));
  ASSERT_EQ(hicu_cli("phantom --nx 32 --ny 32 --nc 2 --noise-db 15 --seed 3 --out n.ksp "
                     "--clean-out nc.ksp").code,
            0);
  const auto noisy = hicu::read_kspace(scratch("n.ksp"));
  const auto clean = hicu::read_kspace(scratch("nc.ksp"));
  EXPECT_NEAR(hicu::snr_db(noisy, clean), 15.0, 1e-3);
}

TEST(Cli, MaskCommand) {
  ASSERT_EQ(hicu_cli("mask --nx 40 --ny 30 --pattern S2 --accel 3 --seed 2 --out l.msk").code, 0);
  const hicu::SamplingMask m = hicu::read_mask(scratch("l.msk"));
  EXPECT_EQ(m.count(), 40u * 10u);
  EXPECT_EQ(hicu_cli("mask --pattern S9 --out q.msk").code, 2);
  EXPECT_EQ(hicu_cli("mask --accel 9 --center-fraction 0.9 --out q.msk").code, 2);
}

TEST(Cli, ReconEndToEndPassesDataConsistencyCheck) {
  make_phantom_file();
  const CliRun r = hicu_cli("recon --kspace ph.ksp --pattern S1 --accel 3 --rank 12 --denoiser identity "
                         "--out r.ksp --trace r.csv --mask-out r.msk --reference ph.ksp");
  ASSERT_EQ(r.code, 0) << r.output;
  const CliRun e = hicu_cli("eval --estimate r.ksp --reference ph.ksp --trace r.csv --check-dc --mask r.msk");
  EXPECT_EQ(e.code, 0) << e.output;
  EXPECT_NE(e.output.find("data_consistency: ok"), std::string::npos);
  EXPECT_NE(e.output.find("peak_snr_db:"), std::string::npos);

  // Better than zero filling against the phantom.
  const auto truth = hicu::read_kspace(scratch("ph.ksp"));
  const auto mask = hicu::read_mask(scratch("r.msk"));
  const auto recon = hicu::read_kspace(scratch("r.ksp"));
  EXPECT_GT(hicu::snr_db(recon, truth), hicu::snr_db(hicu::apply_mask(truth, mask), truth));
  const auto trace = hicu::trace_from_csv(slurp(scratch("r.csv")));
  EXPECT_EQ(trace.size(), 1u + 10u * 5u + 10u * 10u);
}

TEST(Cli, CheckDcDetectsTampering) {
  make_phantom_file();
  ASSERT_EQ(hicu_cli("mask --nx 64 --ny 64 --accel 3 --out t.msk").code, 0);
  ASSERT_EQ(hicu_cli("phantom --nx 64 --ny 64 --nc 4 --seed 7 --noise-db 30 --out other.ksp").code, 0);
  const CliRun e = hicu_cli("eval --estimate other.ksp --reference ph.ksp --check-dc --mask t.msk");
  EXPECT_EQ(e.code, 1);
  EXPECT_NE(e.output.find("FAILED"), std::string::npos);
  EXPECT_EQ(hicu_cli("eval --estimate other.ksp --reference ph.ksp --check-dc").code, 2);
}

TEST(Cli, ReconWithMaskFileSwtAndManifest) {
  make_phantom_file();
  ASSERT_EQ(hicu_cli("mask --nx 64 --ny 64 --pattern S2 --accel 4 --seed 1 --out s2.msk").code, 0);
  const std::string args =
      "--kspace ph.ksp --mask s2.msk --rank 12 --denoiser swt --swt-wavelet db2 "
      "--stages 'center=0.5,p=8,g=3,iters=2;full,p=16,g=3,iters=2,denoise=on' --seed 4";
  ASSERT_EQ(hicu_cli("recon " + args + " --out m1.ksp --manifest-out run.ini").code, 0);
  const std::string manifest = slurp(scratch("run.ini"));
  EXPECT_NE(manifest.find("[recon]"), std::string::npos);
  EXPECT_NE(manifest.find("swt-wavelet=\"db2\""), std::string::npos);
  ASSERT_EQ(hicu_cli("--config run.ini recon --out m2.ksp").code, 0);
  EXPECT_EQ(slurp(scratch("m1.ksp")), slurp(scratch("m2.ksp")));
  EXPECT_EQ(hicu_cli("eval --estimate m1.ksp --reference ph.ksp --check-dc --mask s2.msk").code, 0);
}

TEST(Cli, UnitAccelerationReturnsInput) {
  make_phantom_file();
  ASSERT_EQ(hicu_cli("recon --kspace ph.ksp --accel 1 --rank 12 --out same.ksp").code, 0);
  EXPECT_EQ(slurp(scratch("same.ksp")), slurp(scratch("ph.ksp")));
}

TEST(Cli, ExitCodes) {
  make_phantom_file();
  const CliRun den = hicu_cli("recon --kspace ph.ksp --accel 3 --rank 12 --denoiser external:false --out x.ksp");
  EXPECT_EQ(den.code, 3);
  EXPECT_NE(den.output.find("denoiser"), std::string::npos);
  EXPECT_EQ(hicu_cli("recon --kspace ph.ksp --accel 3 --rank 40 --out x.ksp").code, 2);
  EXPECT_EQ(hicu_cli("recon --kspace ph.ksp --accel 3 --stages 'center=2' --out x.ksp").code, 2);
  EXPECT_EQ(hicu_cli("recon --kspace ph.ksp --denoiser wiener --out x.ksp").code, 2);
  EXPECT_EQ(hicu_cli("recon --kspace missing.ksp --out x.ksp").code, 4);
  EXPECT_EQ(hicu_cli("recon --kspace ph.ksp --out /no/such/dir/x.ksp --stages 'full,iters=1'").code, 4);
  ASSERT_EQ(hicu_cli("mask --nx 32 --ny 32 --out small.msk").code, 0);
  EXPECT_EQ(hicu_cli("recon --kspace ph.ksp --mask small.msk --out x.ksp").code, 2);
  const CliRun ext = hicu_cli("recon --kspace ph.ksp --accel 3 --rank 12 --stages 'full,p=8,g=2,iters=2,denoise=on' "
                           "--denoiser 'external:" ECHO_DENOISER "' --out ext.ksp --mask-out ext.msk");
  EXPECT_EQ(ext.code, 0) << ext.output;
  EXPECT_EQ(hicu_cli("eval --estimate ext.ksp --reference ph.ksp --check-dc --mask ext.msk").code, 0);
}

TEST(Cli, EvalReportsInfAndShapeErrors) {
  make_phantom_file();
  const CliRun same = hicu_cli("eval --estimate ph.ksp --reference ph.ksp");
  EXPECT_EQ(same.code, 0);
  EXPECT_NE(same.output.find("snr_db: inf"), std::string::npos);
  hicu::write_kspace(scratch("zero.ksp"), hicu::MultiCoilKSpace(8, 8, 1));
  const CliRun zero = hicu_cli("eval --estimate zero.ksp --reference zero.ksp");
  EXPECT_EQ(zero.code, 0);
  EXPECT_NE(zero.output.find("snr_db: inf"), std::string::npos);
  EXPECT_EQ(hicu_cli("eval --estimate zero.ksp --reference ph.ksp").code, 2);
  EXPECT_EQ(hicu_cli("eval --estimate ph.ksp --reference nothing.ksp").code, 4);
}

TEST(Cli, BudgetTruncatesButKeepsMeasurements) {
  make_phantom_file();
  ASSERT_EQ(hicu_cli("recon --kspace ph.ksp --accel 3 --rank 12 --budget-seconds 0 --out b.ksp "
                     "--trace b.csv --mask-out b.msk").code,
            0);
  EXPECT_EQ(hicu::trace_from_csv(slurp(scratch("b.csv"))).size(), 2u);
  EXPECT_EQ(hicu_cli("eval --estimate b.ksp --reference ph.ksp --check-dc --mask b.msk").code, 0);
}
