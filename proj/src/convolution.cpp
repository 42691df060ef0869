#include "hicu/convolution.hpp"

#include <algorithm>
#include <string>

#include "hicu/error.hpp"

namespace hicu {

void KernelSpec::validate() const {
  if (kx < 1 || ky < 1 || kx % 2 == 0 || ky % 2 == 0) {
    throw DimensionError("kernel extents must be odd and positive, got " + std::to_string(kx) +
                         "x" + std::to_string(ky));
  }
  if (nc < 1) throw DimensionError("kernel coil count must be positive");
  if (length() < 2) throw DimensionError("kernel must hold at least two samples");
}

Region full_valid_region(int nx, int ny, const KernelSpec& k) {
  k.validate();
  Region r{k.half_x(), k.half_y(), nx - 2 * k.half_x(), ny - 2 * k.half_y()};
  if (r.width < 1 || r.height < 1) {
    throw DimensionError("array " + std::to_string(nx) + "x" + std::to_string(ny) +
                         " is smaller than the kernel");
  }
  return r;
}

void validate_region(const Region& r, int nx, int ny, const KernelSpec& k) {
  k.validate();
  const bool inside = r.width >= 1 && r.height >= 1 && r.x0 - k.half_x() >= 0 &&
                      r.y0 - k.half_y() >= 0 && r.x0 + r.width - 1 + k.half_x() < nx &&
                      r.y0 + r.height - 1 + k.half_y() < ny;
  if (!inside) {
    throw DimensionError("region [" + std::to_string(r.x0) + "," + std::to_string(r.y0) + " " +
                         std::to_string(r.width) + "x" + std::to_string(r.height) +
                         "] is not a valid-convolution region of a " + std::to_string(nx) + "x" +
                         std::to_string(ny) + " array");
  }
}

FilterBank::FilterBank(CMatrix coefficients) : coeffs_(std::move(coefficients)) {
  if (coeffs_.cols() < 1 || coeffs_.cols() > coeffs_.rows()) {
    throw DimensionError("filter bank needs 1 <= p <= n, got n=" + std::to_string(coeffs_.rows()) +
                         " p=" + std::to_string(coeffs_.cols()));
  }
}

namespace {

void check_operands(const MultiCoilKSpace& y, const KernelSpec& k, const Region& r) {
  if (k.nc != y.nc()) throw DimensionError("kernel coil count does not match k-space");
  validate_region(r, y.nx(), y.ny(), k);
}

}  // namespace

CMatrix materialize_convolution_matrix(const MultiCoilKSpace& y, const KernelSpec& k,
                                       const Region& r) {
  check_operands(y, k, r);
  CMatrix h(r.rows(), k.length());
  for (int c = 0; c < k.nc; ++c)
    for (int dy = -k.half_y(); dy <= k.half_y(); ++dy)
      for (int dx = -k.half_x(); dx <= k.half_x(); ++dx) {
        const int col = k.column(dx, dy, c);
        for (int sy = r.y0; sy < r.y0 + r.height; ++sy)
          for (int sx = r.x0; sx < r.x0 + r.width; ++sx) h(r.row(sx, sy), col) = y(sx + dx, sy + dy, c);
      }
  return h;
}

namespace {

// Rows of the region are processed in bands of whole region lines so that
// only a bounded slice of the convolution matrix exists at any time.
constexpr Eigen::Index kChunkRows = 4096;

int lines_per_chunk(const Region& r) {
  return std::max(1, static_cast<int>(kChunkRows / std::max(1, r.width)));
}

// Patches for region lines [sy0, sy1) as a (lines * width) x n block.
void extract_patches(const MultiCoilKSpace& y, const KernelSpec& k, const Region& r, int sy0,
                     int sy1, CMatrix& patches) {
  patches.resize(static_cast<Eigen::Index>(sy1 - sy0) * r.width, k.length());
  for (int c = 0; c < k.nc; ++c)
    for (int dy = -k.half_y(); dy <= k.half_y(); ++dy)
      for (int dx = -k.half_x(); dx <= k.half_x(); ++dx) {
        Complex* dst = patches.col(k.column(dx, dy, c)).data();
        for (int sy = sy0; sy < sy1; ++sy) {
          const Complex* src = &y(r.x0 + dx, sy + dy, c);
          std::copy(src, src + r.width, dst + static_cast<std::ptrdiff_t>(r.width) * (sy - sy0));
        }
      }
}

// Adds the patch block back onto the array: transpose of extract_patches.
void scatter_patches(const CMatrix& patches, const KernelSpec& k, const Region& r, int sy0,
                     int sy1, MultiCoilKSpace& out) {
  for (int c = 0; c < k.nc; ++c)
    for (int dy = -k.half_y(); dy <= k.half_y(); ++dy)
      for (int dx = -k.half_x(); dx <= k.half_x(); ++dx) {
        const Complex* src = patches.col(k.column(dx, dy, c)).data();
        for (int sy = sy0; sy < sy1; ++sy) {
          Complex* dst = &out(r.x0 + dx, sy + dy, c);
          const Complex* row = src + static_cast<std::ptrdiff_t>(r.width) * (sy - sy0);
          for (int i = 0; i < r.width; ++i) dst[i] += row[i];
        }
      }
}

}  // namespace

CMatrix apply_filters(const MultiCoilKSpace& y, const CMatrix& filters, const KernelSpec& k,
                      const Region& r) {
  check_operands(y, k, r);
  if (filters.rows() != k.length()) {
    throw DimensionError("filter length " + std::to_string(filters.rows()) +
                         " does not match kernel length " + std::to_string(k.length()));
  }
  CMatrix out(r.rows(), filters.cols());
  CMatrix patches;
  const int step = lines_per_chunk(r);
  for (int sy0 = r.y0; sy0 < r.y0 + r.height; sy0 += step) {
    const int sy1 = std::min(sy0 + step, r.y0 + r.height);
    extract_patches(y, k, r, sy0, sy1, patches);
    out.middleRows(static_cast<Eigen::Index>(sy0 - r.y0) * r.width, patches.rows()).noalias() =
        patches * filters;
  }
  return out;
}

CMatrix apply_filters(const MultiCoilKSpace& y, const FilterBank& f, const KernelSpec& k,
                      const Region& r) {
  return apply_filters(y, f.coefficients(), k, r);
}

MultiCoilKSpace adjoint_scatter(const CMatrix& residuals, const CMatrix& filters,
                                const KernelSpec& k, const Region& r, int nx, int ny) {
  k.validate();
  validate_region(r, nx, ny, k);
  if (filters.rows() != k.length()) throw DimensionError("filter length does not match kernel");
  if (residuals.rows() != r.rows() || residuals.cols() != filters.cols()) {
    throw DimensionError("residual block is " + std::to_string(residuals.rows()) + "x" +
                         std::to_string(residuals.cols()) + ", expected " +
                         std::to_string(r.rows()) + "x" + std::to_string(filters.cols()));
  }
  MultiCoilKSpace out(nx, ny, k.nc);
  CMatrix patches;
  const int step = lines_per_chunk(r);
  for (int sy0 = r.y0; sy0 < r.y0 + r.height; sy0 += step) {
    const int sy1 = std::min(sy0 + step, r.y0 + r.height);
    const Eigen::Index rows = static_cast<Eigen::Index>(sy1 - sy0) * r.width;
    patches.noalias() =
        residuals.middleRows(static_cast<Eigen::Index>(sy0 - r.y0) * r.width, rows) *
        filters.adjoint();
    scatter_patches(patches, k, r, sy0, sy1, out);
  }
  return out;
}

MultiCoilKSpace adjoint_scatter(const CMatrix& residuals, const FilterBank& f,
                                const KernelSpec& k, const Region& r, int nx, int ny) {
  return adjoint_scatter(residuals, f.coefficients(), k, r, nx, ny);
}

double compressed_cost(const MultiCoilKSpace& w, const FilterBank& f, const KernelSpec& k,
                       const Region& r) {
  return apply_filters(w, f, k, r).squaredNorm();
}

MultiCoilKSpace cost_gradient(const MultiCoilKSpace& w, const FilterBank& f, const KernelSpec& k,
                              const Region& r, const SamplingMask& mask) {
  return cost_gradient(w, apply_filters(w, f, k, r), f, k, r, mask);
}

MultiCoilKSpace cost_gradient(const MultiCoilKSpace& w, const CMatrix& residuals,
                              const FilterBank& f, const KernelSpec& k, const Region& r,
                              const SamplingMask& mask) {
  if (!mask.fits(w)) throw DimensionError("mask extents do not match k-space");
  MultiCoilKSpace g = adjoint_scatter(residuals, f, k, r, w.nx(), w.ny());
  g *= 2.0;
  // Measured samples are fixed by data consistency, so they carry no gradient.
  for (int c = 0; c < g.nc(); ++c)
    for (int y = 0; y < g.ny(); ++y)
      for (int x = 0; x < g.nx(); ++x)
        if (mask(x, y)) g(x, y, c) = Complex(0.0);
  return g;
}

LineSearchResult exact_line_search(const MultiCoilKSpace& w, const MultiCoilKSpace& g,
                                   const FilterBank& f, const KernelSpec& k, const Region& r) {
  return exact_line_search(apply_filters(w, f, k, r), g, f, k, r);
}

LineSearchResult exact_line_search(const CMatrix& a, const MultiCoilKSpace& g, const FilterBank& f,
                                   const KernelSpec& k, const Region& r) {
  if (a.rows() != r.rows() || a.cols() != f.count()) {
    throw DimensionError("residual block does not match region and filters");
  }
  LineSearchResult res;
  res.cost_before = a.squaredNorm();
  res.cost_after = res.cost_before;
  if (g.squared_norm() == 0.0) return res;

  const CMatrix b = apply_filters(g, f, k, r);
  const double bb = b.squaredNorm();
  if (bb == 0.0) {
    res.degenerate = true;
    return res;
  }
  const double ab = a.cwiseProduct(b.conjugate()).sum().real();
  res.eta = std::max(0.0, ab / bb);
  res.cost_after = std::max(0.0, res.cost_before - 2.0 * res.eta * ab + res.eta * res.eta * bb);
  return res;
}

ConvolutionOperator::ConvolutionOperator(const MultiCoilKSpace& y, KernelSpec k, Region r)
    : y_(y), kernel_(k), region_(r) {
  check_operands(y_, kernel_, region_);
}

CMatrix ConvolutionOperator::apply(const CMatrix& x) const {
  return apply_filters(y_, x, kernel_, region_);
}

CMatrix ConvolutionOperator::apply_adjoint(const CMatrix& ymat) const {
  if (ymat.rows() != region_.rows()) throw DimensionError("adjoint operand has wrong row count");
  CMatrix out = CMatrix::Zero(kernel_.length(), ymat.cols());
  CMatrix patches;
  const int step = lines_per_chunk(region_);
  for (int sy0 = region_.y0; sy0 < region_.y0 + region_.height; sy0 += step) {
    const int sy1 = std::min(sy0 + step, region_.y0 + region_.height);
    extract_patches(y_, kernel_, region_, sy0, sy1, patches);
    out.noalias() += patches.adjoint() *
                     ymat.middleRows(static_cast<Eigen::Index>(sy0 - region_.y0) * region_.width,
                                     patches.rows());
  }
  return out;
}

}  // namespace hicu
