#pragma once

#include "hicu/kspace.hpp"

namespace hicu {

/// Rectangular kx x ky x nc neighbourhood. Extents are odd so every
/// neighbourhood has a well-defined centre sample.
struct KernelSpec {
  int kx = 3;
  int ky = 3;
  int nc = 1;

  int half_x() const { return kx / 2; }
  int half_y() const { return ky / 2; }
  /// Filter length n = kx * ky * nc.
  int length() const { return kx * ky * nc; }

  /// Column of the convolution matrix holding sample (x+dx, y+dy, c) for an
  /// output centred at (x, y). Ordering is x fastest, then y, then coil.
  int column(int dx, int dy, int c) const {
    return (dx + half_x()) + kx * ((dy + half_y()) + ky * c);
  }

  /// Throws DimensionError unless the extents describe a usable kernel.
  void validate() const;
};

/// Rectangle of output (kernel-centre) positions for valid convolution.
/// Rows of the convolution matrix enumerate it x fastest, then y.
struct Region {
  int x0 = 0;
  int y0 = 0;
  int width = 0;
  int height = 0;

  int rows() const { return width * height; }
  int row(int x, int y) const { return (x - x0) + width * (y - y0); }

  friend bool operator==(const Region&, const Region&) = default;
};

/// Largest region whose kernels never overhang an nx x ny array.
Region full_valid_region(int nx, int ny, const KernelSpec& k);

/// Throws DimensionError if `r` is empty or lets the kernel leave the array.
void validate_region(const Region& r, int nx, int ny, const KernelSpec& k);

/// p filters of length n, stored as the columns of an n x p matrix.
class FilterBank {
 public:
  FilterBank() = default;
  explicit FilterBank(CMatrix coefficients);

  int length() const { return static_cast<int>(coeffs_.rows()); }
  int count() const { return static_cast<int>(coeffs_.cols()); }
  const CMatrix& coefficients() const { return coeffs_; }

 private:
  CMatrix coeffs_;
};

/// Dense m x n convolution matrix H(y) restricted to `r`. Row for output
/// position s is the raw (unflipped) neighbourhood of y around s. Meant for
/// small problems and test oracles.
///
/// The implicit routines below never hold more than a few thousand rows of
/// H at once: they extract patches band by band and multiply each band.
CMatrix materialize_convolution_matrix(const MultiCoilKSpace& y, const KernelSpec& k,
                                       const Region& r);

/// H(y) * F without forming H; m x p.
CMatrix apply_filters(const MultiCoilKSpace& y, const CMatrix& filters, const KernelSpec& k,
                      const Region& r);
CMatrix apply_filters(const MultiCoilKSpace& y, const FilterBank& f, const KernelSpec& k,
                      const Region& r);

/// Adjoint of y -> H(y) * F under the standard complex inner product. Every
/// residual column j is scattered back through the conjugated filter j and
/// the contributions are summed into an nx x ny x nc array.
MultiCoilKSpace adjoint_scatter(const CMatrix& residuals, const CMatrix& filters,
                                const KernelSpec& k, const Region& r, int nx, int ny);
MultiCoilKSpace adjoint_scatter(const CMatrix& residuals, const FilterBank& f,
                                const KernelSpec& k, const Region& r, int nx, int ny);

/// ||H(w) F||_F^2
double compressed_cost(const MultiCoilKSpace& w, const FilterBank& f, const KernelSpec& k,
                       const Region& r);

/// Gradient of ||H(w) F||_F^2 in the Wirtinger convention (2 * d/d conj(w)),
/// zeroed at every sampled location of `mask`.
MultiCoilKSpace cost_gradient(const MultiCoilKSpace& w, const FilterBank& f, const KernelSpec& k,
                              const Region& r, const SamplingMask& mask);
/// Same, reusing residuals = H(w) F computed by the caller.
MultiCoilKSpace cost_gradient(const MultiCoilKSpace& w, const CMatrix& residuals,
                              const FilterBank& f, const KernelSpec& k, const Region& r,
                              const SamplingMask& mask);

struct LineSearchResult {
  double eta = 0.0;
  /// ||H(g) F|| vanished although g is nonzero.
  bool degenerate = false;
  /// ||H(w) F||^2 and ||H(w - eta g) F||^2.
  double cost_before = 0.0;
  double cost_after = 0.0;
};

/// Exact minimiser of eta -> ||H(w - eta g) F||_F^2. A zero direction gives
/// eta = 0 without the degenerate flag.
LineSearchResult exact_line_search(const MultiCoilKSpace& w, const MultiCoilKSpace& g,
                                   const FilterBank& f, const KernelSpec& k, const Region& r);
/// Same, with residuals = H(w) F already computed.
LineSearchResult exact_line_search(const CMatrix& residuals, const MultiCoilKSpace& g,
                                   const FilterBank& f, const KernelSpec& k, const Region& r);

/// Implicit linear operator, used by the randomized SVD.
class LinearOperator {
 public:
  virtual ~LinearOperator() = default;
  virtual int rows() const = 0;
  virtual int cols() const = 0;
  /// A * X for an n x l block X.
  virtual CMatrix apply(const CMatrix& x) const = 0;
  /// A^H * Y for an m x l block Y.
  virtual CMatrix apply_adjoint(const CMatrix& y) const = 0;
};

/// H(y) over a region, exposed as an operator on filter blocks.
class ConvolutionOperator final : public LinearOperator {
 public:
  ConvolutionOperator(const MultiCoilKSpace& y, KernelSpec k, Region r);

  int rows() const override { return region_.rows(); }
  int cols() const override { return kernel_.length(); }
  CMatrix apply(const CMatrix& x) const override;
  CMatrix apply_adjoint(const CMatrix& y) const override;

 private:
  const MultiCoilKSpace& y_;
  KernelSpec kernel_;
  Region region_;
};

/// Plain dense matrix wrapped as an operator.
class MatrixOperator final : public LinearOperator {
 public:
  explicit MatrixOperator(CMatrix a) : a_(std::move(a)) {}

  int rows() const override { return static_cast<int>(a_.rows()); }
  int cols() const override { return static_cast<int>(a_.cols()); }
  CMatrix apply(const CMatrix& x) const override { return a_ * x; }
  CMatrix apply_adjoint(const CMatrix& y) const override { return a_.adjoint() * y; }

 private:
  CMatrix a_;
};

}  // namespace hicu
