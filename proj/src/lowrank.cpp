#include "hicu/lowrank.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/QR>
#include <Eigen/SVD>

#include "hicu/error.hpp"

namespace hicu {

CMatrix orthonormalize(const CMatrix& a) {
  const Eigen::Index k = std::min(a.rows(), a.cols());
  Eigen::HouseholderQR<CMatrix> qr(a);
  return qr.householderQ() * CMatrix::Identity(a.rows(), k);
}

SignalSubspace rsvd_right_vectors(const LinearOperator& op, const RsvdOptions& opts,
                                  RngStream& rng) {
  return rsvd_right_vectors(op, opts, rng, nullptr);
}

SignalSubspace rsvd_right_vectors(const LinearOperator& op, const RsvdOptions& opts,
                                  RngStream& rng, Eigen::VectorXd* singular_values) {
  const int m = op.rows();
  const int n = op.cols();
  const int limit = std::min(m, n);
  if (opts.rank < 0 || opts.rank > limit) {
    throw ConfigError("rank " + std::to_string(opts.rank) + " exceeds operator dimensions " +
                      std::to_string(m) + "x" + std::to_string(n));
  }
  if (opts.oversample < 0 || opts.power_iterations < 0) {
    throw ConfigError("oversampling and power iterations must be non-negative");
  }
  if (opts.rank == 0) {
    if (singular_values) singular_values->resize(0);
    return SignalSubspace{CMatrix(n, 0)};
  }
  const int width = std::min(opts.rank + opts.oversample, limit);

  // Row-space sketch: X = orth(A^H Omega).
  const CMatrix omega = rng.complex_normal_matrix(m, width);
  CMatrix x = orthonormalize(op.apply_adjoint(omega));
  for (int t = 0; t < opts.power_iterations; ++t) {
    const CMatrix y = orthonormalize(op.apply(x));
    x = orthonormalize(op.apply_adjoint(y));
  }

  // A ~ (A X) X^H; the SVD of the tall m x width block A X = U S W^H gives
  // right singular vectors X W. Reduce it to width x width with a QR first.
  const CMatrix b = op.apply(x);
  Eigen::HouseholderQR<CMatrix> qr(b);
  const Eigen::Index k = std::min<Eigen::Index>(b.rows(), b.cols());
  const CMatrix r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  Eigen::JacobiSVD<CMatrix> svd(r, Eigen::ComputeFullV);

  if (singular_values) *singular_values = svd.singularValues().head(opts.rank);
  return SignalSubspace{x * svd.matrixV().leftCols(opts.rank)};
}

NullspaceBasis householder_complement(const SignalSubspace& v) {
  const int n = v.length();
  const int r = v.rank();
  if (r > n) throw DimensionError("signal subspace has more columns than rows");
  if (r == 0) return NullspaceBasis{CMatrix::Identity(n, n)};

  CMatrix a = v.v;
  // Reflector k is I - 2 u_k u_k^H with unit u_k supported on rows k..n-1.
  std::vector<Eigen::VectorXcd> reflectors;
  reflectors.reserve(r);
  for (int k = 0; k < r; ++k) {
    const Eigen::Index len = n - k;
    Eigen::VectorXcd u = a.block(k, k, len, 1);
    const double alpha = u.norm();
    const double scale = std::max(1.0, v.v.col(k).norm());
    if (!(alpha > 1e-8 * scale)) {
      throw DegenerateInputError("signal subspace column " + std::to_string(k) +
                                 " is numerically dependent on the previous columns");
    }
    const Complex x0 = u(0);
    const Complex phase = std::abs(x0) > 0.0 ? x0 / std::abs(x0) : Complex(1.0);
    u(0) += phase * alpha;
    u.normalize();
    // Apply to the trailing block of the basis being reduced.
    auto block = a.block(k, k, len, r - k);
    const Eigen::RowVectorXcd proj = u.adjoint() * block;
    block.noalias() -= 2.0 * u * proj;
    reflectors.push_back(std::move(u));
  }

  // Q = H_0 H_1 ... H_{r-1} [0; I], applied right to left.
  CMatrix q = CMatrix::Zero(n, n - r);
  q.bottomRows(n - r).setIdentity();
  for (int k = r - 1; k >= 0; --k) {
    const Eigen::VectorXcd& u = reflectors[k];
    auto block = q.bottomRows(n - k);
    const Eigen::RowVectorXcd proj = u.adjoint() * block;
    block.noalias() -= 2.0 * u * proj;
  }
  return NullspaceBasis{std::move(q)};
}

FilterBank jl_compress(const NullspaceBasis& q, int p, RngStream& rng) {
  const int d = q.dimension();
  if (p < 1 || p > d) {
    throw ConfigError("compression dimension p=" + std::to_string(p) + " must lie in [1, " +
                      std::to_string(d) + "]");
  }
  const RMatrix mixing = rng.normal_matrix(d, p) / std::sqrt(static_cast<double>(p));
  return FilterBank(q.q * mixing.cast<Complex>());
}

FilterBank mix_nullspace(const NullspaceBasis& q, const RMatrix& mixing) {
  if (mixing.rows() != q.dimension()) {
    throw DimensionError("mixing matrix rows do not match null-space dimension");
  }
  return FilterBank(q.q * mixing.cast<Complex>());
}

}  // namespace hicu
