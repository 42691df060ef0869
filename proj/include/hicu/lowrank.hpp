#pragma once

#include "hicu/convolution.hpp"
#include "hicu/rng.hpp"

namespace hicu {

/// Orthonormal n x r basis of the dominant right singular subspace.
struct SignalSubspace {
  CMatrix v;
  int length() const { return static_cast<int>(v.rows()); }
  int rank() const { return static_cast<int>(v.cols()); }
};

/// Orthonormal n x (n - r) basis orthogonal to a SignalSubspace.
struct NullspaceBasis {
  CMatrix q;
  int length() const { return static_cast<int>(q.rows()); }
  int dimension() const { return static_cast<int>(q.cols()); }
};

struct RsvdOptions {
  int rank = 30;
  int oversample = 10;
  int power_iterations = 2;
};

/// Top `rank` right singular vectors of an implicit operator by randomized
/// range finding on the row space: Gaussian sketch through A^H, power
/// iterations with re-orthonormalisation after every product, then an SVD of
/// the small projected matrix. The operator is only touched through
/// apply/apply_adjoint.
///
/// When rank + oversample exceeds min(m, n) the sketch width is capped there;
/// rank itself must not exceed min(m, n).
SignalSubspace rsvd_right_vectors(const LinearOperator& op, const RsvdOptions& opts,
                                  RngStream& rng);

/// Same as above, also returning the leading singular value estimates.
SignalSubspace rsvd_right_vectors(const LinearOperator& op, const RsvdOptions& opts,
                                  RngStream& rng, Eigen::VectorXd* singular_values);

/// Orthonormal complement of `v` from r Householder reflections.
///
/// Reflection k zeroes column k of the (partially reduced) basis below row k.
/// The product of the reflections is unitary and its first r columns span
/// v, so the remaining n - r columns form the null-space basis. r = 0 yields
/// the identity. Throws DegenerateInputError when a column is numerically
/// dependent on the previous ones.
NullspaceBasis householder_complement(const SignalSubspace& v);

/// Random mixing Q * P / sqrt(p) with P an (n - r) x p matrix of i.i.d.
/// real standard normals, drawn fresh from `rng` on every call.
FilterBank jl_compress(const NullspaceBasis& q, int p, RngStream& rng);

/// Q * P for a caller-supplied mixing matrix (no scaling). Passing the
/// identity returns the full null-space basis as filters.
FilterBank mix_nullspace(const NullspaceBasis& q, const RMatrix& mixing);

/// Orthonormal basis of the columns of `a` (thin Householder QR).
CMatrix orthonormalize(const CMatrix& a);

}  // namespace hicu
