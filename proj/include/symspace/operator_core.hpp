#pragma once

#include <complex>
#include <optional>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "symspace/error.hpp"

namespace symspace {

using Complex = std::complex<double>;
using RealMatrix = Eigen::MatrixXd;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;
using ComplexColumn = Eigen::VectorXcd;
using Index = Eigen::Index;

/// Dense real square operator T : X → X with finite entries.
class RealOperator {
 public:
  explicit RealOperator(RealMatrix entries);

  static RealOperator identity(Index n);
  static RealOperator zero(Index n);

  Index dim() const noexcept { return entries_.rows(); }
  const RealMatrix& matrix() const noexcept { return entries_; }

 private:
  RealMatrix entries_;
};

/// Dense complex square operator on X_C with finite entries.
class ComplexOperator {
 public:
  explicit ComplexOperator(ComplexMatrix entries);

  static ComplexOperator identity(Index n);

  Index dim() const noexcept { return entries_.rows(); }
  const ComplexMatrix& matrix() const noexcept { return entries_; }

 private:
  ComplexMatrix entries_;
};

/// z = x + iy in X_C, stored by real and imaginary parts.
class ComplexVector {
 public:
  ComplexVector(RealVector re, RealVector im);

  static ComplexVector from_complex(const ComplexColumn& z);
  static ComplexVector real(RealVector x);

  Index size() const noexcept { return re_.size(); }
  const RealVector& re() const noexcept { return re_; }
  const RealVector& im() const noexcept { return im_; }
  ComplexColumn to_complex() const;

 private:
  RealVector re_;
  RealVector im_;
};

enum class BaseNormKind { euclidean, sup, one };

std::string_view to_string(BaseNormKind kind);
BaseNormKind parse_base_norm(std::string_view text);

/// Partial-pivoting LU of λI − A. Construction throws SingularShiftError when
/// a pivot falls below 1e-14·max(‖A‖_max, |λ|).
class LUFactorization {
 public:
  LUFactorization(const ComplexOperator& a, Complex shift);

  Complex shift() const noexcept { return shift_; }
  double min_pivot() const noexcept { return min_pivot_; }

  ComplexColumn solve(const ComplexColumn& rhs) const;
  ComplexMatrix solve(const ComplexMatrix& rhs) const;
  ComplexMatrix inverse() const;
  // P⁻¹·L·U, i.e. the factored matrix λI − A rebuilt from the factors.
  ComplexMatrix reconstruct() const;

 private:
  Complex shift_;
  double min_pivot_ = 0.0;
  Eigen::PartialPivLU<ComplexMatrix> lu_;
};

// Largest absolute entry; 0 for empty matrices.
template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

// Spectral norm (largest singular value).
double norm2(const RealMatrix& m);
double norm2(const ComplexMatrix& m);

ComplexOperator complexify(const RealOperator& t);
ComplexVector apply(const ComplexOperator& a, const ComplexVector& z);

/// J(x + iy) = x − iy.
ComplexVector conjugate_vector(const ComplexVector& z);

double base_norm(const RealVector& x, BaseNormKind kind);

/// ‖z‖ = max_{|λ|=1} sqrt(‖Re(λz)‖² + ‖Im(λz)‖²), with the maximum located on a
/// uniform grid of φ = arg λ followed by ternary refinement around the best cell.
double complexification_norm(const ComplexVector& z, BaseNormKind base, int grid_size = 256);

/// w = (λI − A)⁻¹ v.
ComplexColumn resolvent_solve(const ComplexOperator& a, Complex lambda, const ComplexColumn& v);

/// Full resolvent matrix R(λ, A).
ComplexMatrix resolvent(const ComplexOperator& a, Complex lambda);

/// ‖R(λ̄, T_C) − J∘R(λ, T_C)∘J‖_max. In canonical coordinates J is entrywise
/// conjugation, so the second term is conj(R(λ, T_C)).
double conjugation_identity_residual(const RealOperator& t, Complex lambda);

}  // namespace symspace
