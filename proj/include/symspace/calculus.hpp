#pragma once

#include <optional>
#include <string>
#include <vector>

#include "symspace/contour.hpp"
#include "symspace/operator_core.hpp"

namespace symspace {

/// g in f(A) = (1/2πi)∮ g(λ) R(λ, A) dλ. Real coefficients make g(λ̄) = conj g(λ),
/// which is what keeps f(T_C) real on conjugation-closed contours.
class WeightFunction {
 public:
  enum class Kind { constant_one, polynomial, rational };

  static WeightFunction one();
  // Coefficients in ascending powers: {c0, c1, ...} ↦ c0 + c1 λ + ...
  static WeightFunction polynomial(std::vector<double> coeffs);
  static WeightFunction rational(std::vector<double> numerator, std::vector<double> denominator);

  Kind kind() const noexcept { return kind_; }
  Complex operator()(Complex lambda) const;
  // Roots of the denominator (empty unless rational).
  std::vector<Complex> poles() const;
  std::string describe() const;

 private:
  WeightFunction(Kind k, std::vector<double> num, std::vector<double> den)
      : kind_(k), num_(std::move(num)), den_(std::move(den)) {}

  Kind kind_;
  std::vector<double> num_;
  std::vector<double> den_;
};

/// Orthonormal columns spanning a subspace, plus the residuals measured on it.
template <typename Scalar>
struct SubspaceBasis {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  Matrix columns;
  std::optional<double> invariance_residual;
  std::optional<double> symmetry_residual;

  Index dim() const noexcept { return columns.rows(); }
  Index rank() const noexcept { return columns.cols(); }
};

using RealSubspace = SubspaceBasis<double>;
using ComplexSubspace = SubspaceBasis<Complex>;

inline constexpr double kDefaultRankTol = 1e-8;

/// P = ∑_j w_j R(λ_j, A), one LU per node. A node on the spectrum raises
/// SingularShiftError with code NodeOnSpectrum.
ComplexMatrix riesz_projection(const ComplexOperator& a, const QuadratureRule& rule);

/// f(A) = ∑_j w_j g(λ_j) R(λ_j, A). Throws WeightPoleNearContour if a pole of g
/// lies within standoff/2 of any node.
ComplexMatrix weighted_calculus(const ComplexOperator& a, const QuadratureRule& rule,
                                const WeightFunction& g);

struct AdaptiveProjection {
  ComplexMatrix projection;
  int nodes_per_loop = 0;
  double last_difference = 0.0;  // ‖P_N − P_2N‖_max at acceptance
};

/// Doubles nodes_per_loop from `initial_nodes` until successive projections
/// agree to `tol` in max norm; returns the finer one. Throws ResidualError
/// (NotConverged) once the next doubling would exceed max_nodes.
AdaptiveProjection adaptive_projection(const ComplexOperator& a, const Contour& contour, double tol,
                                       int max_nodes = 4096, int initial_nodes = 16);

struct ProjectionDiagnostics {
  Complex trace;
  double idempotency = 0.0;   // ‖P² − P‖₂
  double commutation = 0.0;   // ‖AP − PA‖₂
  double imag_max = 0.0;      // ‖Im P‖_max
  double max_entry = 0.0;     // ‖P‖_max
};

ProjectionDiagnostics diagnose_projection(const ComplexOperator& a, const ComplexMatrix& p);

/// Left singular vectors with σ_i > tol_rel·σ_1 (empty when M = 0).
ComplexSubspace range_basis(const ComplexMatrix& m, double tol_rel = kDefaultRankTol);
RealSubspace range_basis(const RealMatrix& m, double tol_rel = kDefaultRankTol);

/// Right singular vectors with σ_i ≤ tol_rel·σ_1 (everything when M = 0).
ComplexSubspace kernel_basis(const ComplexMatrix& m, double tol_rel = kDefaultRankTol);
RealSubspace kernel_basis(const RealMatrix& m, double tol_rel = kDefaultRankTol);

/// Range and kernel of a computed projection, thresholded at tol_rel·max(σ_1, 1)
/// so that a numerically vanishing P has rank 0.
ComplexSubspace projection_range(const ComplexMatrix& p, double tol_rel = kDefaultRankTol);
ComplexSubspace projection_kernel(const ComplexMatrix& p, double tol_rel = kDefaultRankTol);

/// ‖(I − ZZᴴ)·conj(Z)‖₂: zero iff span(Z) is closed under conjugation.
double symmetry_residual(const ComplexMatrix& z);

/// Real basis of span{Re z, Im z : z ∈ Z}. Throws ResidualError (NotSymmetric)
/// when Z's conjugation-closure residual exceeds sym_tol. When `t` is given the
/// invariance residual of the result under t is recorded.
RealSubspace real_part_subspace(const ComplexSubspace& z, double sym_tol,
                                const RealOperator* t = nullptr);

/// ‖(I − QQᴴ)·T·Q‖₂ / max(‖T‖₂, 1).
double invariance_residual(const RealMatrix& t, const RealMatrix& q);
double invariance_residual(const ComplexMatrix& t, const ComplexMatrix& q);

/// Largest principal angle between two orthonormal column sets (π/2 when the
/// ranks differ).
double max_principal_angle(const ComplexMatrix& q1, const ComplexMatrix& q2);

struct SpectralPartition {
  struct Cell {
    std::string label;
    Contour contour;
  };
  std::vector<Cell> cells;
};

/// Checks that every eigenvalue has winding number 1 for exactly one cell.
/// Throws InvalidArgument naming the first offending eigenvalue.
void validate_partition(const SpectralPartition& partition, const std::vector<Complex>& eigenvalues,
                        int nodes_per_loop = kDefaultNodesPerLoop);

struct PartitionProjections {
  std::vector<std::string> labels;
  std::vector<ComplexMatrix> projections;
  // mirror[i] is the cell containing the conjugate of cell i's interior, or -1.
  std::vector<int> mirror;
};

PartitionProjections project_partition(const ComplexOperator& a, const SpectralPartition& partition,
                                       int nodes_per_loop = kDefaultNodesPerLoop);

/// Labels of cells whose projection does not annihilate z: ‖P_i z‖ > tol·‖z‖.
std::vector<std::string> local_spectrum_support(const PartitionProjections& cells,
                                                const ComplexColumn& z, double tol = 1e-8);

}  // namespace symspace
