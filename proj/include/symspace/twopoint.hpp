#pragma once

#include <optional>
#include <string_view>

#include "symspace/calculus.hpp"
#include "symspace/operator_core.hpp"

namespace symspace {

/// Spectrum numerically concentrated at {η, η̄}, Im η ≥ 0.
struct TwoPointSpectrum {
  Complex eta;
  int k = 0;                    // growth exponent bound
  double cluster_radius = 0.0;  // max distance of an eigenvalue to {η, η̄}
};

/// Coefficients of (λ − η)(λ − η̄) = λ² − aλ + b.
struct PencilCoefficients {
  double a = 0.0;  // 2 Re η
  double b = 0.0;  // |η|²
};

PencilCoefficients pencil_coefficients(Complex eta);

/// M = T² − aT + bI, formed in real arithmetic.
RealMatrix quadratic_pencil(const RealOperator& t, Complex eta);

/// ‖M_C − (T_C − ηI)(T_C − η̄I)‖_max.
double pencil_factorization_residual(const RealOperator& t, Complex eta);

/// Smallest j ≤ k_max + 1 with ‖N^j‖₂ ≤ tol, N = M/‖M‖₂; 1 when M = 0.
std::optional<int> nilpotency_index(const RealMatrix& m, int k_max, double tol = 1e-10);

/// Orthonormal Krylov basis of {x, Tx, T²x, ...}, stopping when the next
/// direction is numerically dependent or max_dim is reached. Throws ZeroVector.
RealSubspace cyclic_subspace(const RealOperator& t, const RealVector& x, int max_dim);

enum class PencilBranch { pencil_range, cyclic_plane };
std::string_view to_string(PencilBranch branch);

struct PencilSubspace {
  RealSubspace basis;
  PencilBranch branch = PencilBranch::pencil_range;
  PencilCoefficients coefficients;
  Index pencil_rank = 0;
  double pencil_norm = 0.0;  // ‖M‖₂
  double pencil_scale = 0.0; // ‖T‖₂² + |a|‖T‖₂ + b, the size M would have without cancellation
  bool fallback_seed = false;
};

/// If rank M ∈ [1, n−1] returns range(M) (a polynomial in T, hence
/// T-invariant); if M = 0 returns the cyclic plane of e₁ (or of a fixed
/// pseudorandom seed when e₁ is flagged). Requires n ≥ 3; throws
/// PencilFullRank when M is nonsingular.
PencilSubspace invariant_from_pencil(const RealOperator& t, Complex eta, double tol_rel = kDefaultRankTol);

/// η from the caller, or the oracle eigenvalue with the largest imaginary part.
TwoPointSpectrum estimate_two_point(const RealOperator& t, std::optional<Complex> eta, int k);

}  // namespace symspace
