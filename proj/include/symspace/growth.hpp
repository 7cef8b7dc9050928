#pragma once

#include <optional>
#include <string>
#include <vector>

#include "symspace/operator_core.hpp"

namespace symspace {

/// Operator norm induced by the base norm: spectral for euclidean (full SVD
/// below n = 64, otherwise ≤ 100 power steps on MᵀM from a fixed start), max
/// row sum for sup, max column sum for one.
double operator_norm(const RealMatrix& m, BaseNormKind kind = BaseNormKind::euclidean);

/// ‖T^n‖ for n = 1..N, kept as logarithms so the table survives over- and
/// underflow (−∞ marks an exactly zero power).
struct GrowthProfile {
  int horizon = 0;
  BaseNormKind norm = BaseNormKind::euclidean;
  std::vector<double> forward_log_norms;                  // index n−1 ↦ log‖T^n‖
  std::optional<std::vector<double>> backward_log_norms;  // log‖T^{−n}‖, absent if T singular
  std::string backward_note;                              // why the backward chain is absent

  double forward_norm(int n) const;
  std::optional<double> backward_norm(int n) const;
};

/// Throws InvalidArgument for N < 4. A singular T leaves backward_log_norms
/// empty (SingularOperator is raised only by consumers that need it).
GrowthProfile power_norms(const RealOperator& t, int horizon, BaseNormKind norm = BaseNormKind::euclidean);

struct GrowthFit {
  double k_estimate = 0.0;  // max of the directional slopes
  double forward_slope = 0.0;
  std::optional<double> backward_slope;
  double fit_residual = 0.0;  // max |residual| of the log-log fits
  bool non_polynomial = false;
};

/// Least-squares slope of log‖T^{±n}‖ against log n over n ∈ [N/2, N].
/// Residuals above 0.5 flag growth that no power law explains.
GrowthFit growth_exponent(const GrowthProfile& profile);

struct NonQuasianalyticSum {
  double partial_sum = 0.0;  // ∑_{|n|≤N} ‖T^n‖/(1+n²)
  bool converging = false;
  double tail_slope = 0.0;   // log-log slope of the increments over the last decade
};

/// Throws ResidualError (SingularOperator) when the backward chain is absent.
NonQuasianalyticSum nonquasianalytic_sum(const GrowthProfile& profile);

/// max over m+n ≤ N of ‖T^{m+n}‖/(‖T^m‖‖T^n‖) − 1 (≤ 0 up to rounding).
double submultiplicativity_excess(const GrowthProfile& profile);

struct IsometryReport {
  bool is_isometry = false;
  bool is_surjective = false;
  std::string note;
};

IsometryReport isometry_check(const RealOperator& t, double tol = 1e-12);

}  // namespace symspace
