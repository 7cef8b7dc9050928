#include "symspace/growth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace symspace {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct LineFit {
  double slope = 0.0;
  double max_residual = 0.0;
};

// Least squares y ≈ slope·x + c.
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const double m = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  LineFit f;
  const double denom = m * sxx - sx * sx;
  f.slope = denom != 0.0 ? (m * sxy - sx * sy) / denom : 0.0;
  const double intercept = (sy - f.slope * sx) / m;
  for (std::size_t i = 0; i < x.size(); ++i)
    f.max_residual = std::max(f.max_residual, std::abs(y[i] - (f.slope * x[i] + intercept)));
  return f;
}

// Fit over n ∈ [N/2, N]; an exactly vanishing power means faster-than-any-
// polynomial decay.
LineFit fit_direction(const std::vector<double>& log_norms) {
  const int horizon = static_cast<int>(log_norms.size());
  std::vector<double> x, y;
  for (int n = (horizon + 1) / 2; n <= horizon; ++n) {
    const double v = log_norms[static_cast<std::size_t>(n - 1)];
    if (v == kNegInf) return {kNegInf, 0.0};
    x.push_back(std::log(static_cast<double>(n)));
    y.push_back(v);
  }
  return fit_line(x, y);
}

std::vector<double> log_power_chain(const RealMatrix& t, int horizon, BaseNormKind kind) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(horizon));
  RealMatrix scaled = t;  // T^n / exp(log_scale)
  double log_scale = 0.0;
  for (int n = 1; n <= horizon; ++n) {
    const double nu = operator_norm(scaled, kind);
    if (nu == 0.0) {
      out.resize(static_cast<std::size_t>(horizon), kNegInf);
      break;
    }
    log_scale += std::log(nu);
    out.push_back(log_scale);
    scaled = t * (scaled / nu);
  }
  return out;
}

}  // namespace

double operator_norm(const RealMatrix& m, BaseNormKind kind) {
  if (m.size() == 0) return 0.0;
  switch (kind) {
    case BaseNormKind::sup: return m.cwiseAbs().rowwise().sum().maxCoeff();
    case BaseNormKind::one: return m.cwiseAbs().colwise().sum().maxCoeff();
    case BaseNormKind::euclidean: break;
  }
  if (m.cols() < 64) return norm2(m);
  RealVector v = RealVector::Ones(m.cols()) / std::sqrt(static_cast<double>(m.cols()));
  double sigma = 0.0;
  for (int it = 0; it < 100; ++it) {
    RealVector w = m.transpose() * (m * v);
    const double wn = w.norm();
    if (wn == 0.0) return 0.0;
    const double next = std::sqrt(wn);
    v = w / wn;
    if (std::abs(next - sigma) <= 1e-15 * next) {
      sigma = next;
      break;
    }
    sigma = next;
  }
  return sigma;
}

double GrowthProfile::forward_norm(int n) const {
  return std::exp(forward_log_norms.at(static_cast<std::size_t>(n - 1)));
}

std::optional<double> GrowthProfile::backward_norm(int n) const {
  if (!backward_log_norms) return std::nullopt;
  return std::exp(backward_log_norms->at(static_cast<std::size_t>(n - 1)));
}

GrowthProfile power_norms(const RealOperator& t, int horizon, BaseNormKind norm) {
  if (horizon < 4) throw Error(ErrorCode::InvalidArgument, "power_norms: horizon must be >= 4");
  GrowthProfile p;
  p.horizon = horizon;
  p.norm = norm;
  p.forward_log_norms = log_power_chain(t.matrix(), horizon, norm);

  Eigen::PartialPivLU<RealMatrix> lu(t.matrix());
  const double threshold = 1e-14 * max_abs(t.matrix());
  const double min_pivot = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
  if (min_pivot <= threshold) {
    p.backward_note = "operator is singular (LU pivot below 1e-14*||T||_max); no backward chain";
  } else {
    p.backward_log_norms = log_power_chain(lu.inverse(), horizon, norm);
  }
  return p;
}

GrowthFit growth_exponent(const GrowthProfile& profile) {
  if (profile.horizon < 16) throw Error(ErrorCode::InvalidArgument, "growth_exponent: horizon must be >= 16");
  GrowthFit g;
  const LineFit fwd = fit_direction(profile.forward_log_norms);
  g.forward_slope = fwd.slope;
  g.k_estimate = fwd.slope;
  g.fit_residual = fwd.max_residual;
  if (profile.backward_log_norms) {
    const LineFit bwd = fit_direction(*profile.backward_log_norms);
    g.backward_slope = bwd.slope;
    g.k_estimate = std::max(g.k_estimate, bwd.slope);
    g.fit_residual = std::max(g.fit_residual, bwd.max_residual);
  }
  g.non_polynomial = g.fit_residual > 0.5;
  return g;
}

NonQuasianalyticSum nonquasianalytic_sum(const GrowthProfile& profile) {
  if (!profile.backward_log_norms)
    throw ResidualError(ErrorCode::SingularOperator, 0.0,
                        "non-quasianalyticity sum needs negative powers: " + profile.backward_note);
  const auto& fwd = profile.forward_log_norms;
  const auto& bwd = *profile.backward_log_norms;
  NonQuasianalyticSum s;
  s.partial_sum = 1.0;  // n = 0
  std::vector<double> x, y;
  const int start = std::max(1, profile.horizon / 10);
  for (int n = 1; n <= profile.horizon; ++n) {
    const double both = std::exp(fwd[static_cast<std::size_t>(n - 1)]) + std::exp(bwd[static_cast<std::size_t>(n - 1)]);
    const double inc = both / (1.0 + static_cast<double>(n) * n);
    s.partial_sum += inc;
    if (n >= start && inc > 0.0) {
      x.push_back(std::log(static_cast<double>(n)));
      y.push_back(std::log(inc));
    }
  }
  s.tail_slope = x.size() >= 2 ? fit_line(x, y).slope : kNegInf;
  const GrowthFit g = profile.horizon >= 16 ? growth_exponent(profile) : GrowthFit{};
  // Increments ~ n^{k−2} are summable iff k < 1; require a visible margin
  // below the harmonic rate so a linear-growth tail is not misread.
  s.converging = std::isfinite(s.partial_sum) && !g.non_polynomial && g.k_estimate < 1.0 && s.tail_slope < -1.5;
  return s;
}

double submultiplicativity_excess(const GrowthProfile& profile) {
  const auto& f = profile.forward_log_norms;
  double worst = kNegInf;
  const int n_max = profile.horizon;
  for (int m = 1; m < n_max; ++m)
    for (int n = 1; m + n <= n_max; ++n) {
      const double lhs = f[static_cast<std::size_t>(m + n - 1)];
      const double rhs = f[static_cast<std::size_t>(m - 1)] + f[static_cast<std::size_t>(n - 1)];
      if (lhs == kNegInf) continue;
      worst = std::max(worst, std::expm1(lhs - rhs));
    }
  return worst == kNegInf ? 0.0 : worst;
}

IsometryReport isometry_check(const RealOperator& t, double tol) {
  IsometryReport r;
  const Index n = t.dim();
  const RealMatrix gram = t.matrix().transpose() * t.matrix() - RealMatrix::Identity(n, n);
  r.is_isometry = max_abs(gram) <= tol;
  const auto s = Eigen::JacobiSVD<RealMatrix>(t.matrix()).singularValues();
  Index rank = 0;
  if (s(0) > 0.0)
    while (rank < s.size() && s(rank) > 1e-10 * s(0)) ++rank;
  r.is_surjective = rank == n;
  if (r.is_isometry)
    r.note = "Euclidean isometry; in finite dimension it is surjective, so the TX != X branch is vacuous";
  else if (!r.is_surjective)
    r.note = "T is not surjective: the range TX is a proper T-invariant subspace";
  else
    r.note = "not a Euclidean isometry";
  return r;
}

}  // namespace symspace
