#include "symspace/operator_core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace symspace {

namespace {

template <typename Derived>
void require_square_finite(const Eigen::MatrixBase<Derived>& m, const char* what) {
  if (m.rows() != m.cols()) {
    std::ostringstream os;
    os << what << ": expected a square matrix, got " << m.rows() << "x" << m.cols();
    throw Error(ErrorCode::NotSquare, os.str());
  }
  if (m.rows() == 0) throw Error(ErrorCode::InvalidArgument, std::string(what) + ": empty matrix");
  if (!m.allFinite()) throw Error(ErrorCode::InvalidArgument, std::string(what) + ": non-finite entry");
}

}  // namespace

std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::NotSquare: return "NotSquare";
    case ErrorCode::SingularShift: return "SingularShift";
    case ErrorCode::NodeOnSpectrum: return "NodeOnSpectrum";
    case ErrorCode::NotConverged: return "NotConverged";
    case ErrorCode::WeightPoleNearContour: return "WeightPoleNearContour";
    case ErrorCode::TooCloseToContour: return "TooCloseToContour";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::TrivialSplit: return "TrivialSplit";
    case ErrorCode::PencilFullRank: return "PencilFullRank";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::SingularOperator: return "SingularOperator";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::ResidualTooLarge: return "ResidualTooLarge";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

int exit_code(ErrorCode code) {
  // 1 is left to generic failures (usage errors, uncaught exceptions).
  return 2 + static_cast<int>(code);
}

RealOperator::RealOperator(RealMatrix entries) : entries_(std::move(entries)) {
  require_square_finite(entries_, "RealOperator");
}

RealOperator RealOperator::identity(Index n) { return RealOperator(RealMatrix::Identity(n, n)); }
RealOperator RealOperator::zero(Index n) { return RealOperator(RealMatrix::Zero(n, n)); }

ComplexOperator::ComplexOperator(ComplexMatrix entries) : entries_(std::move(entries)) {
  require_square_finite(entries_, "ComplexOperator");
}

ComplexOperator ComplexOperator::identity(Index n) {
  return ComplexOperator(ComplexMatrix::Identity(n, n));
}

ComplexVector::ComplexVector(RealVector re, RealVector im) : re_(std::move(re)), im_(std::move(im)) {
  if (re_.size() != im_.size())
    throw Error(ErrorCode::InvalidArgument, "ComplexVector: real and imaginary parts differ in length");
  if (!re_.allFinite() || !im_.allFinite())
    throw Error(ErrorCode::InvalidArgument, "ComplexVector: non-finite entry");
}

ComplexVector ComplexVector::from_complex(const ComplexColumn& z) {
  return ComplexVector(z.real(), z.imag());
}

ComplexVector ComplexVector::real(RealVector x) {
  RealVector zero = RealVector::Zero(x.size());
  return ComplexVector(std::move(x), std::move(zero));
}

ComplexColumn ComplexVector::to_complex() const {
  ComplexColumn z(re_.size());
  for (Index i = 0; i < re_.size(); ++i) z(i) = Complex(re_(i), im_(i));
  return z;
}

std::string_view to_string(BaseNormKind kind) {
  switch (kind) {
    case BaseNormKind::euclidean: return "euclidean";
    case BaseNormKind::sup: return "sup";
    case BaseNormKind::one: return "one";
  }
  return "euclidean";
}

BaseNormKind parse_base_norm(std::string_view text) {
  if (text == "euclidean") return BaseNormKind::euclidean;
  if (text == "sup") return BaseNormKind::sup;
  if (text == "one") return BaseNormKind::one;
  throw Error(ErrorCode::InvalidArgument, "unknown base norm '" + std::string(text) + "'");
}

LUFactorization::LUFactorization(const ComplexOperator& a, Complex shift) : shift_(shift) {
  const Index n = a.dim();
  ComplexMatrix shifted = -a.matrix();
  shifted.diagonal().array() += shift;
  lu_.compute(shifted);

  const double threshold = 1e-14 * std::max(max_abs(a.matrix()), std::abs(shift));
  const auto& packed = lu_.matrixLU();
  min_pivot_ = std::abs(packed(0, 0));
  for (Index i = 1; i < n; ++i) min_pivot_ = std::min(min_pivot_, std::abs(packed(i, i)));
  if (min_pivot_ <= threshold) {
    std::ostringstream os;
    os << "shift " << shift << " is numerically in the spectrum (pivot " << min_pivot_
       << " <= " << threshold << ")";
    throw SingularShiftError(shift, min_pivot_, os.str());
  }
}

ComplexColumn LUFactorization::solve(const ComplexColumn& rhs) const { return lu_.solve(rhs); }
ComplexMatrix LUFactorization::solve(const ComplexMatrix& rhs) const { return lu_.solve(rhs); }

ComplexMatrix LUFactorization::inverse() const {
  const Index n = lu_.matrixLU().rows();
  return lu_.solve(ComplexMatrix::Identity(n, n));
}

ComplexMatrix LUFactorization::reconstruct() const { return lu_.reconstructedMatrix(); }

double norm2(const RealMatrix& m) {
  if (m.size() == 0) return 0.0;
  return Eigen::JacobiSVD<RealMatrix>(m).singularValues()(0);
}

double norm2(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  return Eigen::JacobiSVD<ComplexMatrix>(m).singularValues()(0);
}

ComplexOperator complexify(const RealOperator& t) {
  return ComplexOperator(t.matrix().cast<Complex>());
}

ComplexVector apply(const ComplexOperator& a, const ComplexVector& z) {
  if (z.size() != a.dim()) throw Error(ErrorCode::InvalidArgument, "apply: dimension mismatch");
  return ComplexVector::from_complex(a.matrix() * z.to_complex());
}

ComplexVector conjugate_vector(const ComplexVector& z) { return ComplexVector(z.re(), -z.im()); }

double base_norm(const RealVector& x, BaseNormKind kind) {
  if (x.size() == 0) return 0.0;
  switch (kind) {
    case BaseNormKind::euclidean: return x.norm();
    case BaseNormKind::sup: return x.cwiseAbs().maxCoeff();
    case BaseNormKind::one: return x.cwiseAbs().sum();
  }
  return 0.0;
}

double complexification_norm(const ComplexVector& z, BaseNormKind base, int grid_size) {
  if (grid_size < 8) throw Error(ErrorCode::InvalidArgument, "complexification_norm: grid_size < 8");

  const RealVector& x = z.re();
  const RealVector& y = z.im();
  RealVector re_part(x.size());
  RealVector im_part(x.size());
  // λ = e^{iφ}: Re(λz) = cos φ·x − sin φ·y, Im(λz) = sin φ·x + cos φ·y.
  auto objective = [&](double phi) {
    const double c = std::cos(phi);
    const double s = std::sin(phi);
    re_part = c * x - s * y;
    im_part = s * x + c * y;
    const double a = base_norm(re_part, base);
    const double b = base_norm(im_part, base);
    return a * a + b * b;
  };

  const double step = 2.0 * std::numbers::pi / grid_size;
  double best_phi = 0.0;
  double best = objective(0.0);
  for (int k = 1; k < grid_size; ++k) {
    const double phi = k * step;
    const double v = objective(phi);
    if (v > best) {
      best = v;
      best_phi = phi;
    }
  }

  double lo = best_phi - step;
  double hi = best_phi + step;
  for (int it = 0; it < 100 && hi - lo > 1e-15; ++it) {
    const double m1 = lo + (hi - lo) / 3.0;
    const double m2 = hi - (hi - lo) / 3.0;
    if (objective(m1) < objective(m2))
      lo = m1;
    else
      hi = m2;
  }
  best = std::max(best, objective(0.5 * (lo + hi)));
  return std::sqrt(best);
}

ComplexColumn resolvent_solve(const ComplexOperator& a, Complex lambda, const ComplexColumn& v) {
  if (v.size() != a.dim()) throw Error(ErrorCode::InvalidArgument, "resolvent_solve: dimension mismatch");
  return LUFactorization(a, lambda).solve(v);
}

ComplexMatrix resolvent(const ComplexOperator& a, Complex lambda) {
  return LUFactorization(a, lambda).inverse();
}

double conjugation_identity_residual(const RealOperator& t, Complex lambda) {
  const ComplexOperator tc = complexify(t);
  const ComplexMatrix r = resolvent(tc, lambda);
  const ComplexMatrix r_bar = resolvent(tc, std::conj(lambda));
  return max_abs(r_bar - r.conjugate());
}

}  // namespace symspace
