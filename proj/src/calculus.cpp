#include "symspace/calculus.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace symspace {

namespace {

Complex horner(const std::vector<double>& coeffs, Complex x) {
  Complex acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
  return acc;
}

std::vector<double> trimmed(std::vector<double> c) {
  while (!c.empty() && c.back() == 0.0) c.pop_back();
  return c;
}

std::string poly_string(const std::vector<double>& c) {
  std::ostringstream os;
  bool first = true;
  for (std::size_t k = 0; k < c.size(); ++k) {
    if (c[k] == 0.0) continue;
    if (!first) os << " + ";
    os << c[k];
    if (k == 1) os << "*z";
    if (k > 1) os << "*z^" << k;
    first = false;
  }
  return first ? "0" : os.str();
}

// Pairwise-tree sum of w_j g(λ_j) R(λ_j) over [lo, hi): deterministic order,
// O(log N) live n×n temporaries.
ComplexMatrix tree_sum(const ComplexOperator& a, const QuadratureRule& rule,
                       const std::vector<Complex>& scaled_weights, std::size_t lo, std::size_t hi) {
  if (hi - lo == 1) {
    try {
      return scaled_weights[lo] * LUFactorization(a, rule.nodes[lo]).inverse();
    } catch (const SingularShiftError& e) {
      std::ostringstream os;
      os << "quadrature node " << lo << " at " << rule.nodes[lo] << " lies on the spectrum: " << e.what();
      throw SingularShiftError(e.shift(), e.pivot(), os.str(), ErrorCode::NodeOnSpectrum);
    }
  }
  const std::size_t mid = lo + (hi - lo) / 2;
  ComplexMatrix left = tree_sum(a, rule, scaled_weights, lo, mid);
  left += tree_sum(a, rule, scaled_weights, mid, hi);
  return left;
}

// Number of singular values above tol_rel·max(σ_1, min_scale).
template <typename Vector>
Index numerical_rank(const Vector& s, double tol_rel, double min_scale) {
  Index r = 0;
  if (s.size() == 0 || !(s(0) > 0.0)) return 0;
  const double cut = tol_rel * std::max(s(0), min_scale);
  while (r < s.size() && s(r) > cut) ++r;
  return r;
}

void check_tol(double tol_rel, const char* who) {
  if (!(tol_rel > 0.0 && tol_rel < 1.0))
    throw Error(ErrorCode::InvalidArgument, std::string(who) + ": tol_rel must be in (0, 1)");
}

template <typename Matrix>
SubspaceBasis<typename Matrix::Scalar> range_impl(const Matrix& m, double tol_rel, double min_scale) {
  check_tol(tol_rel, "range_basis");
  SubspaceBasis<typename Matrix::Scalar> out;
  Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeThinU);
  out.columns = svd.matrixU().leftCols(numerical_rank(svd.singularValues(), tol_rel, min_scale));
  return out;
}

template <typename Matrix>
SubspaceBasis<typename Matrix::Scalar> kernel_impl(const Matrix& m, double tol_rel, double min_scale) {
  check_tol(tol_rel, "kernel_basis");
  SubspaceBasis<typename Matrix::Scalar> out;
  Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeFullV);
  const Index r = numerical_rank(svd.singularValues(), tol_rel, min_scale);
  out.columns = svd.matrixV().rightCols(m.cols() - r);
  return out;
}

template <typename Matrix>
double invariance_impl(const Matrix& t, const Matrix& q) {
  if (q.cols() == 0) return 0.0;
  const Matrix tq = t * q;
  const Matrix residual = tq - q * (q.adjoint() * tq);
  return norm2(residual) / std::max(norm2(t), 1.0);
}

}  // namespace

WeightFunction WeightFunction::one() { return WeightFunction(Kind::constant_one, {1.0}, {1.0}); }

WeightFunction WeightFunction::polynomial(std::vector<double> coeffs) {
  coeffs = trimmed(std::move(coeffs));
  if (coeffs.empty()) coeffs = {0.0};
  return WeightFunction(Kind::polynomial, std::move(coeffs), {1.0});
}

WeightFunction WeightFunction::rational(std::vector<double> numerator, std::vector<double> denominator) {
  numerator = trimmed(std::move(numerator));
  denominator = trimmed(std::move(denominator));
  if (denominator.empty()) throw Error(ErrorCode::InvalidArgument, "rational weight: zero denominator");
  if (numerator.empty()) numerator = {0.0};
  return WeightFunction(Kind::rational, std::move(numerator), std::move(denominator));
}

Complex WeightFunction::operator()(Complex lambda) const {
  switch (kind_) {
    case Kind::constant_one: return 1.0;
    case Kind::polynomial: return horner(num_, lambda);
    case Kind::rational: return horner(num_, lambda) / horner(den_, lambda);
  }
  return 1.0;
}

std::vector<Complex> WeightFunction::poles() const {
  if (kind_ != Kind::rational || den_.size() < 2) return {};
  // Companion matrix of the monic denominator.
  const Index d = static_cast<Index>(den_.size()) - 1;
  ComplexMatrix companion = ComplexMatrix::Zero(d, d);
  for (Index i = 1; i < d; ++i) companion(i, i - 1) = 1.0;
  for (Index i = 0; i < d; ++i) companion(i, d - 1) = -den_[i] / den_[d];
  Eigen::ComplexEigenSolver<ComplexMatrix> es(companion, false);
  std::vector<Complex> roots(es.eigenvalues().begin(), es.eigenvalues().end());
  return roots;
}

std::string WeightFunction::describe() const {
  switch (kind_) {
    case Kind::constant_one: return "1";
    case Kind::polynomial: return poly_string(num_);
    case Kind::rational: return "(" + poly_string(num_) + ")/(" + poly_string(den_) + ")";
  }
  return "1";
}

ComplexMatrix riesz_projection(const ComplexOperator& a, const QuadratureRule& rule) {
  return weighted_calculus(a, rule, WeightFunction::one());
}

ComplexMatrix weighted_calculus(const ComplexOperator& a, const QuadratureRule& rule,
                                const WeightFunction& g) {
  if (rule.size() == 0) throw Error(ErrorCode::InvalidArgument, "weighted_calculus: empty rule");
  const double clearance = 0.5 * rule.contour.standoff();
  for (const Complex pole : g.poles())
    for (const Complex node : rule.nodes)
      if (std::abs(pole - node) < clearance) {
        std::ostringstream os;
        os << "pole " << pole << " of weight " << g.describe() << " lies within " << clearance
           << " of contour node " << node;
        throw ResidualError(ErrorCode::WeightPoleNearContour, std::abs(pole - node), os.str());
      }

  std::vector<Complex> scaled(rule.size());
  for (std::size_t j = 0; j < rule.size(); ++j) {
    const Complex gj = g(rule.nodes[j]);
    if (!std::isfinite(gj.real()) || !std::isfinite(gj.imag()))
      throw Error(ErrorCode::WeightPoleNearContour, "weight is not finite on the contour");
    scaled[j] = rule.weights[j] * gj;
  }
  return tree_sum(a, rule, scaled, 0, rule.size());
}

AdaptiveProjection adaptive_projection(const ComplexOperator& a, const Contour& contour, double tol,
                                       int max_nodes, int initial_nodes) {
  if (!(tol >= 1e-13)) throw Error(ErrorCode::InvalidArgument, "adaptive_projection: tol must be >= 1e-13");
  int n = std::max(initial_nodes, 16);
  if (n % 2) ++n;
  if (n * 2 > max_nodes)
    throw Error(ErrorCode::InvalidArgument, "adaptive_projection: max_nodes leaves no room to double");
  ComplexMatrix coarse = riesz_projection(a, build_rule(contour, n));
  double diff = 0.0;
  while (2 * n <= max_nodes) {
    ComplexMatrix fine = riesz_projection(a, build_rule(contour, 2 * n));
    diff = max_abs(fine - coarse);
    n *= 2;
    if (diff <= tol) return {std::move(fine), n, diff};
    coarse = std::move(fine);
  }
  std::ostringstream os;
  os << "projection did not converge: ||P_N - P_2N||_max = " << diff << " at " << n
     << " nodes per loop (tol " << tol << ")";
  throw ResidualError(ErrorCode::NotConverged, diff, os.str());
}

ProjectionDiagnostics diagnose_projection(const ComplexOperator& a, const ComplexMatrix& p) {
  ProjectionDiagnostics d;
  d.trace = p.trace();
  d.idempotency = norm2(ComplexMatrix(p * p - p));
  d.commutation = norm2(ComplexMatrix(a.matrix() * p - p * a.matrix()));
  d.imag_max = max_abs(p.imag());
  d.max_entry = max_abs(p);
  return d;
}

ComplexSubspace range_basis(const ComplexMatrix& m, double tol_rel) { return range_impl(m, tol_rel, 0.0); }
RealSubspace range_basis(const RealMatrix& m, double tol_rel) { return range_impl(m, tol_rel, 0.0); }
ComplexSubspace kernel_basis(const ComplexMatrix& m, double tol_rel) { return kernel_impl(m, tol_rel, 0.0); }
RealSubspace kernel_basis(const RealMatrix& m, double tol_rel) { return kernel_impl(m, tol_rel, 0.0); }

// A nonzero projection has ‖P‖₂ ≥ 1, so quadrature noise on a vanishing P
// must not be rescaled into a full-rank range.
ComplexSubspace projection_range(const ComplexMatrix& p, double tol_rel) { return range_impl(p, tol_rel, 1.0); }
ComplexSubspace projection_kernel(const ComplexMatrix& p, double tol_rel) { return kernel_impl(p, tol_rel, 1.0); }

double symmetry_residual(const ComplexMatrix& z) {
  if (z.cols() == 0) return 0.0;
  const ComplexMatrix zc = z.conjugate();
  return norm2(ComplexMatrix(zc - z * (z.adjoint() * zc)));
}

RealSubspace real_part_subspace(const ComplexSubspace& z, double sym_tol, const RealOperator* t) {
  const double sym = symmetry_residual(z.columns);
  if (sym > sym_tol) {
    std::ostringstream os;
    os << "subspace is not conjugation-closed: residual " << sym << " > " << sym_tol;
    throw ResidualError(ErrorCode::NotSymmetric, sym, os.str());
  }
  const Index n = z.dim();
  const Index r = z.rank();
  RealSubspace out;
  out.symmetry_residual = sym;
  if (r == 0) {
    out.columns = RealMatrix(n, 0);
  } else {
    RealMatrix stacked(n, 2 * r);
    stacked << z.columns.real(), z.columns.imag();
    // A closed span of complex dimension r has real and imaginary parts
    // spanning exactly r real dimensions.
    Eigen::BDCSVD<RealMatrix> svd(stacked, Eigen::ComputeThinU);
    out.columns = svd.matrixU().leftCols(r);
  }
  if (t) {
    if (t->dim() != n) throw Error(ErrorCode::InvalidArgument, "real_part_subspace: dimension mismatch");
    out.invariance_residual = invariance_residual(t->matrix(), out.columns);
  }
  return out;
}

double invariance_residual(const RealMatrix& t, const RealMatrix& q) { return invariance_impl(t, q); }
double invariance_residual(const ComplexMatrix& t, const ComplexMatrix& q) { return invariance_impl(t, q); }

double max_principal_angle(const ComplexMatrix& q1, const ComplexMatrix& q2) {
  if (q1.rows() != q2.rows()) throw Error(ErrorCode::InvalidArgument, "max_principal_angle: dimension mismatch");
  if (q1.cols() != q2.cols()) return 0.5 * std::numbers::pi;
  if (q1.cols() == 0) return 0.0;
  const ComplexMatrix off = q2 - q1 * (q1.adjoint() * q2);
  return std::asin(std::min(1.0, norm2(off)));
}

void validate_partition(const SpectralPartition& partition, const std::vector<Complex>& eigenvalues,
                        int nodes_per_loop) {
  std::vector<QuadratureRule> rules;
  for (const auto& cell : partition.cells) rules.push_back(build_rule(cell.contour, nodes_per_loop));
  for (const Complex mu : eigenvalues) {
    int hits = 0;
    for (const auto& rule : rules) hits += winding_number(rule, mu).winding == 1 ? 1 : 0;
    if (hits != 1) {
      std::ostringstream os;
      os << "eigenvalue " << mu << " is enclosed by " << hits << " partition cells (expected 1)";
      throw Error(ErrorCode::InvalidArgument, os.str());
    }
  }
}

PartitionProjections project_partition(const ComplexOperator& a, const SpectralPartition& partition,
                                       int nodes_per_loop) {
  PartitionProjections out;
  std::vector<QuadratureRule> rules;
  for (const auto& cell : partition.cells) {
    rules.push_back(build_rule(cell.contour, nodes_per_loop));
    out.labels.push_back(cell.label);
    out.projections.push_back(riesz_projection(a, rules.back()));
  }
  for (const auto& cell : partition.cells) {
    const Complex mirror_point = std::conj(cell.contour.interior_points().front());
    int found = -1;
    for (std::size_t k = 0; k < rules.size() && found < 0; ++k) {
      try {
        if (winding_number(rules[k], mirror_point).winding == 1) found = static_cast<int>(k);
      } catch (const ResidualError&) {
        // mirror point on another cell's curve: no mirror
      }
    }
    out.mirror.push_back(found);
  }
  return out;
}

std::vector<std::string> local_spectrum_support(const PartitionProjections& cells,
                                                const ComplexColumn& z, double tol) {
  std::vector<std::string> support;
  const double zn = z.norm();
  for (std::size_t i = 0; i < cells.projections.size(); ++i)
    if ((cells.projections[i] * z).norm() > tol * zn) support.push_back(cells.labels[i]);
  return support;
}

}  // namespace symspace
