#include "symspace/twopoint.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "symspace/testgen.hpp"

namespace symspace {

PencilCoefficients pencil_coefficients(Complex eta) {
  return {2.0 * eta.real(), std::norm(eta)};
}

RealMatrix quadratic_pencil(const RealOperator& t, Complex eta) {
  const auto [a, b] = pencil_coefficients(eta);
  const RealMatrix& m = t.matrix();
  RealMatrix pencil = m * m - a * m;
  pencil.diagonal().array() += b;
  return pencil;
}

double pencil_factorization_residual(const RealOperator& t, Complex eta) {
  const ComplexMatrix tc = t.matrix().cast<Complex>();
  const Index n = t.dim();
  const ComplexMatrix eye = ComplexMatrix::Identity(n, n);
  const ComplexMatrix product = (tc - eta * eye) * (tc - std::conj(eta) * eye);
  return max_abs(ComplexMatrix(quadratic_pencil(t, eta).cast<Complex>() - product));
}

std::optional<int> nilpotency_index(const RealMatrix& m, int k_max, double tol) {
  if (k_max < 1) throw Error(ErrorCode::InvalidArgument, "nilpotency_index: k_max must be >= 1");
  const double scale = norm2(m);
  if (scale == 0.0) return 1;
  const RealMatrix normalized = m / scale;
  RealMatrix power = normalized;
  for (int j = 1; j <= k_max + 1; ++j) {
    if (j > 1) power = power * normalized;
    if (norm2(power) <= tol) return j;
  }
  return std::nullopt;
}

RealSubspace cyclic_subspace(const RealOperator& t, const RealVector& x, int max_dim) {
  if (x.size() != t.dim()) throw Error(ErrorCode::InvalidArgument, "cyclic_subspace: dimension mismatch");
  const double xn = x.norm();
  if (xn == 0.0) throw Error(ErrorCode::ZeroVector, "cyclic_subspace: seed vector is zero");
  const Index limit = std::min<Index>(std::max(max_dim, 1), t.dim());
  const double threshold = 1e-10 * norm2(t.matrix());

  RealMatrix q(t.dim(), limit);
  q.col(0) = x / xn;
  Index rank = 1;
  while (rank < limit) {
    RealVector v = t.matrix() * q.col(rank - 1);
    for (int pass = 0; pass < 2; ++pass) v -= q.leftCols(rank) * (q.leftCols(rank).transpose() * v);
    const double vn = v.norm();
    if (vn <= threshold) break;
    q.col(rank++) = v / vn;
  }
  RealSubspace out;
  out.columns = q.leftCols(rank);
  out.invariance_residual = invariance_residual(t.matrix(), out.columns);
  return out;
}

std::string_view to_string(PencilBranch branch) {
  return branch == PencilBranch::pencil_range ? "pencil_range" : "cyclic_plane";
}

PencilSubspace invariant_from_pencil(const RealOperator& t, Complex eta, double tol_rel) {
  const Index n = t.dim();
  if (n < 3) throw Error(ErrorCode::InvalidArgument, "invariant_from_pencil: needs dim >= 3");

  PencilSubspace out;
  out.coefficients = pencil_coefficients(eta);
  const RealMatrix m = quadratic_pencil(t, eta);
  const double tn = norm2(t.matrix());
  out.pencil_norm = norm2(m);
  out.pencil_scale = tn * tn + std::abs(out.coefficients.a) * tn + out.coefficients.b;

  if (out.pencil_norm <= tol_rel * out.pencil_scale) {
    out.branch = PencilBranch::cyclic_plane;
    out.pencil_rank = 0;
    RealVector seed = RealVector::Unit(n, 0);
    if ((m * seed).norm() > tol_rel * out.pencil_scale) {
      testgen::SeededStream rng(0x5eed);
      seed = rng.vector(n);
      seed /= seed.norm();
      out.fallback_seed = true;
    }
    out.basis = cyclic_subspace(t, seed, 2);
    return out;
  }

  RealSubspace range = range_basis(m, tol_rel);
  out.pencil_rank = range.rank();
  if (out.pencil_rank == n) {
    std::ostringstream os;
    os << "quadratic pencil for eta = " << eta << " has full rank; the spectrum is not {eta, conj(eta)}."
       << " Use the contour (split-arc) path instead";
    throw Error(ErrorCode::PencilFullRank, os.str());
  }
  range.invariance_residual = invariance_residual(t.matrix(), range.columns);
  out.branch = PencilBranch::pencil_range;
  out.basis = std::move(range);
  return out;
}

TwoPointSpectrum estimate_two_point(const RealOperator& t, std::optional<Complex> eta, int k) {
  const std::vector<Complex> eig = testgen::oracle_eigen(t);
  TwoPointSpectrum s;
  s.k = k;
  if (eta) {
    s.eta = eta->imag() < 0.0 ? std::conj(*eta) : *eta;
  } else {
    // Multiple eigenvalues come back split by ~eps^(1/m); the cluster mean is
    // accurate to ~eps, the individual members are not.
    const Complex top = *std::max_element(eig.begin(), eig.end(),
                                          [](Complex p, Complex q) { return p.imag() < q.imag(); });
    const double tol = testgen::kClusterRelTol * std::max(1.0, std::abs(top));
    for (const auto& c : testgen::cluster_eigenvalues(eig, tol))
      for (const Complex m : c.members)
        if (m == top) s.eta = c.center;
    if (s.eta.imag() < 0.0) s.eta = std::conj(s.eta);
    if (std::abs(s.eta.imag()) <= tol) s.eta = Complex(s.eta.real(), 0.0);
  }
  for (const Complex mu : eig)
    s.cluster_radius = std::max(s.cluster_radius, std::min(std::abs(mu - s.eta), std::abs(mu - std::conj(s.eta))));
  return s;
}

}  // namespace symspace
