#pragma once

// Test-only reference computations, deliberately independent of the library
// paths they check.

#include <cmath>
#include <complex>
#include <filesystem>
#include <numbers>
#include <string>
#include <vector>

#include "symspace/operator_core.hpp"

namespace symspace::test {

inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("symspace_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline double plain_norm(const RealVector& x, BaseNormKind kind) {
  double s = 0.0;
  for (Index i = 0; i < x.size(); ++i) {
    const double v = std::abs(x(i));
    if (kind == BaseNormKind::sup) s = std::max(s, v);
    else if (kind == BaseNormKind::one) s += v;
    else s += v * v;
  }
  return kind == BaseNormKind::euclidean ? std::sqrt(s) : s;
}

/// max over a dense φ grid of sqrt(‖Re(e^{iφ}z)‖² + ‖Im(e^{iφ}z)‖²).
inline double dense_grid_norm(const RealVector& x, const RealVector& y, BaseNormKind kind,
                              int grid = 100000) {
  double best = 0.0;
  for (int k = 0; k < grid; ++k) {
    const double phi = 2.0 * std::numbers::pi * k / grid;
    const double c = std::cos(phi), s = std::sin(phi);
    const RealVector re = c * x - s * y;
    const RealVector im = s * x + c * y;
    const double a = plain_norm(re, kind), b = plain_norm(im, kind);
    best = std::max(best, std::sqrt(a * a + b * b));
  }
  return best;
}

/// Spectral projector of a real block onto the generalized eigenspace of
/// `mu`, as q(B) where q is the Hermite interpolant that equals 1 to order m
/// at mu and 0 to order m at conj(mu). Valid when B's minimal polynomial
/// divides ((λ−mu)(λ−conj mu))^m with mu non-real.
inline ComplexMatrix hermite_projector(const RealMatrix& b, Complex mu, int m) {
  // q(λ) = (λ−ν)^m · r(λ) with r the degree-(m−1) Taylor part of (λ−ν)^{−m}
  // at mu, ν = conj(mu).
  const Complex nu = std::conj(mu);
  const Index n = b.rows();
  const ComplexMatrix bc = b.cast<Complex>();
  const ComplexMatrix eye = ComplexMatrix::Identity(n, n);
  ComplexMatrix left = eye;
  for (int i = 0; i < m; ++i) left = left * (bc - nu * eye);
  ComplexMatrix r = ComplexMatrix::Zero(n, n);
  ComplexMatrix pw = eye;
  const Complex d = mu - nu;
  double binom = 1.0;  // C(m−1+j, j)
  for (int j = 0; j < m; ++j) {
    if (j > 0) binom = binom * (m - 1 + j) / j;
    const Complex coef = binom * std::pow(-1.0, j) / std::pow(d, m + j);
    r += coef * pw;
    pw = pw * (bc - mu * eye);
  }
  return left * r;
}

inline double sum_abs(const std::vector<Complex>& v) {
  double s = 0.0;
  for (const Complex z : v) s += std::abs(z);
  return s;
}

}  // namespace symspace::test
