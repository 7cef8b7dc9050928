#include <cmath>

#include "symspace/testgen.hpp"

namespace symspace::testgen {

RealOperator rotation_block(double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  RealMatrix m(2, 2);
  m << c, -s, s, c;
  return RealOperator(std::move(m));
}

RealOperator direct_sum(const std::vector<RealOperator>& blocks) {
  if (blocks.empty()) throw Error(ErrorCode::InvalidArgument, "direct_sum: empty block list");
  Index n = 0;
  for (const auto& b : blocks) n += b.dim();
  RealMatrix m = RealMatrix::Zero(n, n);
  Index offset = 0;
  for (const auto& b : blocks) {
    m.block(offset, offset, b.dim(), b.dim()) = b.matrix();
    offset += b.dim();
  }
  return RealOperator(std::move(m));
}

RealOperator jordan_companion(double theta, int m) {
  if (m < 1) throw Error(ErrorCode::InvalidArgument, "jordan_companion: m must be >= 1");
  // (λ² − 2cos θ λ + 1)^m, ascending coefficients.
  const std::vector<double> factor{1.0, -2.0 * std::cos(theta), 1.0};
  std::vector<double> poly{1.0};
  for (int k = 0; k < m; ++k) {
    std::vector<double> next(poly.size() + 2, 0.0);
    for (std::size_t i = 0; i < poly.size(); ++i)
      for (std::size_t j = 0; j < factor.size(); ++j) next[i + j] += poly[i] * factor[j];
    poly = std::move(next);
  }
  const Index n = 2 * m;
  RealMatrix c = RealMatrix::Zero(n, n);
  for (Index i = 1; i < n; ++i) c(i, i - 1) = 1.0;
  for (Index i = 0; i < n; ++i) c(i, n - 1) = -poly[static_cast<std::size_t>(i)];
  return RealOperator(std::move(c));
}

RealOperator volterra_matrix(int n) {
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "volterra_matrix: n must be >= 2");
  RealMatrix v = RealMatrix::Zero(n, n);
  for (Index i = 1; i < n; ++i)
    for (Index j = 0; j < i; ++j) v(i, j) = 1.0 / n;
  return RealOperator(std::move(v));
}

RealOperator jordan_block(double eigenvalue, int size) {
  if (size < 1) throw Error(ErrorCode::InvalidArgument, "jordan_block: size must be >= 1");
  RealMatrix j = eigenvalue * RealMatrix::Identity(size, size);
  for (Index i = 0; i + 1 < size; ++i) j(i, i + 1) = 1.0;
  return RealOperator(std::move(j));
}

SeededStream::SeededStream(std::uint64_t seed) : engine_(seed) {}

double SeededStream::next() {
  const std::uint64_t bits = engine_() >> 11;  // 53 random bits
  return 2.0 * std::ldexp(static_cast<double>(bits), -53) - 1.0;
}

RealMatrix SeededStream::matrix(Index rows, Index cols) {
  RealMatrix m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = next();
  return m;
}

RealVector SeededStream::vector(Index n) {
  RealVector v(n);
  for (Index i = 0; i < n; ++i) v(i) = next();
  return v;
}

RealMatrix random_orthogonal(Index n, std::uint64_t seed) {
  SeededStream rng(seed);
  RealMatrix q = rng.matrix(n, n);
  for (Index j = 0; j < n; ++j) {
    for (int pass = 0; pass < 2; ++pass)
      for (Index k = 0; k < j; ++k) q.col(j) -= q.col(k).dot(q.col(j)) * q.col(k);
    q.col(j) /= q.col(j).norm();
  }
  return q;
}

}  // namespace symspace::testgen
