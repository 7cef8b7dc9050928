#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "symspace/operator_core.hpp"

// Deterministic test operators and an eigenvalue oracle. The oracle shares no
// solver code with the production path (no Eigen decompositions, no LU from
// operator_core); it only uses Eigen containers and scalar arithmetic.
namespace symspace::testgen {

/// [[cos θ, −sin θ], [sin θ, cos θ]].
RealOperator rotation_block(double theta);

/// Block-diagonal assembly. Throws InvalidArgument for an empty list.
RealOperator direct_sum(const std::vector<RealOperator>& blocks);

/// Frobenius companion matrix (ones on the subdiagonal, last column −c_i) of
/// (λ² − 2cos θ·λ + 1)^m, size 2m.
RealOperator jordan_companion(double theta, int m);

/// Strictly lower-triangular discretized integration operator, entries 1/n.
RealOperator volterra_matrix(int n);

/// Single Jordan block with ones on the superdiagonal.
RealOperator jordan_block(double eigenvalue, int size);

/// Uniform doubles in [-1, 1) from std::mt19937_64. The engine output is fixed
/// by the standard; the conversion uses raw bits rather than a distribution so
/// the stream is identical on every platform.
class SeededStream {
 public:
  explicit SeededStream(std::uint64_t seed);
  double next();
  RealMatrix matrix(Index rows, Index cols);
  RealVector vector(Index n);

 private:
  std::mt19937_64 engine_;
};

/// Orthogonal matrix from modified Gram–Schmidt on a seeded random matrix.
RealMatrix random_orthogonal(Index n, std::uint64_t seed);

/// All eigenvalues by Householder reduction to Hessenberg form followed by
/// single-shift complex QR with Wilkinson shifts. Requires n ≤ 64; throws
/// NoConvergence past the iteration cap.
std::vector<Complex> oracle_eigen(const ComplexMatrix& a);
std::vector<Complex> oracle_eigen(const RealOperator& t);

/// Characteristic polynomial det(λI − A) by Faddeev–LeVerrier, ascending
/// coefficients with leading coefficient 1.
std::vector<Complex> characteristic_polynomial(const ComplexMatrix& a);

/// Roots by Newton iteration with deflation on the scaled polynomial, then
/// polished against the undeflated polynomial.
std::vector<Complex> polynomial_roots(const std::vector<Complex>& coeffs);

/// Unit eigenvector for an (approximate) eigenvalue mu by inverse iteration
/// with a private Gaussian elimination.
ComplexColumn oracle_eigenvector(const ComplexMatrix& a, Complex mu);

/// Max over a of min over b of |conj(a) − b|: zero for conjugation-closed multisets.
double conjugation_gap(const std::vector<Complex>& values);

// Relative distance below which oracle eigenvalues are treated as one cluster;
// wide enough to merge the ~eps^(1/m) splitting of m-fold eigenvalues for m ≤ 3.
inline constexpr double kClusterRelTol = 1e-4;

struct EigenCluster {
  Complex center;  // mean of the members
  std::vector<Complex> members;
};

/// Single-linkage clusters: eigenvalues closer than tol share a cluster.
/// Sorted by argument of the center, then modulus.
std::vector<EigenCluster> cluster_eigenvalues(const std::vector<Complex>& values, double tol);

/// Greedy matching distance between two multisets of equal size.
double multiset_distance(std::vector<Complex> a, std::vector<Complex> b);

}  // namespace symspace::testgen
