#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "symspace/testgen.hpp"

namespace symspace::testgen {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double abs1(Complex z) { return std::abs(z.real()) + std::abs(z.imag()); }

// Householder reduction to upper Hessenberg form, in place.
void to_hessenberg(ComplexMatrix& h) {
  const Index n = h.rows();
  for (Index k = 0; k + 2 < n; ++k) {
    const Index len = n - k - 1;
    ComplexColumn v = h.block(k + 1, k, len, 1);
    const double xnorm = v.norm();
    if (xnorm == 0.0) continue;
    const Complex phase = std::abs(v(0)) > 0.0 ? v(0) / std::abs(v(0)) : Complex(1.0, 0.0);
    v(0) += phase * xnorm;
    const double vnorm = v.norm();
    if (vnorm == 0.0) continue;
    v /= vnorm;
    // H ← (I − 2vvᴴ) H (I − 2vvᴴ) on the trailing rows/columns.
    for (Index j = 0; j < n; ++j) {
      Complex dot = 0.0;
      for (Index i = 0; i < len; ++i) dot += std::conj(v(i)) * h(k + 1 + i, j);
      for (Index i = 0; i < len; ++i) h(k + 1 + i, j) -= 2.0 * v(i) * dot;
    }
    for (Index i = 0; i < n; ++i) {
      Complex dot = 0.0;
      for (Index j = 0; j < len; ++j) dot += h(i, k + 1 + j) * v(j);
      for (Index j = 0; j < len; ++j) h(i, k + 1 + j) -= 2.0 * dot * std::conj(v(j));
    }
    for (Index i = k + 2; i < n; ++i) h(i, k) = 0.0;
  }
}

Complex wilkinson_shift(Complex a, Complex b, Complex c, Complex d) {
  const Complex half_tr = 0.5 * (a + d);
  const Complex disc = std::sqrt(0.25 * (a - d) * (a - d) + b * c);
  const Complex l1 = half_tr + disc;
  const Complex l2 = half_tr - disc;
  return std::abs(l1 - d) < std::abs(l2 - d) ? l1 : l2;
}

// Solves m x = b by Gaussian elimination with partial pivoting; m is copied.
ComplexColumn gauss_solve(ComplexMatrix m, ComplexColumn b) {
  const Index n = m.rows();
  for (Index k = 0; k < n; ++k) {
    Index p = k;
    for (Index i = k + 1; i < n; ++i)
      if (std::abs(m(i, k)) > std::abs(m(p, k))) p = i;
    if (p != k) {
      m.row(k).swap(m.row(p));
      std::swap(b(k), b(p));
    }
    Complex piv = m(k, k);
    if (std::abs(piv) == 0.0) piv = m(k, k) = Complex(1e-300, 0.0);
    for (Index i = k + 1; i < n; ++i) {
      const Complex f = m(i, k) / piv;
      if (f == 0.0) continue;
      for (Index j = k; j < n; ++j) m(i, j) -= f * m(k, j);
      b(i) -= f * b(k);
    }
  }
  ComplexColumn x(n);
  for (Index i = n - 1; i >= 0; --i) {
    Complex s = b(i);
    for (Index j = i + 1; j < n; ++j) s -= m(i, j) * x(j);
    x(i) = s / m(i, i);
  }
  return x;
}

Complex poly_eval(const std::vector<Complex>& c, Complex z, Complex* derivative) {
  Complex p = 0.0;
  Complex dp = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) {
    dp = dp * z + p;
    p = p * z + *it;
  }
  if (derivative) *derivative = dp;
  return p;
}

Complex newton(const std::vector<Complex>& c, Complex z, int max_iter) {
  for (int it = 0; it < max_iter; ++it) {
    Complex dp;
    const Complex p = poly_eval(c, z, &dp);
    if (p == 0.0) break;
    if (std::abs(dp) == 0.0) {
      z += Complex(1e-3, 1e-3);
      continue;
    }
    const Complex step = p / dp;
    z -= step;
    if (std::abs(step) <= 4.0 * kEps * std::max(1.0, std::abs(z))) break;
  }
  return z;
}

}  // namespace

std::vector<Complex> oracle_eigen(const ComplexMatrix& a) {
  const Index n = a.rows();
  if (a.cols() != n) throw Error(ErrorCode::NotSquare, "oracle_eigen: matrix is not square");
  if (n > 64) throw Error(ErrorCode::InvalidArgument, "oracle_eigen: limited to n <= 64");
  ComplexMatrix h = a;
  to_hessenberg(h);
  const double scale = std::max(h.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());

  std::vector<Complex> eig(static_cast<std::size_t>(n));
  Index hi = n - 1;
  int iter = 0;
  const int max_iter_per_value = 60;
  while (hi >= 0) {
    if (hi == 0) {
      eig[0] = h(0, 0);
      break;
    }
    Index l = hi;
    while (l > 0) {
      double s = abs1(h(l, l)) + abs1(h(l - 1, l - 1));
      if (s == 0.0) s = scale;
      if (abs1(h(l, l - 1)) <= kEps * s) {
        h(l, l - 1) = 0.0;
        break;
      }
      --l;
    }
    if (l == hi) {
      eig[static_cast<std::size_t>(hi)] = h(hi, hi);
      --hi;
      iter = 0;
      continue;
    }
    if (++iter > max_iter_per_value) {
      std::ostringstream os;
      os << "oracle_eigen: no convergence for eigenvalue " << hi << " of " << n;
      throw Error(ErrorCode::NoConvergence, os.str());
    }

    Complex mu;
    if (iter % 10 == 0) {
      // exceptional shift to break cycles
      mu = h(hi, hi) + Complex(0.75 * std::abs(h(hi, hi - 1)), 0.25 * std::abs(h(hi, hi - 1)));
    } else {
      mu = wilkinson_shift(h(hi - 1, hi - 1), h(hi - 1, hi), h(hi, hi - 1), h(hi, hi));
    }

    // One explicit QR step on the active block [l, hi]: H − μI = QR, H ← RQ + μI.
    for (Index i = l; i <= hi; ++i) h(i, i) -= mu;
    std::vector<Complex> cs(static_cast<std::size_t>(hi - l));
    std::vector<Complex> sn(static_cast<std::size_t>(hi - l));
    for (Index k = l; k < hi; ++k) {
      const Complex x = h(k, k);
      const Complex y = h(k + 1, k);
      const double r = std::hypot(std::abs(x), std::abs(y));
      Complex c = 1.0, s = 0.0;
      if (r > 0.0) {
        c = x / r;
        s = y / r;
      }
      cs[static_cast<std::size_t>(k - l)] = c;
      sn[static_cast<std::size_t>(k - l)] = s;
      for (Index j = k; j <= hi; ++j) {
        const Complex u = h(k, j);
        const Complex v = h(k + 1, j);
        h(k, j) = std::conj(c) * u + std::conj(s) * v;
        h(k + 1, j) = -s * u + c * v;
      }
    }
    for (Index k = l; k < hi; ++k) {
      const Complex c = cs[static_cast<std::size_t>(k - l)];
      const Complex s = sn[static_cast<std::size_t>(k - l)];
      for (Index i = l; i <= k + 1; ++i) {
        const Complex u = h(i, k);
        const Complex v = h(i, k + 1);
        h(i, k) = u * c + v * s;
        h(i, k + 1) = -u * std::conj(s) + v * std::conj(c);
      }
    }
    for (Index i = l; i <= hi; ++i) h(i, i) += mu;
  }
  return eig;
}

std::vector<Complex> oracle_eigen(const RealOperator& t) {
  return oracle_eigen(ComplexMatrix(t.matrix().cast<Complex>()));
}

std::vector<Complex> characteristic_polynomial(const ComplexMatrix& a) {
  const Index n = a.rows();
  std::vector<Complex> c(static_cast<std::size_t>(n + 1));
  c[static_cast<std::size_t>(n)] = 1.0;
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  const ComplexMatrix eye = ComplexMatrix::Identity(n, n);
  for (Index k = 1; k <= n; ++k) {
    m = a * m + c[static_cast<std::size_t>(n - k + 1)] * eye;
    c[static_cast<std::size_t>(n - k)] = -(a * m).trace() / static_cast<double>(k);
  }
  return c;
}

std::vector<Complex> polynomial_roots(const std::vector<Complex>& coeffs) {
  std::vector<Complex> c = coeffs;
  while (c.size() > 1 && c.back() == 0.0) c.pop_back();
  if (c.size() < 2) return {};
  const Complex lead = c.back();
  for (auto& v : c) v /= lead;
  const std::size_t deg = c.size() - 1;

  // Cauchy bound R; roots of q(z) = p(Rz)/R^deg lie in the unit disk.
  double bound = 0.0;
  for (std::size_t k = 0; k < deg; ++k) bound = std::max(bound, std::abs(c[k]));
  bound = std::max(1.0, 1.0 + bound);
  std::vector<Complex> q(c.size());
  for (std::size_t k = 0; k <= deg; ++k) q[k] = c[k] * std::pow(bound, static_cast<double>(k) - static_cast<double>(deg));

  std::vector<Complex> roots;
  std::vector<Complex> work = q;
  for (std::size_t d = deg; d >= 1; --d) {
    const Complex z = newton(work, Complex(0.4, 0.9), 500);
    roots.push_back(z);
    // Synthetic division by (x − z).
    std::vector<Complex> next(d);
    Complex carry = work[d];
    for (std::size_t k = d; k-- > 0;) {
      next[k] = carry;
      carry = work[k] + carry * z;
    }
    work = std::move(next);
  }
  for (auto& r : roots) r = newton(q, r, 50) * bound;
  return roots;
}

ComplexColumn oracle_eigenvector(const ComplexMatrix& a, Complex mu) {
  const Index n = a.rows();
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  ComplexMatrix shifted = a;
  shifted.diagonal().array() -= mu + Complex(1e-10 * scale, 0.0);
  ComplexColumn x = ComplexColumn::Ones(n) / std::sqrt(static_cast<double>(n));
  for (Index i = 0; i < n; ++i) x(i) += Complex(0.01 * static_cast<double>(i + 1), 0.0);
  x /= x.norm();
  for (int it = 0; it < 4; ++it) {
    x = gauss_solve(shifted, x);
    x /= x.norm();
  }
  return x;
}

double conjugation_gap(const std::vector<Complex>& values) {
  double gap = 0.0;
  for (const Complex a : values) {
    double best = std::numeric_limits<double>::infinity();
    for (const Complex b : values) best = std::min(best, std::abs(std::conj(a) - b));
    gap = std::max(gap, best);
  }
  return gap;
}

std::vector<EigenCluster> cluster_eigenvalues(const std::vector<Complex>& values, double tol) {
  const std::size_t n = values.size();
  std::vector<std::size_t> parent(n);
  for (std::size_t i = 0; i < n; ++i) parent[i] = i;
  auto find = [&parent](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(values[i] - values[j]) <= tol) parent[find(i)] = find(j);

  std::vector<EigenCluster> clusters;
  std::vector<std::size_t> roots;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = find(i);
    auto it = std::find(roots.begin(), roots.end(), r);
    if (it == roots.end()) {
      roots.push_back(r);
      clusters.push_back({});
      it = roots.end() - 1;
    }
    clusters[static_cast<std::size_t>(it - roots.begin())].members.push_back(values[i]);
  }
  for (auto& c : clusters) {
    Complex sum = 0.0;
    for (const Complex m : c.members) sum += m;
    c.center = sum / static_cast<double>(c.members.size());
    std::sort(c.members.begin(), c.members.end(), [](Complex p, Complex q) {
      return std::arg(p) != std::arg(q) ? std::arg(p) < std::arg(q) : std::abs(p) < std::abs(q);
    });
  }
  std::sort(clusters.begin(), clusters.end(), [](const EigenCluster& p, const EigenCluster& q) {
    const double ap = std::arg(p.center);
    const double aq = std::arg(q.center);
    return ap != aq ? ap < aq : std::abs(p.center) < std::abs(q.center);
  });
  return clusters;
}

double multiset_distance(std::vector<Complex> a, std::vector<Complex> b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (const Complex x : a) {
    auto it = std::min_element(b.begin(), b.end(), [x](Complex p, Complex q) {
      return std::abs(p - x) < std::abs(q - x);
    });
    worst = std::max(worst, std::abs(*it - x));
    b.erase(it);
  }
  return worst;
}

}  // namespace symspace::testgen
