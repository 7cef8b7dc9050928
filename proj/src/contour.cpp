#include "symspace/contour.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>

namespace symspace {

namespace {

constexpr double kPi = std::numbers::pi;

[[noreturn]] void invalid(const std::string& msg) { throw Error(ErrorCode::InvalidArgument, msg); }

// Position and derivative of a loop parametrized over t ∈ [0, 2π).
using LoopFn = std::function<std::pair<Complex, Complex>(double)>;

// Appends one counterclockwise loop. When `mirror_symmetric`, λ(−t) = conj λ(t)
// holds analytically and is imposed exactly: nodes 1..N/2−1 are computed and
// N−j is set to the conjugate of j; t = 0 and t = π are forced onto the real axis.
void append_loop(QuadratureRule& rule, const LoopFn& fn, int n, bool mirror_symmetric) {
  const double dt = 2.0 * kPi / n;
  const Complex scale = 1.0 / Complex(0.0, static_cast<double>(n));  // Δt/(2πi)
  const std::size_t base = rule.nodes.size();
  rule.nodes.resize(base + n);
  rule.weights.resize(base + n);
  if (!mirror_symmetric) {
    for (int j = 0; j < n; ++j) {
      const auto [z, dz] = fn(j * dt);
      rule.nodes[base + j] = z;
      rule.weights[base + j] = dz * scale;
    }
    return;
  }
  const int half = n / 2;
  for (int j = 0; j <= half; ++j) {
    auto [z, dz] = fn(j * dt);
    Complex w = dz * scale;
    if (j == 0 || j == half) {
      z = Complex(z.real(), 0.0);
      w = Complex(w.real(), 0.0);
    }
    rule.nodes[base + j] = z;
    rule.weights[base + j] = w;
    if (j != 0 && j != half) {
      rule.nodes[base + n - j] = std::conj(z);
      rule.weights[base + n - j] = std::conj(w);
    }
  }
}

LoopFn arc_loop_fn(const ArcLoop& loop, double delta) {
  const double a = loop.half_width + delta;
  const double b = std::sqrt(delta * (delta + 2.0 * loop.half_width));
  const double c = loop.center;
  return [a, b, c](double t) {
    const double ct = std::cos(t);
    const double st = std::sin(t);
    const Complex z = std::exp(Complex(b * ct, c + a * st));
    const Complex dz = z * Complex(-b * st, a * ct);
    return std::make_pair(z, dz);
  };
}

}  // namespace

Contour Contour::circle(Complex center, double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) invalid("circle: radius must be positive");
  return Contour(Circle{center, radius});
}

Contour Contour::ellipse(Complex center, double semi_x, double semi_y) {
  if (!(semi_x > 0.0) || !(semi_y > 0.0)) invalid("ellipse: semi-axes must be positive");
  return Contour(Ellipse{center, semi_x, semi_y});
}

Contour Contour::arc_stadium(double theta_lo, double theta_hi, double delta, bool conjugate_closed) {
  if (!(delta > 0.0)) invalid("arc_stadium: margin delta must be positive");
  if (!(theta_lo < theta_hi)) invalid("arc_stadium: need theta_lo < theta_hi");
  if (theta_lo < -kPi || theta_hi > kPi) invalid("arc_stadium: angles must lie in [-pi, pi]");
  Contour c(ArcStadium{theta_lo, theta_hi, delta, conjugate_closed});
  for (const ArcLoop& loop : c.arc_loops())
    if (loop.half_width + delta >= kPi)
      invalid("arc_stadium: loop would wrap around the circle (half-width + delta >= pi)");
  return c;
}

std::vector<ArcLoop> Contour::arc_loops() const {
  const auto* s = std::get_if<ArcStadium>(&shape_);
  if (!s) return {};
  double lo = s->theta_lo;
  double hi = s->theta_hi;
  const double d = s->delta;
  if (!s->conjugate_closed) return {{0.5 * (lo + hi), 0.5 * (hi - lo)}};
  if (hi <= 0.0) {  // same conjugation-closed union as the mirrored arc
    const double t = lo;
    lo = -hi;
    hi = -t;
  }
  const bool near_zero = lo - d <= 0.0;
  const bool near_pi = hi + d >= kPi;
  if (near_zero && near_pi)
    invalid("arc_stadium: arc and its mirror image cover the whole circle");
  if (near_zero) return {{0.0, std::max(std::abs(lo), std::abs(hi))}};
  if (near_pi) return {{kPi, kPi - lo}};
  const ArcLoop upper{0.5 * (lo + hi), 0.5 * (hi - lo)};
  return {upper, {-upper.center, upper.half_width}};
}

bool Contour::is_symmetric() const {
  return std::visit(
      [this](const auto& s) -> bool {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ArcStadium>) {
          if (s.conjugate_closed) return true;
          const auto loops = arc_loops();
          return loops.front().center == 0.0 || loops.front().center == kPi;
        } else {
          return s.center.imag() == 0.0;
        }
      },
      shape_);
}

int Contour::loop_count() const {
  if (std::holds_alternative<ArcStadium>(shape_)) return static_cast<int>(arc_loops().size());
  return 1;
}

double Contour::standoff() const {
  return std::visit(
      [](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Circle>)
          return 0.1 * s.radius;
        else if constexpr (std::is_same_v<T, Ellipse>)
          return 0.1 * std::min(s.semi_x, s.semi_y);
        else
          return s.delta;
      },
      shape_);
}

std::vector<Complex> Contour::interior_points() const {
  return std::visit(
      [this](const auto& s) -> std::vector<Complex> {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ArcStadium>) {
          std::vector<Complex> pts;
          for (const ArcLoop& loop : arc_loops()) pts.push_back(std::polar(1.0, loop.center));
          return pts;
        } else {
          return {s.center};
        }
      },
      shape_);
}

QuadratureRule build_rule(const Contour& c, int nodes_per_loop) {
  if (nodes_per_loop < 16) invalid("build_rule: nodes_per_loop must be at least 16");
  const bool symmetric = c.is_symmetric();
  if (symmetric && nodes_per_loop % 2 != 0)
    invalid("build_rule: symmetric contours need an even nodes_per_loop");

  QuadratureRule rule;
  rule.nodes_per_loop = nodes_per_loop;
  rule.contour = c;
  const int n = nodes_per_loop;

  if (const auto* s = std::get_if<Circle>(&c.shape())) {
    const Complex center = s->center;
    const double r = s->radius;
    append_loop(rule, [center, r](double t) {
      const Complex e = std::polar(1.0, t);
      return std::make_pair(center + r * e, Complex(0.0, r) * e);
    }, n, symmetric);
  } else if (const auto* e = std::get_if<Ellipse>(&c.shape())) {
    const Complex center = e->center;
    const double ax = e->semi_x;
    const double ay = e->semi_y;
    append_loop(rule, [center, ax, ay](double t) {
      const double ct = std::cos(t);
      const double st = std::sin(t);
      return std::make_pair(center + Complex(ax * ct, ay * st), Complex(-ax * st, ay * ct));
    }, n, symmetric);
  } else {
    const auto& arc = std::get<ArcStadium>(c.shape());
    const auto loops = c.arc_loops();
    if (loops.size() == 1) {
      const bool on_axis = loops[0].center == 0.0 || loops[0].center == kPi;
      append_loop(rule, arc_loop_fn(loops[0], arc.delta), n, on_axis);
    } else {
      // Upper loop, then its mirror image: conj reverses orientation and
      // re-traversing in −t restores it, which amounts to conjugating nodes
      // and weights.
      append_loop(rule, arc_loop_fn(loops[0], arc.delta), n, false);
      for (int j = 0; j < n; ++j) {
        rule.nodes.push_back(std::conj(rule.nodes[j]));
        rule.weights.push_back(std::conj(rule.weights[j]));
      }
    }
  }
  rule.loops = static_cast<int>(rule.nodes.size()) / n;
  return rule;
}

WindingResult winding_number(const QuadratureRule& rule, Complex p) {
  Complex sum = 0.0;
  for (std::size_t j = 0; j < rule.size(); ++j) {
    const Complex diff = rule.nodes[j] - p;
    if (std::abs(diff) < 1e-6) {
      std::ostringstream os;
      os << "point " << p << " lies within 1e-6 of contour node " << rule.nodes[j];
      throw ResidualError(ErrorCode::TooCloseToContour, std::abs(diff), os.str());
    }
    sum += rule.weights[j] / diff;
  }
  WindingResult out;
  out.winding = static_cast<int>(std::lround(sum.real()));
  out.residual = std::abs(sum.real() - out.winding);
  if (out.residual > 0.1) {
    std::ostringstream os;
    os << "winding sum " << sum.real() << " at " << p << " is not near an integer";
    throw ResidualError(ErrorCode::TooCloseToContour, out.residual, os.str());
  }
  return out;
}

double symmetrize_check(const QuadratureRule& rule) {
  double worst = 0.0;
  for (std::size_t j = 0; j < rule.size(); ++j) {
    const Complex zc = std::conj(rule.nodes[j]);
    const Complex wc = std::conj(rule.weights[j]);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < rule.size() && best > 0.0; ++k)
      best = std::min(best, std::abs(zc - rule.nodes[k]) + std::abs(wc - rule.weights[k]));
    worst = std::max(worst, best);
  }
  return worst;
}

nlohmann::json contour_to_json(const Contour& c, int nodes_per_loop) {
  nlohmann::json j;
  std::visit(
      [&j](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Circle>) {
          j["kind"] = "circle";
          j["center"] = {s.center.real(), s.center.imag()};
          j["radius"] = s.radius;
        } else if constexpr (std::is_same_v<T, Ellipse>) {
          j["kind"] = "ellipse";
          j["center"] = {s.center.real(), s.center.imag()};
          j["semi_axes"] = {s.semi_x, s.semi_y};
        } else {
          j["kind"] = "arc_stadium";
          j["theta_lo"] = s.theta_lo;
          j["theta_hi"] = s.theta_hi;
          j["delta"] = s.delta;
          j["conjugate_closed"] = s.conjugate_closed;
        }
      },
      c.shape());
  j["nodes_per_loop"] = nodes_per_loop;
  return j;
}

ContourSpec contour_from_json(const nlohmann::json& j) {
  try {
    const std::string kind = j.at("kind").get<std::string>();
    const int nodes = j.value("nodes_per_loop", kDefaultNodesPerLoop);
    auto complex_at = [&j](const char* key) {
      const auto& v = j.at(key);
      if (!v.is_array() || v.size() != 2) invalid(std::string("contour: '") + key + "' must be [re, im]");
      return Complex(v[0].get<double>(), v[1].get<double>());
    };
    if (kind == "circle") return {Contour::circle(complex_at("center"), j.at("radius").get<double>()), nodes};
    if (kind == "ellipse") {
      const auto& ax = j.at("semi_axes");
      if (!ax.is_array() || ax.size() != 2) invalid("contour: 'semi_axes' must be [x, y]");
      return {Contour::ellipse(complex_at("center"), ax[0].get<double>(), ax[1].get<double>()), nodes};
    }
    if (kind == "arc_stadium")
      return {Contour::arc_stadium(j.at("theta_lo").get<double>(), j.at("theta_hi").get<double>(),
                                   j.at("delta").get<double>(), j.value("conjugate_closed", true)),
              nodes};
    invalid("contour: unknown kind '" + kind + "'");
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("contour JSON: ") + e.what());
  }
}

}  // namespace symspace
