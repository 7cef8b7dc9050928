#pragma once

#include <variant>
#include <vector>

#include <json.hpp>

#include "symspace/operator_core.hpp"

namespace symspace {

struct Circle {
  Complex center;
  double radius = 1.0;
};

struct Ellipse {
  Complex center;
  double semi_x = 1.0;  // along the real axis
  double semi_y = 1.0;  // along the imaginary axis
};

/// Closed curve around the unit-circle arc {e^{iθ} : θ ∈ [theta_lo, theta_hi]}
/// keeping distance `delta` from it. With conjugate_closed the mirror arc is
/// enclosed as well, either by a second loop or, when the two arcs meet near
/// ±1, by a single loop symmetric about the real axis.
///
/// Each loop is the image under exp of the ellipse
///   w(t) = b·cos t + i(c + a·sin t),  a = h + δ,  b = sqrt(δ(δ + 2h)),
/// where [c − h, c + h] is the enclosed angular interval. In log coordinates
/// this ellipse has foci at the arc ends and stays at distance ≥ δ from the arc,
/// touching δ at the arc ends; the parametrization is analytic and periodic.
struct ArcStadium {
  double theta_lo = 0.0;
  double theta_hi = 0.0;
  double delta = 0.1;
  bool conjugate_closed = true;
};

/// Enclosed angular interval [center − half_width, center + half_width] of one loop.
struct ArcLoop {
  double center = 0.0;
  double half_width = 0.0;
};

/// Counterclockwise closed contour.
class Contour {
 public:
  using Shape = std::variant<Circle, Ellipse, ArcStadium>;

  static Contour circle(Complex center, double radius);
  static Contour ellipse(Complex center, double semi_x, double semi_y);
  static Contour arc_stadium(double theta_lo, double theta_hi, double delta, bool conjugate_closed);

  const Shape& shape() const noexcept { return shape_; }

  // True when the traced curve is invariant under conjugation.
  bool is_symmetric() const;
  int loop_count() const;
  // Characteristic distance the curve keeps from what it encloses: δ for arc
  // stadiums, one tenth of the smallest radius for circles and ellipses.
  double standoff() const;
  // A point strictly inside each loop.
  std::vector<Complex> interior_points() const;
  // Loops of an arc stadium in log coordinates (empty for other shapes).
  std::vector<ArcLoop> arc_loops() const;

 private:
  explicit Contour(Shape s) : shape_(std::move(s)) {}
  Shape shape_;
};

/// Trapezoidal rule on the contour: ∑_j w_j·f(λ_j) ≈ (1/2πi)∮ f(λ) dλ, with
/// w_j = λ'(t_j)·Δt/(2πi).
struct QuadratureRule {
  std::vector<Complex> nodes;
  std::vector<Complex> weights;
  int nodes_per_loop = 0;
  int loops = 0;
  Contour contour = Contour::circle({0.0, 0.0}, 1.0);

  std::size_t size() const noexcept { return nodes.size(); }
};

inline constexpr int kDefaultNodesPerLoop = 128;

/// Symmetric contours get conjugation-closed node and weight sets by
/// construction: half of each loop is computed and the rest mirrored.
QuadratureRule build_rule(const Contour& c, int nodes_per_loop = kDefaultNodesPerLoop);

struct WindingResult {
  int winding = 0;
  double residual = 0.0;  // |Re(sum) − winding|
};

/// Nearest integer to Re ∑_j w_j/(λ_j − p). Throws TooCloseToContour when p is
/// within 1e-6 of a node or the rounding residual exceeds 0.1.
WindingResult winding_number(const QuadratureRule& rule, Complex p);

/// Max over nodes of the distance from (conj λ_j, conj w_j) to the nearest
/// (λ_k, w_k); 0 for conjugation-closed rules.
double symmetrize_check(const QuadratureRule& rule);

// {kind, parameters..., nodes_per_loop}
nlohmann::json contour_to_json(const Contour& c, int nodes_per_loop);
struct ContourSpec {
  Contour contour;
  int nodes_per_loop = kDefaultNodesPerLoop;
};
ContourSpec contour_from_json(const nlohmann::json& j);

}  // namespace symspace
