#include "dublaser/geometry.hpp"

namespace dublaser {

double wrap_two_pi(double a) {
  double w = std::fmod(a, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  if (w >= kTwoPi) w = 0.0;  // fmod can land exactly on 2pi after the add
  return w;
}

double wrap_pi(double a) {
  double w = wrap_two_pi(a);
  if (w > kPi) w -= kTwoPi;
  return w;
}

double angle_dist(double a, double b) { return std::fabs(wrap_pi(a - b)); }

double polar_angle(Vec2 v) { return wrap_two_pi(std::atan2(v.y, v.x)); }

namespace {
double snap_full_turn(double sweep) {
  return (sweep > kTwoPi - kAngleSnap) ? 0.0 : sweep;
}
}  // namespace

double sweep_angle(double from, double to, bool ccw) {
  double s = ccw ? wrap_two_pi(to - from) : wrap_two_pi(from - to);
  return snap_full_turn(s);
}

double rotation_toward(double from, double to, double omega_sign) {
  double s = omega_sign > 0.0 ? wrap_two_pi(to - from) : wrap_two_pi(from - to);
  return snap_full_turn(s);
}

Vec2 turn_center(Vec2 pos, double theta, bool left, double rho) {
  // The center sits at distance rho, 90 degrees to the side of the heading.
  Vec2 side{-std::sin(theta), std::cos(theta)};
  return left ? pos + rho * side : pos - rho * side;
}

Vec2 point_on_turn_circle(Vec2 center, double theta, bool left, double rho) {
  Vec2 side{-std::sin(theta), std::cos(theta)};
  return left ? center - rho * side : center + rho * side;
}

std::optional<Tangency> tangent_through_target(Vec2 center, double rho, bool left,
                                               bool toward_target) {
  const double d_sq = center.norm_sq();
  const double rho_sq = rho * rho;
  if (d_sq <= rho_sq) return std::nullopt;  // target inside or on the circle

  // Tangency points of the two lines through the origin touching the circle.
  const double t = std::sqrt(d_sq - rho_sq);
  const Vec2 base = center * (1.0 - rho_sq / d_sq);
  const Vec2 offs = center.perp() * (rho * t / d_sq);
  const Vec2 cand[2] = {base + offs, base - offs};

  for (const Vec2& q : cand) {
    const double th_toward = std::atan2(-q.y, -q.x);
    // Leaving the circle at q with this heading keeps the center on the
    // correct side for the requested turn direction.
    const Vec2 to_center = center - q;
    const Vec2 left_normal{-std::sin(th_toward), std::cos(th_toward)};
    const bool is_left = to_center.dot(left_normal) > 0.0;
    if (is_left == left) {
      if (toward_target) return Tangency{q, wrap_two_pi(th_toward)};
    } else {
      // The other tangency point carries this turn direction when the
      // straight ray is taken away from the target instead.
      if (!toward_target) return Tangency{q, polar_angle(q)};
    }
  }
  return std::nullopt;
}

}  // namespace dublaser
