#pragma once
/**
 * @file geometry.hpp
 * @brief Planar geometry toolkit shared by the trajectory solvers: 2-vectors,
 *        angle wrapping, turn-circle construction and tangent lines through
 *        the target.
 *
 * Conventions: headings are measured anticlockwise from the +X axis. A left
 * turn increases the heading, a right turn decreases it. The target sits at
 * the origin throughout.
 */

#include <cmath>
#include <numbers>
#include <optional>

namespace dublaser {

inline constexpr double kPi = std::numbers::pi_v<double>;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi_v<double>;

// Sweeps and rotations within this distance of a full turn collapse to zero,
// so exact zero-rotation cases do not alias to 2*pi under float noise.
inline constexpr double kAngleSnap = 1e-9;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2() = default;
  constexpr Vec2(double x_, double y_) : x(x_), y(y_) {}

  constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
  constexpr Vec2 operator-() const { return {-x, -y}; }

  double norm() const { return std::hypot(x, y); }
  constexpr double norm_sq() const { return x * x + y * y; }
  constexpr double dot(Vec2 o) const { return x * o.x + y * o.y; }
  constexpr double cross(Vec2 o) const { return x * o.y - y * o.x; }
  constexpr Vec2 perp() const { return {-y, x}; }  // +90 degrees
};

inline constexpr Vec2 operator*(double s, Vec2 v) { return v * s; }

/// Unit vector of a heading angle.
inline Vec2 heading_dir(double theta) { return {std::cos(theta), std::sin(theta)}; }

/// Polar angle of a vector, in [0, 2pi).
double polar_angle(Vec2 v);

/// Wrap an angle into [0, 2pi).
double wrap_two_pi(double a);

/// Wrap an angle into (-pi, pi]. All angular *differences* go through here.
double wrap_pi(double a);

/// Shortest unsigned angular distance between two angles, in [0, pi].
double angle_dist(double a, double b);

/**
 * Arc sweep from heading `from` to heading `to` in the given turn direction,
 * as a value in [0, 2pi). Snapped so that from == to gives 0, not 2pi.
 */
double sweep_angle(double from, double to, bool ccw);

/**
 * Rotation amount (>= 0, < 2pi) needed to move an orientation from `from` to
 * `to` turning in the direction of `omega_sign` (+1 anticlockwise,
 * -1 clockwise). Snapped at a full turn.
 */
double rotation_toward(double from, double to, double omega_sign);

/// Center of the turning circle for a vehicle at (pos, theta) turning left/right.
Vec2 turn_center(Vec2 pos, double theta, bool left, double rho);

/// Point on a turning circle (given its center) where the vehicle heading is theta.
Vec2 point_on_turn_circle(Vec2 center, double theta, bool left, double rho);

/**
 * Tangency geometry of the line through the target (the origin) touching a
 * turning circle. `point` is where the vehicle leaves the circle, `theta` the
 * straight-line heading there.
 */
struct Tangency {
  Vec2 point;
  double theta;
};

/**
 * Tangent line through the origin for a vehicle circling `center` in the
 * given direction. `toward_target` selects between the branch whose straight
 * ray runs toward the origin and the one running away from it. Empty when the
 * circle contains the origin (no tangent through the target exists).
 */
std::optional<Tangency> tangent_through_target(Vec2 center, double rho, bool left,
                                               bool toward_target);

}  // namespace dublaser
