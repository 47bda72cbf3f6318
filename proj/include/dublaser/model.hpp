#pragma once
/**
 * @file model.hpp
 * @brief Two-stage kinematic model of the Dubins-laser system: closed-form
 *        simulation, capture testing, and a verifier that certifies a plan
 *        against the first-order optimality conditions.
 *
 * Kinematics: xdot = cos(theta), ydot = sin(theta), thetadot = u / rho,
 * psidot = u / rho + omega, with |u| <= 1 and |omega| <= omega_max. The laser
 * rate is zero before the switch-on time and held at +/-omega_max afterwards,
 * so psi - theta is constant while the laser is off. All pieces integrate in
 * closed form; no numerical ODE stepping is involved anywhere.
 */

#include <utility>
#include <vector>

#include "dublaser/geometry.hpp"
#include "dublaser/types.hpp"

namespace dublaser {

// Tolerances used across the library.
inline constexpr double kTolGeom = 1e-9;   // geometry residuals (length units)
inline constexpr double kTolH = 1e-7;      // Hamiltonian residuals
inline constexpr double kTolAngle = 1e-6;  // capture aim tolerance (rad)

/**
 * Advance the state along one constant-control piece for `dur` time units.
 * `omega` is the (already signed) laser rate active throughout the piece.
 * Arcs and lines are integrated exactly.
 */
State advance(const SystemParams& params, const State& s, SegKind kind, double dur,
              double omega);

using TimedState = std::pair<double, State>;

/**
 * Sample a plan's trajectory. Output contains every multiple of dt in
 * [0, t_final], every segment boundary, and the laser switch-on time, each
 * computed in closed form from the segment start (dt only controls output
 * density). Throws Error::InconsistentPlan when a segment's recorded start
 * state disagrees with the propagated state beyond tolerance.
 */
std::vector<TimedState> simulate(const SystemParams& params, const State& start,
                                 const TrajectoryPlan& plan, double dt);

/// Final state of a plan, propagated exactly (no sampling).
State propagate(const SystemParams& params, const State& start,
                const TrajectoryPlan& plan);

struct CaptureResult {
  bool captured = false;
  double range_slack = 0.0;  // x^2 + y^2 - r^2; <= tolerance when in range
  double aim_error = 0.0;    // wrapped |pi + atan2(y, x) - psi|
};

/**
 * Capture test: within range r of the target and laser aimed at it. The aim
 * error uses wrapped angular distance. Throws Error::StateAtTarget when the
 * state sits exactly on the target (aim direction undefined).
 */
CaptureResult capture_check(const SystemParams& params, const State& s,
                            double tol_angle = kTolAngle);

/**
 * Signed change of the laser orientation across a segment when the laser is
 * on for the trailing `active_fraction` of it.
 */
double laser_angle_swept(const SystemParams& params, const PoseSegment& segment,
                         LaserSense sense, double active_fraction);

/**
 * Certificate of the first-order necessary conditions for a candidate plan:
 * reconstructed costate constants, the worst Hamiltonian residual along the
 * trajectory and the worst distance of switching points / straight segments
 * from the line through the target they must lie on.
 */
struct PmpCertificate {
  double c_x = 0.0;
  double c_y = 0.0;
  double c_psi = 0.0;  // equals -c_0 whenever the plan terminates on the
                       // range circle (active range constraint)
  double c_0 = 0.0;
  double p0 = 1.0;  // 1 on normal extremals, 0 on abnormal ones
  double hamiltonian_residual = 0.0;
  double collinearity_residual = 0.0;
  bool rank_deficient = false;

  /// Direction angle of the costate (c_x, c_y).
  double phi() const { return std::atan2(c_y, c_x); }
};

/**
 * Reconstruct costate constants for a plan by least squares over the
 * vanishing-Hamiltonian samples, the switching-point collinearity conditions
 * and the terminal condition on the heading costate, then report the
 * residuals of the fit. Tries the normal normalization (p0 = 1) first and
 * falls back to the abnormal one (p0 = 0) when only that is consistent.
 * Under-determined plans (e.g. a bare straight segment) come back flagged
 * rank-deficient with residuals evaluated on the determinable subspace.
 */
PmpCertificate pmp_verify(const SystemParams& params, const State& start,
                          const TrajectoryPlan& plan);

/// Build a plan skeleton from segment kinds/durations starting at `start`;
/// fills per-segment start states, final state and t_final. Drops
/// zero-duration segments from the stored list.
TrajectoryPlan make_plan(const SystemParams& params, const State& start,
                         const CandidateType& candidate,
                         const std::vector<std::pair<SegKind, double>>& pieces,
                         const LaserSchedule& laser);

}  // namespace dublaser
