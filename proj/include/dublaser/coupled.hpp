#pragma once
/**
 * @file coupled.hpp
 * @brief Solvers for the candidate families whose laser must turn from t = 0:
 *        two-arc (CC), arc-straight-arc (CSC) and straight-arc (SC) pose
 *        trajectories ending on the range circle.
 *
 * Each family reduces to a square nonlinear system in the unknowns
 * (eta, lambda1, theta_f, c0): the polar angle of the final point on the
 * range circle, the terminal multiplier of the range constraint, the final
 * heading, and the costate constant tied to the laser costate by
 * c_psi = -c0. The in-plane costate components follow from the terminal
 * conditions as
 *     c_x = lambda1 * r * cos(eta) - c0 * sin(eta) / r,
 *     c_y = lambda1 * r * sin(eta) + c0 * cos(eta) / r,
 * which makes the terminal heading-costate condition hold identically. The
 * residual system is solved by multistart damped Newton with a central
 * finite-difference Jacobian; converged roots are materialized into plans and
 * filtered by capture, nonnegative durations and the control sign conditions.
 */

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "dublaser/model.hpp"
#include "dublaser/types.hpp"

namespace dublaser {

struct CoupledUnknowns {
  double eta = 0.0;      ///< polar angle of the final point on the range circle
  double lambda1 = 0.0;  ///< terminal multiplier of the range constraint
  double theta_f = 0.0;  ///< final heading
  double c0 = 0.0;       ///< heading-costate constant; c_psi = -c0
};

/// Residuals of one family system. At a root all entries vanish.
struct ResidualVector {
  std::array<double, 4> v{};
  bool evaluable = true;  // false at singular configurations (large sentinel)

  double max_abs() const;
  double norm2() const;
};

/**
 * Residuals of the two-arc system for words RL / LR:
 * (H(0), switch-point collinearity, circle-tangency closure, laser/vehicle
 * time match). The vanishing Hamiltonian at the switch and at the final time
 * follow from these on closed geometry, so they are certified afterwards
 * rather than duplicated in the system.
 */
ResidualVector residuals_cc(const SystemParams& params, const State& start,
                            const std::string& word, LaserSense sense,
                            const CoupledUnknowns& u);

/**
 * Residuals of the arc-straight-arc system for words RSR/RSL/LSL/LSR:
 * (H(0), first-switch collinearity, second-switch collinearity, laser/vehicle
 * time match). `toward_target` picks the tangent branch of the first arc
 * whose straight ray runs toward (vs past) the target.
 */
ResidualVector residuals_csc(const SystemParams& params, const State& start,
                             const std::string& word, LaserSense sense,
                             const CoupledUnknowns& u, bool toward_target = true);

/**
 * All feasible roots of a coupled family, materialized as plans and sorted by
 * final time. Covers CC, CSC and the straight-then-arc words SR/SL (solved as
 * the zero-length-first-arc degeneration of CSC; those require the start
 * heading line to run through the target). Returns an empty list when no
 * root survives the filters; `reason` explains an a-priori infeasibility.
 */
std::vector<TrajectoryPlan> solve_family(const SystemParams& params, const State& start,
                                         const CandidateType& candidate,
                                         std::string* reason = nullptr);

}  // namespace dublaser
