#pragma once
/**
 * @file relaxed.hpp
 * @brief Solvers for the candidate families whose laser can wait before
 *        turning: CS, C and S pose trajectories. The CS/S geometry reduces to
 *        a Dubins path to the range circle with the straight piece running
 *        through the target; the C family is a one-dimensional bracketed
 *        search over the arc length.
 */

#include <optional>
#include <string>

#include "dublaser/model.hpp"
#include "dublaser/types.hpp"

namespace dublaser {

struct RelaxedSolution {
  TrajectoryPlan plan;
  double theta_f = 0.0;       ///< final heading
  Vec2 final_point;           ///< on the range circle except for the pure-C case
  double t_l_star = 0.0;      ///< latest admissible laser switch-on time
  double T_D = 0.0;           ///< vehicle travel time (= plan.t_final)
  double first_switch_time = 0.0;  ///< time at the arc/straight switching point
};

/**
 * Turn-then-straight trajectory ending on the range circle with the straight
 * segment collinear with the target. Returns the unique geometry for the
 * requested turn direction, or nothing (with a reason) when the turn circle
 * contains the target, the tangent point is already inside the range circle,
 * or the laser cannot finish its sweep even when switched on at t = 0.
 */
std::optional<RelaxedSolution> solve_cs(const SystemParams& params, const State& start,
                                        SegKind turn, LaserSense sense,
                                        std::string* reason = nullptr);

/**
 * Single-arc trajectory: the smallest arc duration at which the vehicle is
 * within range with the laser able to complete its sweep. Capture may happen
 * strictly inside the range disk. The scan extends past one full turn so
 * slow-laser cases that must loiter on the circle are still found.
 */
std::optional<RelaxedSolution> solve_c(const SystemParams& params, const State& start,
                                       SegKind turn, LaserSense sense,
                                       std::string* reason = nullptr);

/**
 * Pure straight-line trajectory. Requires the start heading ray to run
 * through the target; the vehicle stops on the range circle.
 */
std::optional<RelaxedSolution> solve_s(const SystemParams& params, const State& start,
                                       LaserSense sense, std::string* reason = nullptr);

/**
 * Turn-straight capture *inside* the range circle. The straight piece runs
 * down the tangent line through the target past the range circle; capture
 * happens at an exact aim alignment on the approach, just past the target,
 * or during the near-target pass where the bearing to the target sweeps
 * half a turn. These captures beat every circle-terminating candidate when
 * the laser is too slow to finish its sweep by the first circle crossing.
 */
std::optional<RelaxedSolution> solve_cs_interior(const SystemParams& params,
                                                 const State& start, SegKind turn,
                                                 LaserSense sense,
                                                 std::string* reason = nullptr);

/// Straight-line analogue of solve_cs_interior (heading line through target).
std::optional<RelaxedSolution> solve_s_interior(const SystemParams& params,
                                                const State& start, LaserSense sense,
                                                std::string* reason = nullptr);

}  // namespace dublaser
