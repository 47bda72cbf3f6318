#pragma once
/**
 * @file oracle.hpp
 * @brief Independent brute-force minimum-time reference. Searches over
 *        segment-structured control sequences (words over {L, R, S} up to
 *        three segments, both laser senses, every one-shot laser schedule)
 *        with grid seeding and local refinement. Used to certify the planner
 *        at desk scale; deliberately enumerates arc-arc-arc words too.
 */

#include <string>
#include <vector>

#include "dublaser/model.hpp"
#include "dublaser/types.hpp"

namespace dublaser {

struct OracleConfig {
  double duration_grid_resolution = 0.02;  ///< certification resolution (time units)
  int refine_iterations = 30;              ///< coordinate-descent rounds per seed
  int max_segments = 3;                    ///< pose word length bound (1..3)
  double tol_capture = 1e-9;               ///< range slack allowed during search

  void validate() const;
};

struct OracleResult {
  bool found = false;
  double time = 0.0;
  std::string word;  ///< pose word of the best structure
  LaserSense sense = LaserSense::Clockwise;
  std::vector<double> durations;
  double t_switch_on = 0.0;
  double best_ccc_time = 0.0;  ///< best arcs-only 3-segment structure (inf if none)

  /// Materialize the best control description for re-simulation.
  TrajectoryPlan to_plan(const SystemParams& params, const State& start) const;
};

/**
 * Minimum capture time found by structured search. Returns found = false
 * (time = +inf) only when nothing captures within a generous reachability
 * horizon; for valid scenarios a capturing structure always exists.
 */
OracleResult oracle_min_time(const SystemParams& params, const State& start,
                             const OracleConfig& cfg = {});

}  // namespace dublaser
