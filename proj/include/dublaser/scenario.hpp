#pragma once
/**
 * @file scenario.hpp
 * @brief Line-oriented `key = value` scenario and result documents plus the
 *        SVG trajectory renderer behind the command-line front end.
 */

#include <optional>
#include <string>

#include "dublaser/oracle.hpp"
#include "dublaser/planner.hpp"
#include "dublaser/types.hpp"

namespace dublaser {

/// A parsed scenario file: initial state, problem constants, oracle options.
struct ScenarioFile {
  SystemParams params;
  State start;
  OracleConfig oracle;

  static ScenarioFile parse_text(const std::string& text, bool degrees = false);
  static ScenarioFile load(const std::string& path, bool degrees = false);

  std::string to_text() const;
};

/// Deterministic result document for a solve report (fixed key order and
/// float formatting; repeated runs are byte-identical).
std::string write_report(const ScenarioFile& scenario, const SolveReport& report);

/// Result document for a bare oracle run.
std::string write_oracle_result(const ScenarioFile& scenario, const OracleResult& res);

/// Re-parse the plan carried by a result document (used for round-trips).
TrajectoryPlan parse_report_plan(const std::string& text, const SystemParams& params,
                                 const State& start);

/**
 * SVG rendering of a plan: sampled trajectory polyline, dashed range circle,
 * target dot, start/end markers and laser-direction ticks at regular
 * intervals.
 */
std::string render_svg(const SystemParams& params, const State& start,
                       const TrajectoryPlan& plan);

}  // namespace dublaser
