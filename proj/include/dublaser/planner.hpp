#pragma once
/**
 * @file planner.hpp
 * @brief Top-level minimum-time planner: enumerates the 16 admissible
 *        candidate trajectory types, solves each family, certifies every
 *        solution and returns the fastest plan with a per-candidate report.
 */

#include <optional>
#include <string>
#include <vector>

#include "dublaser/model.hpp"
#include "dublaser/types.hpp"

namespace dublaser {

/// The 16 admissible candidate types, in canonical (reporting) order.
std::vector<CandidateType> enumerate_candidates();

enum class CandidateStatus { Solved, Infeasible, NoRoot };

struct CandidateOutcome {
  CandidateType candidate;
  CandidateStatus status = CandidateStatus::Infeasible;
  double t_final = 0.0;     // valid when solved
  std::string reason;       // valid when not solved
  std::optional<TrajectoryPlan> plan;     // best plan of this family
  std::optional<PmpCertificate> certificate;
};

struct SolveReport {
  TrajectoryPlan best;
  PmpCertificate best_certificate;
  std::vector<CandidateOutcome> per_candidate;  // exactly 16 entries
  std::optional<double> oracle_time;            // set by the compare path
  std::optional<std::string> oracle_structure;
  std::optional<double> oracle_gap;             // best.t_final - oracle_time
};

struct PlanOptions {
  bool parallel = true;  ///< solve candidate families concurrently
};

/**
 * Plan a minimum-time capture from `start`. Requires the start outside the
 * range circle; a start that already captures short-circuits to a zero-time
 * plan, and a start inside the range circle that does not capture is
 * rejected with Error::UnsupportedInitialCondition. Throws
 * Error::NoPlanFound when every candidate family comes back empty.
 */
SolveReport plan(const SystemParams& params, const State& start,
                 const PlanOptions& options = {});

}  // namespace dublaser
