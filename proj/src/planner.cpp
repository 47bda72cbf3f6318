#include "dublaser/planner.hpp"

#include <algorithm>
#include <future>

#include "dublaser/coupled.hpp"
#include "dublaser/relaxed.hpp"

namespace dublaser {

std::vector<CandidateType> enumerate_candidates() {
  static const char* labels[16] = {"RS|+", "RS|-", "LS|+", "LS|-", "S|+",  "S|-",
                                   "R|+",  "L|-",  "RSR|+", "RSL|-", "LSL|-",
                                   "LSR|+", "RL|-", "LR|+", "SR|+", "SL|-"};
  std::vector<CandidateType> out;
  out.reserve(16);
  for (const char* l : labels) out.push_back(*CandidateType::parse(l));
  return out;
}

namespace {

// Certification gates for admitting a solved plan into the report.
constexpr double kAdmitH = 1e-6;
constexpr double kAdmitCollinear = 1e-6;

CandidateOutcome solve_candidate(const SystemParams& params, const State& start,
                                 const CandidateType& cand) {
  CandidateOutcome out;
  out.candidate = cand;
  std::string reason;
  std::vector<TrajectoryPlan> plans;

  const std::string& w = cand.pose_word;
  if (w == "RS" || w == "LS") {
    const SegKind turn = w[0] == 'R' ? SegKind::RightArc : SegKind::LeftArc;
    if (auto sol = solve_cs(params, start, turn, cand.laser_sense, &reason))
      plans.push_back(sol->plan);
    if (auto sol = solve_cs_interior(params, start, turn, cand.laser_sense, &reason))
      plans.push_back(sol->plan);
  } else if (w == "S") {
    if (auto sol = solve_s(params, start, cand.laser_sense, &reason))
      plans.push_back(sol->plan);
    if (auto sol = solve_s_interior(params, start, cand.laser_sense, &reason))
      plans.push_back(sol->plan);
  } else if (w == "R" || w == "L") {
    // The laser sense pairing only binds when the laser costate is nonzero;
    // with a positive switch-on time that costate vanishes and the sweep may
    // run either way, so the single-arc family tries both directions.
    const SegKind turn = w[0] == 'R' ? SegKind::RightArc : SegKind::LeftArc;
    for (LaserSense sense : {cand.laser_sense, cand.laser_sense == LaserSense::Clockwise
                                                   ? LaserSense::CounterClockwise
                                                   : LaserSense::Clockwise})
      if (auto sol = solve_c(params, start, turn, sense, &reason))
        plans.push_back(sol->plan);
  } else {
    plans = solve_family(params, start, cand, &reason);
  }
  // Plans own the family label; the realized word and actual laser sense
  // live in the segments and schedule.
  for (TrajectoryPlan& p : plans) p.candidate = cand;
  std::sort(plans.begin(), plans.end(),
            [](const TrajectoryPlan& a, const TrajectoryPlan& b) {
              return a.t_final < b.t_final;
            });

  if (plans.empty()) {
    out.status = reason == "no admissible root" ? CandidateStatus::NoRoot
                                                : CandidateStatus::Infeasible;
    out.reason = reason.empty() ? "infeasible" : reason;
    return out;
  }

  // Re-simulate, capture-check and certify before admission; keep the
  // fastest plan of the family that passes.
  for (const TrajectoryPlan& p : plans) {
    const State fin = propagate(params, start, p);
    CaptureResult cap;
    try {
      cap = capture_check(params, fin);
    } catch (const Error&) {
      continue;
    }
    if (!cap.captured) continue;
    const PmpCertificate cert = pmp_verify(params, start, p);
    if (cert.hamiltonian_residual > kAdmitH ||
        cert.collinearity_residual > kAdmitCollinear)
      continue;
    out.status = CandidateStatus::Solved;
    out.t_final = p.t_final;
    out.plan = p;
    out.certificate = cert;
    return out;
  }
  out.status = CandidateStatus::Infeasible;
  out.reason = "all roots failed certification";
  return out;
}

}  // namespace

SolveReport plan(const SystemParams& params, const State& start,
                 const PlanOptions& options) {
  params.validate();
  const State s0 = start.normalized();

  SolveReport report;
  const std::vector<CandidateType> candidates = enumerate_candidates();

  // Starts inside the range circle are outside the problem class unless they
  // already capture, in which case the zero-time plan is optimal.
  const CaptureResult initial = capture_check(params, s0);
  if (initial.captured) {
    TrajectoryPlan zero;
    zero.candidate = *CandidateType::parse("S|+");
    zero.laser = LaserSchedule{LaserSense::Clockwise, 0.0};
    zero.t_final = 0.0;
    zero.final_state = s0;
    report.best = zero;
    report.best_certificate = pmp_verify(params, s0, zero);
    for (const CandidateType& c : candidates) {
      CandidateOutcome o;
      o.candidate = c;
      o.status = CandidateStatus::Infeasible;
      o.reason = "initial state already captures";
      report.per_candidate.push_back(std::move(o));
    }
    return report;
  }
  if (initial.range_slack <= kTolGeom) {
    throw Error(Error::Code::UnsupportedInitialCondition,
                "start inside the range circle without capture is not supported");
  }

  report.per_candidate.resize(candidates.size());
  if (options.parallel) {
    std::vector<std::future<CandidateOutcome>> futures;
    futures.reserve(candidates.size());
    for (const CandidateType& c : candidates)
      futures.push_back(std::async(std::launch::async,
                                   [&, c] { return solve_candidate(params, s0, c); }));
    for (size_t i = 0; i < futures.size(); ++i) report.per_candidate[i] = futures[i].get();
  } else {
    for (size_t i = 0; i < candidates.size(); ++i)
      report.per_candidate[i] = solve_candidate(params, s0, candidates[i]);
  }

  const CandidateOutcome* best = nullptr;
  for (const CandidateOutcome& o : report.per_candidate) {
    if (o.status != CandidateStatus::Solved) continue;
    if (!best || o.t_final < best->t_final - 1e-12 ||
        (std::fabs(o.t_final - best->t_final) <= 1e-12 &&
         o.candidate < best->candidate))
      best = &o;
  }
  if (!best)
    throw Error(Error::Code::NoPlanFound,
                "no candidate family produced an admissible plan");

  report.best = *best->plan;
  report.best_certificate = *best->certificate;
  return report;
}

}  // namespace dublaser
