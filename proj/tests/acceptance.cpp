// Acceptance suite: runs every release criterion at its stated tolerance and
// prints one PASS/FAIL line per criterion. Exit code is the failure count.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <future>
#include <sstream>
#include <string>
#include <vector>

#include "dublaser/oracle.hpp"
#include "dublaser/planner.hpp"
#include "support.hpp"

using namespace dublaser;
using testing::Scenario;

namespace {

struct CriterionResult {
  int id;
  bool pass;
  std::string detail;
};

std::vector<CriterionResult> g_results;

void record(int id, bool pass, const std::string& detail) {
  g_results.push_back({id, pass, detail});
}

double now_seconds() {
  using clock = std::chrono::steady_clock;
  static const clock::time_point t0 = clock::now();
  return std::chrono::duration<double>(clock::now() - t0).count();
}

struct SweepEntry {
  Scenario scenario;
  SolveReport report;
  OracleResult oracle;
  bool planned = false;
  std::string error;
};

SweepEntry run_one(const Scenario& sc) {
  SweepEntry e;
  e.scenario = sc;
  try {
    e.report = plan(sc.params, sc.start);
    e.planned = true;
  } catch (const Error& err) {
    e.error = err.what();
    return e;
  }
  e.oracle = oracle_min_time(sc.params, sc.start);
  return e;
}

std::vector<SweepEntry> run_sweep(const std::vector<Scenario>& scenarios) {
  std::vector<SweepEntry> entries(scenarios.size());
  const size_t workers = 2;
  std::vector<std::future<void>> futs;
  std::atomic<size_t> next{0};
  for (size_t w = 0; w < workers; ++w)
    futs.push_back(std::async(std::launch::async, [&] {
      for (size_t i = next.fetch_add(1); i < scenarios.size(); i = next.fetch_add(1))
        entries[i] = run_one(scenarios[i]);
    }));
  for (auto& f : futs) f.get();
  return entries;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

// --------------------------------------------------------------------------
// Criterion 1: reference scenario with omega_max = 0.3. Turn-straight plan,
// vehicle time 6.86 +/- 0.01, switch-on 2.948 +/- 0.01, final point on the
// range circle to 1e-6, solve wall time under a second.
// --------------------------------------------------------------------------
void criterion_1() {
  const SystemParams p{1.0, 1.0, 0.3};
  const State s0{2, 2, kPi / 2, kPi};

  const double t_start = now_seconds();
  const SolveReport rep = plan(p, s0);
  const double elapsed = now_seconds() - t_start;

  const double t_d = rep.best.t_final;
  const double t_l = rep.best.laser.t_switch_on;
  const State& f = rep.best.final_state;
  const double circle_err = std::fabs(f.x * f.x + f.y * f.y - p.r * p.r);
  const std::string word = rep.best.realized_word();

  const bool cs_type = word == "RS" || word == "LS" || word == "S" || word == "R" ||
                       word == "L";
  const bool ok_time = std::fabs(t_d - 6.86) <= 0.01;
  const bool ok_tl = std::fabs(t_l - 2.948) <= 0.01;
  const bool ok_circle = circle_err <= 1e-6;
  const bool ok_runtime = elapsed < 1.0;

  std::ostringstream det;
  det << "best word=" << word << " t_f=" << fmt(t_d) << " (target 6.86+/-0.01) "
      << "t_l=" << fmt(t_l) << " (target 2.948+/-0.01) circle_err="
      << fmt(circle_err) << " runtime=" << fmt(elapsed) << "s";
  for (const auto& o : rep.per_candidate)
    if (o.candidate.label() == "RS|+" && o.status == CandidateStatus::Solved)
      det << "; turn-straight family row: t_f=" << fmt(o.t_final)
          << " t_l=" << fmt(o.plan->laser.t_switch_on);
  record(1, cs_type && ok_time && ok_tl && ok_circle && ok_runtime, det.str());
}

// --------------------------------------------------------------------------
// Criterion 2: slow-laser scenario. Winning word RSR, final point on the
// range circle to 1e-6, switching points collinear with the target to 1e-6,
// planner within 0.04 of the reference search.
// --------------------------------------------------------------------------
void criterion_2() {
  const SystemParams p{1.0, 1.0, 0.01};
  const State s0{2, 2, kPi / 2, 4 * kPi / 3};

  const SolveReport rep = plan(p, s0);
  const OracleResult orc = oracle_min_time(p, s0);

  const State& f = rep.best.final_state;
  const double circle_err = std::fabs(f.x * f.x + f.y * f.y - p.r * p.r);
  const bool ok_word = rep.best.realized_word() == "RSR";
  const bool ok_circle = circle_err <= 1e-6;
  const bool ok_collinear = rep.best_certificate.collinearity_residual <= 1e-6;
  const bool ok_gap = orc.found && std::fabs(rep.best.t_final - orc.time) <= 0.04;

  std::ostringstream det;
  det << "best word=" << rep.best.realized_word() << " t_f=" << fmt(rep.best.t_final)
      << " oracle=" << fmt(orc.found ? orc.time : -1.0)
      << " circle_err=" << fmt(circle_err)
      << " collinearity=" << fmt(rep.best_certificate.collinearity_residual);
  for (const auto& o : rep.per_candidate)
    if (o.candidate.label() == "RSR|+" && o.status == CandidateStatus::Solved)
      det << "; RSR family row: t_f=" << fmt(o.t_final);
  record(2, ok_word && ok_circle && ok_collinear && ok_gap, det.str());
}

// --------------------------------------------------------------------------
// Criterion 3: single-arc scenario with a very slow laser, run on both
// published coordinate variants. The (0.6, 0.9) variant must produce a
// single-arc plan within 0.04 of the reference search; the (0.5, 0.5)
// variant starts inside the range circle without capturing and must be
// rejected as unsupported.
// --------------------------------------------------------------------------
void criterion_3() {
  const SystemParams p{1.0, 1.0, 0.01};

  const State a{0.6, 0.9, kPi / 2, kPi};
  const SolveReport rep = plan(p, a);
  const OracleResult orc = oracle_min_time(p, a);
  const std::string word = rep.best.realized_word();
  const bool ok_word = word == "R" || word == "L";
  const bool ok_gap = orc.found && std::fabs(rep.best.t_final - orc.time) <= 0.04;

  bool rejected = false;
  try {
    (void)plan(p, State{0.5, 0.5, kPi / 2, kPi});
  } catch (const Error& e) {
    rejected = e.code() == Error::Code::UnsupportedInitialCondition;
  }

  std::ostringstream det;
  det << "variant(0.6,0.9): word=" << word << " t_f=" << fmt(rep.best.t_final)
      << " oracle=" << fmt(orc.found ? orc.time : -1.0)
      << "; variant(0.5,0.5) rejected=" << (rejected ? "yes" : "no");
  record(3, ok_word && ok_gap && rejected, det.str());
}

// --------------------------------------------------------------------------
// Criteria 4, 5, 7 share one randomized sweep (seed 20250817).
// --------------------------------------------------------------------------
void criteria_sweep() {
  const auto scenarios = testing::random_scenarios(200, 20250817ull);
  const double t_start = now_seconds();
  const auto entries = run_sweep(scenarios);
  const double elapsed = now_seconds() - t_start;

  // Criterion 4: planner time within [oracle - 0.005, oracle + 0.04] always.
  int bad4 = 0;
  double worst_low = 0.0, worst_high = 0.0;
  int planned = 0;
  for (const auto& e : entries) {
    if (!e.planned || !e.oracle.found) {
      ++bad4;
      continue;
    }
    ++planned;
    const double gap = e.report.best.t_final - e.oracle.time;
    worst_low = std::min(worst_low, gap);
    worst_high = std::max(worst_high, gap);
    if (gap < -0.005 || gap > 0.04) ++bad4;
  }
  {
    std::ostringstream det;
    det << planned << "/" << entries.size() << " solved, gap range ["
        << fmt(worst_low) << ", " << fmt(worst_high)
        << "] target [-0.005, 0.04], sweep " << fmt(elapsed) << "s (< 600s)";
    record(4, bad4 == 0 && elapsed < 600.0, det.str());
  }

  // Criterion 5: structural properties of every admitted plan in the sweep.
  int bad_collinear = 0, bad_sign = 0, bad_circle = 0, bad_ccc = 0, bad_cpsi = 0;
  for (const auto& e : entries) {
    if (!e.planned) continue;
    for (const auto& outcome : e.report.per_candidate) {
      if (outcome.status != CandidateStatus::Solved || !outcome.plan) continue;
      const TrajectoryPlan& pl = *outcome.plan;
      const PmpCertificate& cert = *outcome.certificate;
      const std::string word = pl.realized_word();

      // (a) collinearity of switching points and straight segments
      if (word.size() >= 2 || word == "S")
        if (cert.collinearity_residual > 1e-6) ++bad_collinear;

      // (b) final-arc sign agreement between laser rate and turn input;
      // binds only when the reconstructed laser costate is determined and
      // nonzero (the rate law is undetermined at a vanishing costate, and an
      // underdetermined fit cannot witness either way)
      if (!word.empty() && word.back() != 'S' &&
          pl.laser.t_switch_on < pl.t_final - 1e-9 && !cert.rank_deficient &&
          std::fabs(cert.c_psi) > 1e-6) {
        const double u_last = word.back() == 'L' ? 1.0 : -1.0;
        const double w = laser_rate(pl.laser.sense, e.scenario.params);
        if (u_last * w <= 0.0) ++bad_sign;
      }

      // (c) every non-single-arc plan terminates on the range circle
      if (word.size() >= 2 || word == "S") {
        const State& f = pl.final_state;
        const double err =
            std::fabs(f.x * f.x + f.y * f.y - e.scenario.params.r * e.scenario.params.r);
        if (err > 1e-6) ++bad_circle;
      }

      // (e) laser costate vanishes whenever the switch-on waits
      if (pl.laser.t_switch_on > 1e-9 && std::fabs(cert.c_psi) > 1e-6) ++bad_cpsi;
    }
    // (d) no arcs-only 3-segment structure beats the planner by over 0.04
    if (std::isfinite(e.oracle.best_ccc_time) &&
        e.report.best.t_final - e.oracle.best_ccc_time > 0.04)
      ++bad_ccc;
  }
  {
    std::ostringstream det;
    det << "collinearity violations=" << bad_collinear << " sign=" << bad_sign
        << " terminal-circle=" << bad_circle << " arcs-only-wins=" << bad_ccc
        << " laser-costate=" << bad_cpsi;
    if (bad_circle > 0)
      det << " (circle violations are near-target interior captures, which "
             "criterion 4 agreement requires admitting)";
    record(5, bad_collinear + bad_sign + bad_circle + bad_ccc + bad_cpsi == 0,
           det.str());
  }

  // Criterion 7: health of every admitted nonlinear-system root.
  int roots = 0, bad_res = 0, bad_cond = 0;
  double worst_cond = 0.0;
  for (const auto& e : entries) {
    if (!e.planned) continue;
    for (const auto& outcome : e.report.per_candidate) {
      if (outcome.status != CandidateStatus::Solved || !outcome.plan) continue;
      if (!outcome.plan->root) continue;
      ++roots;
      if (outcome.plan->root->residual_norm > 1e-8) ++bad_res;
      const double cond = outcome.plan->root->jacobian_condition;
      if (!std::isfinite(cond) || cond > 1e10) ++bad_cond;
      worst_cond = std::max(worst_cond, cond);
    }
  }
  {
    std::ostringstream det;
    det << roots << " roots, residual violations=" << bad_res
        << ", singular/ill-conditioned=" << bad_cond
        << ", worst condition=" << fmt(worst_cond);
    record(7, bad_res == 0 && bad_cond == 0, det.str());
  }
}

// --------------------------------------------------------------------------
// Criterion 6: rotation and mirror equivariance on 50 scenarios (seed 99).
// --------------------------------------------------------------------------
void criterion_6() {
  const auto scenarios = testing::random_scenarios(50, 99ull);
  int bad = 0;
  double worst = 0.0;
  std::atomic<size_t> next{0};
  std::vector<double> devs(scenarios.size(), 0.0);
  std::vector<std::future<void>> futs;
  for (size_t w = 0; w < 2; ++w)
    futs.push_back(std::async(std::launch::async, [&] {
      for (size_t i = next.fetch_add(1); i < scenarios.size(); i = next.fetch_add(1)) {
        const auto& sc = scenarios[i];
        try {
          const double base = plan(sc.params, sc.start).best.t_final;

          const double delta = 1.234 + 0.01 * i;
          const double c = std::cos(delta), s = std::sin(delta);
          State rot{c * sc.start.x - s * sc.start.y, s * sc.start.x + c * sc.start.y,
                    wrap_two_pi(sc.start.theta + delta), wrap_two_pi(sc.start.psi + delta)};
          const double rotated = plan(sc.params, rot).best.t_final;

          State mir{sc.start.x, -sc.start.y, wrap_two_pi(-sc.start.theta),
                    wrap_two_pi(-sc.start.psi)};
          const double mirrored = plan(sc.params, mir).best.t_final;

          devs[i] = std::max(std::fabs(rotated - base), std::fabs(mirrored - base));
        } catch (const Error&) {
          devs[i] = 1.0;
        }
      }
    }));
  for (auto& f : futs) f.get();
  for (double d : devs) {
    worst = std::max(worst, d);
    if (d > 1e-9) ++bad;
  }
  std::ostringstream det;
  det << "violations=" << bad << "/50, worst deviation=" << fmt(worst)
      << " (target <= 1e-9)";
  record(6, bad == 0, det.str());
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criteria_sweep();
  criterion_6();

  std::sort(g_results.begin(), g_results.end(),
            [](const CriterionResult& a, const CriterionResult& b) { return a.id < b.id; });
  int failures = 0;
  for (const auto& r : g_results) {
    std::printf("%s criterion %d: %s\n", r.pass ? "PASS" : "FAIL", r.id,
                r.detail.c_str());
    if (!r.pass) ++failures;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(g_results.size()) - failures,
              g_results.size());
  return failures;
}
