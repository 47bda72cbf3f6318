#include "dublaser/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dublaser {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct PoseEnd {
  Vec2 p;
  double theta;   // heading
  double dtheta;  // accumulated signed heading change
};

PoseEnd advance_word(const SystemParams& params, const PoseEnd& from, SegKind kind,
                     double dur) {
  PoseEnd out = from;
  if (kind == SegKind::Straight) {
    out.p = from.p + dur * heading_dir(from.theta);
    return out;
  }
  const bool left = kind == SegKind::LeftArc;
  const double dth = turn_input(kind) * dur / params.rho;
  const Vec2 c = turn_center(from.p, from.theta, left, params.rho);
  out.theta = from.theta + dth;
  out.dtheta = from.dtheta + dth;
  out.p = point_on_turn_circle(c, out.theta, left, params.rho);
  return out;
}

struct Window {
  double a, b;
};

// In-range duration windows of one segment starting from `from`, within
// [0, d_max]. Arc windows repeat every lap; `laps` reports that period
// (0 for straights and degenerate cases).
std::vector<Window> in_range_windows(const SystemParams& params, const PoseEnd& from,
                                     SegKind kind, double d_max, double* laps) {
  std::vector<Window> win;
  *laps = 0.0;
  const double r_sq = params.r * params.r;

  if (kind == SegKind::Straight) {
    const Vec2 e = heading_dir(from.theta);
    const double pe = from.p.dot(e);
    const double disc = pe * pe - (from.p.norm_sq() - r_sq);
    if (disc < 0.0) return win;
    const double root = std::sqrt(disc);
    const double d1 = -pe - root, d2 = -pe + root;
    if (d2 <= 0.0) return win;
    win.push_back({std::max(d1, 0.0), std::min(d2, d_max)});
    if (win.back().a >= win.back().b) win.clear();
    return win;
  }

  const bool left = kind == SegKind::LeftArc;
  const Vec2 center = turn_center(from.p, from.theta, left, params.rho);
  const double lap = kTwoPi * params.rho;
  const double oc = center.norm();
  if (2.0 * params.rho * oc < 1e-12) {
    // Turning about the target itself: constant distance from it.
    if (params.rho * params.rho + oc * oc <= r_sq + 1e-12)
      win.push_back({0.0, d_max});
    return win;
  }
  const double m = (r_sq - oc * oc - params.rho * params.rho) / (2.0 * params.rho * oc);
  if (m >= 1.0) {
    win.push_back({0.0, d_max});
    return win;
  }
  if (m <= -1.0) return win;

  // In range while the position angle about the turn center stays at least
  // `ca` away from the direction of the target-to-center line.
  const double ca = std::acos(m);
  const double chi0 = polar_angle(from.p - center);
  const double phi0 = polar_angle(center);
  const double rel0 = left ? wrap_two_pi(chi0 - phi0) : wrap_two_pi(phi0 - chi0);
  *laps = lap;

  const double width = params.rho * (kTwoPi - 2.0 * ca);
  if (rel0 >= ca && rel0 <= kTwoPi - ca)  // already inside a window
    win.push_back({0.0, params.rho * (kTwoPi - ca - rel0)});
  const double d_in = params.rho * wrap_two_pi(ca - rel0);
  if (d_in <= d_max) win.push_back({d_in, std::min(d_in + width, d_max)});
  return win;
}

// Exact minimum capture time over the last segment of a word, given the
// pose state where that segment starts. Capture needs the position in range
// and the remaining laser sweep to fit in the elapsed time; the candidate
// minima are window entries, sweep-budget crossings and exact zero-sweep
// alignments, the latter two found by sign-scan plus bisection.
struct LastSegmentSolution {
  bool found = false;
  double d_last = 0.0;   // includes any full extra laps
  double time = 0.0;     // total capture time, padding included
  double pad = 0.0;      // full-lap padding attributed to an earlier arc
  double sweep = 0.0;    // rotation still required at the capture point
};

struct LastAxisProblem {
  const SystemParams& params;
  double psi0;
  PoseEnd from;      // state entering the last segment
  double t_pre;      // elapsed time before it
  SegKind kind;
  double omega;      // signed laser rate
  bool word_has_arc; // padding laps available somewhere in the word
  double horizon;
};

LastSegmentSolution solve_last_segment(const LastAxisProblem& pr) {
  LastSegmentSolution best;
  const SystemParams& params = pr.params;
  const double lap = kTwoPi * params.rho;

  const auto state_at = [&](double d) { return advance_word(params, pr.from, pr.kind, d); };
  const auto sweep_at = [&](double d, const PoseEnd& s) {
    const double aim = kPi + std::atan2(s.p.y, s.p.x);
    return rotation_toward(pr.psi0 + s.dtheta, aim, pr.omega);
  };

  auto offer = [&](double d, double pad_time) {
    const PoseEnd s = state_at(d);
    if (s.p.norm_sq() - params.r * params.r > 1e-9) return;
    if (s.p.norm_sq() < 1e-28) return;  // on the target: bearing undefined
    const double rot = sweep_at(d, s);
    const double t = pr.t_pre + d + pad_time;
    if (rot > params.omega_max * t + 1e-12) return;
    if (t > pr.horizon) return;
    if (!best.found || t < best.time) {
      best.found = true;
      best.time = t;
      best.d_last = d;
      best.pad = pad_time;
      best.sweep = rot;
    }
  };

  double lap_period = 0.0;
  const double d_cap = pr.kind == SegKind::Straight
                           ? 4.0 * (pr.from.p.norm() + params.r + params.rho)
                           : lap;
  std::vector<Window> windows = in_range_windows(params, pr.from, pr.kind, d_cap,
                                                 &lap_period);
  if (windows.empty()) return best;

  const int reps =
      lap_period > 0.0
          ? 2 + static_cast<int>(std::ceil(kTwoPi / (params.omega_max * lap)))
          : 1;

  for (int rep = 0; rep < reps; ++rep) {
    const double shift = rep * lap_period;
    bool any_reachable = false;
    for (const Window& w0 : windows) {
      const Window w{w0.a + shift, w0.b + shift};
      if (best.found && pr.t_pre + w.a >= best.time) continue;
      any_reachable = true;

      // Window entry, padded with full laps elsewhere in the word if needed.
      {
        const PoseEnd s = state_at(w.a);
        const double rot = sweep_at(w.a, s);
        const double t = pr.t_pre + w.a;
        if (rot <= params.omega_max * t + 1e-12)
          offer(w.a, 0.0);
        else if (pr.word_has_arc) {
          const double k = std::ceil((rot / params.omega_max - t) / lap);
          offer(w.a, k * lap);
        }
      }

      // Scan for sweep-budget crossings and zero-sweep alignments.
      const int n = 48;
      double prev_h = 0.0, prev_z = 0.0, prev_rot = 0.0;
      for (int i = 0; i <= n; ++i) {
        const double d = w.a + (w.b - w.a) * i / n;
        const PoseEnd s = state_at(d);
        const double rot = sweep_at(d, s);
        const double aim = kPi + std::atan2(s.p.y, s.p.x);
        const double h = rot - params.omega_max * (pr.t_pre + d);
        const double z = wrap_pi(aim - (pr.psi0 + s.dtheta));
        if (i > 0) {
          const bool continuous = std::fabs(rot - prev_rot) < kPi;
          const double d_prev = w.a + (w.b - w.a) * (i - 1) / n;
          if (continuous && (h > 0) != (prev_h > 0)) {
            double lo = d_prev, hi = d;
            for (int it = 0; it < 60; ++it) {
              const double mid = 0.5 * (lo + hi);
              const PoseEnd sm = state_at(mid);
              const double hm =
                  sweep_at(mid, sm) - params.omega_max * (pr.t_pre + mid);
              ((hm > 0) == (prev_h > 0) ? lo : hi) = mid;
            }
            offer(hi, 0.0);
          }
          if (std::fabs(z - prev_z) < kPi && (z > 0) != (prev_z > 0)) {
            double lo = d_prev, hi = d;
            for (int it = 0; it < 60; ++it) {
              const double mid = 0.5 * (lo + hi);
              const PoseEnd sm = state_at(mid);
              const double zm =
                  wrap_pi(kPi + std::atan2(sm.p.y, sm.p.x) - (pr.psi0 + sm.dtheta));
              ((zm > 0) == (prev_z > 0) ? lo : hi) = mid;
            }
            offer(0.5 * (lo + hi), 0.0);
            offer(hi, 0.0);
          }
        }
        prev_h = h;
        prev_z = z;
        prev_rot = rot;
      }
    }
    if (!any_reachable) break;
  }
  return best;
}

struct StructureBest {
  bool found = false;
  double time = kInf;
  std::array<double, 3> durations{};  // last entry includes window laps
  double pad = 0.0;
  double sweep = 0.0;
};

}  // namespace

void OracleConfig::validate() const {
  if (!(duration_grid_resolution > 0.0))
    throw Error(Error::Code::InvalidParams, "oracle: grid resolution must be > 0");
  if (max_segments < 1 || max_segments > 3)
    throw Error(Error::Code::InvalidParams, "oracle: max_segments must be 1..3");
  if (refine_iterations < 0)
    throw Error(Error::Code::InvalidParams, "oracle: refine_iterations must be >= 0");
}

TrajectoryPlan OracleResult::to_plan(const SystemParams& params,
                                     const State& start) const {
  std::vector<std::pair<SegKind, double>> pieces;
  for (size_t i = 0; i < word.size(); ++i)
    pieces.emplace_back(*segment_from_letter(word[i]), durations[i]);
  CandidateType label{word, sense};  // may be outside the admissible table;
                                     // only used for re-simulation
  return make_plan(params, start, label, pieces, LaserSchedule{sense, t_switch_on});
}

OracleResult oracle_min_time(const SystemParams& params, const State& start,
                             const OracleConfig& cfg) {
  params.validate();
  cfg.validate();
  const State s0 = start.normalized();

  const double lap = kTwoPi * params.rho;
  const double horizon =
      lap + s0.pos().norm() +
      2.0 * lap / std::min(1.0, params.omega_max * params.rho);
  const double s_max = s0.pos().norm() + params.r + 4.0 * params.rho;

  std::vector<std::string> words;
  const char letters[3] = {'L', 'R', 'S'};
  for (char a : letters) {
    words.push_back(std::string(1, a));
    if (cfg.max_segments < 2) continue;
    for (char b : letters) {
      if (b == a) continue;
      words.push_back({a, b});
      if (cfg.max_segments < 3) continue;
      for (char c : letters) {
        if (c == b) continue;
        words.push_back({a, b, c});
      }
    }
  }

  OracleResult best;
  best.time = kInf;
  best.best_ccc_time = kInf;

  for (const std::string& word : words) {
    const size_t n = word.size();
    std::vector<SegKind> kinds;
    for (char c : word) kinds.push_back(*segment_from_letter(c));
    const bool has_arc = word.find_first_of("LR") != std::string::npos;

    for (LaserSense sense : {LaserSense::Clockwise, LaserSense::CounterClockwise}) {
      const double omega = laser_rate(sense, params);
      StructureBest sb;

      const auto solve_tail = [&](const PoseEnd& pre, double t_pre) {
        return solve_last_segment(LastAxisProblem{params, s0.psi, pre, t_pre,
                                                  kinds[n - 1], omega, has_arc,
                                                  horizon});
      };
      // Prefix evaluation with an exact tail solve; records into `target`.
      const auto try_prefix = [&](double d1, double d2, StructureBest& target) {
        PoseEnd pre{s0.pos(), s0.theta, 0.0};
        double t_pre = 0.0;
        if (n >= 2) {
          pre = advance_word(params, pre, kinds[0], d1);
          t_pre += d1;
        }
        if (n >= 3) {
          pre = advance_word(params, pre, kinds[1], d2);
          t_pre += d2;
        }
        const LastSegmentSolution tail = solve_tail(pre, t_pre);
        if (tail.found && (!target.found || tail.time < target.time)) {
          target.found = true;
          target.time = tail.time;
          target.durations = {n >= 2 ? d1 : tail.d_last, 0.0, 0.0};
          if (n == 2) target.durations[1] = tail.d_last;
          if (n == 3) {
            target.durations[1] = d2;
            target.durations[2] = tail.d_last;
          }
          target.pad = tail.pad;
          target.sweep = tail.sweep;
          return true;
        }
        return false;
      };

      // Outer grids over the prefix durations; the tail is solved exactly.
      if (n == 1) {
        try_prefix(0.0, 0.0, sb);
      } else {
        const auto axis_span = [&](SegKind k) {
          return k == SegKind::Straight ? s_max : lap;
        };
        const double span1 = axis_span(kinds[0]);
        const double span2 = n == 3 ? axis_span(kinds[1]) : 0.0;

        // Collect well-separated seeds during the coarse scan.
        struct Seed {
          double d1, d2, time;
        };
        std::vector<Seed> seeds;
        const double sep1 = span1 / 16.0, sep2 = std::max(span2 / 16.0, 1.0);
        auto scan_cell = [&](double d1, double d2) {
          StructureBest cell;
          try_prefix(d1, d2, cell);
          if (!cell.found) return;
          if (cell.time < sb.time || !sb.found) sb = cell;
          for (Seed& s : seeds)
            if (std::fabs(s.d1 - d1) <= sep1 && std::fabs(s.d2 - d2) <= sep2) {
              if (cell.time < s.time) s = Seed{d1, d2, cell.time};
              return;
            }
          seeds.push_back(Seed{d1, d2, cell.time});
        };

        if (n == 2) {
          const int n1 = std::max(
              64, static_cast<int>(span1 / std::max(cfg.duration_grid_resolution, 1e-4)));
          for (int i = 0; i <= n1; ++i) scan_cell(span1 * i / n1, 0.0);
        } else {
          const int n1 = kinds[0] == SegKind::Straight ? 96 : 72;
          const int n2 = kinds[1] == SegKind::Straight ? 96 : 72;
          for (int i = 0; i <= n1; ++i)
            for (int j = 0; j <= n2; ++j)
              scan_cell(span1 * i / n1, span2 * j / n2);
        }

        // Refinement from the best seeds. One prefix coordinate gets a
        // pattern line search; two get a Nelder-Mead simplex, which tracks
        // the narrow curved valleys these surfaces develop.
        std::sort(seeds.begin(), seeds.end(),
                  [](const Seed& a, const Seed& b) { return a.time < b.time; });
        if (seeds.size() > 6) seeds.resize(6);
        for (const Seed& seed : seeds) {
          StructureBest local;
          try_prefix(seed.d1, seed.d2, local);
          if (!local.found) continue;

          if (n == 2) {
            double step = span1 / 64.0;
            int budget = 300 * cfg.refine_iterations / 30;
            while (budget > 0 && step > 1e-7 * span1) {
              const double before = local.time;
              const double c1 = local.durations[0];
              --budget;
              if (try_prefix(std::max(0.0, c1 - step), 0.0, local)) {
                while (budget-- > 0 &&
                       try_prefix(std::max(0.0, local.durations[0] - step), 0.0, local)) {
                }
              }
              --budget;
              if (try_prefix(c1 + step, 0.0, local)) {
                while (budget-- > 0 &&
                       try_prefix(local.durations[0] + step, 0.0, local)) {
                }
              }
              if (local.time >= before - 1e-13) step *= 0.5;
            }
          } else {
            // Nelder-Mead on (d1, d2) with the exact tail inside.
            struct Vertex {
              double d1, d2, f;
            };
            auto feval = [&](double d1, double d2) {
              d1 = std::max(d1, 0.0);
              d2 = std::max(d2, 0.0);
              StructureBest probe;
              try_prefix(d1, d2, probe);
              if (probe.found && (!local.found || probe.time < local.time)) local = probe;
              return probe.found ? probe.time : 1e30;
            };
            const double h1 = span1 / 48.0, h2 = span2 / 48.0;
            Vertex v[3] = {{seed.d1, seed.d2, feval(seed.d1, seed.d2)},
                           {seed.d1 + h1, seed.d2, feval(seed.d1 + h1, seed.d2)},
                           {seed.d1, seed.d2 + h2, feval(seed.d1, seed.d2 + h2)}};
            const int iters = 10 * cfg.refine_iterations;
            for (int it = 0; it < iters; ++it) {
              std::sort(v, v + 3, [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
              if (std::fabs(v[0].d1 - v[2].d1) + std::fabs(v[0].d2 - v[2].d2) < 1e-9)
                break;
              const double cx = 0.5 * (v[0].d1 + v[1].d1);
              const double cy = 0.5 * (v[0].d2 + v[1].d2);
              const double rx = cx + (cx - v[2].d1), ry = cy + (cy - v[2].d2);
              const double fr = feval(rx, ry);
              if (fr < v[0].f) {
                const double ex = cx + 2.0 * (cx - v[2].d1);
                const double ey = cy + 2.0 * (cy - v[2].d2);
                const double fe = feval(ex, ey);
                v[2] = fe < fr ? Vertex{ex, ey, fe} : Vertex{rx, ry, fr};
              } else if (fr < v[1].f) {
                v[2] = Vertex{rx, ry, fr};
              } else {
                const double kx = cx + 0.5 * (v[2].d1 - cx);
                const double ky = cy + 0.5 * (v[2].d2 - cy);
                const double fk = feval(kx, ky);
                if (fk < v[2].f) {
                  v[2] = Vertex{kx, ky, fk};
                } else {
                  for (int m = 1; m < 3; ++m) {
                    v[m].d1 = v[0].d1 + 0.5 * (v[m].d1 - v[0].d1);
                    v[m].d2 = v[0].d2 + 0.5 * (v[m].d2 - v[0].d2);
                    v[m].f = feval(v[m].d1, v[m].d2);
                  }
                }
              }
            }
          }
          if (local.found && (!sb.found || local.time < sb.time)) sb = local;
        }
      }

      if (!sb.found) continue;
      if (n == 3 && word.find('S') == std::string::npos)
        best.best_ccc_time = std::min(best.best_ccc_time, sb.time);
      if (sb.time < best.time) {
        best.found = true;
        best.time = sb.time;
        best.word = word;
        best.sense = sense;
        best.durations.assign(sb.durations.begin(), sb.durations.begin() + n);
        if (sb.pad > 0.0) {
          for (size_t i = 0; i < n; ++i)
            if (kinds[i] != SegKind::Straight) {
              best.durations[i] += sb.pad;
              break;
            }
        }
        best.t_switch_on = std::max(0.0, best.time - sb.sweep / params.omega_max);
      }
    }
  }
  return best;
}

}  // namespace dublaser
