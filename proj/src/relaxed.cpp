#include "dublaser/relaxed.hpp"

#include <algorithm>
#include <cmath>

namespace dublaser {

namespace {

constexpr double kTolTime = 1e-9;

void set_reason(std::string* reason, const char* why) {
  if (reason) *reason = why;
}

CandidateType cs_candidate(SegKind turn, LaserSense sense) {
  return CandidateType{std::string(1, segment_letter(turn)) + "S", sense};
}

}  // namespace

std::optional<RelaxedSolution> solve_cs(const SystemParams& params, const State& start,
                                        SegKind turn, LaserSense sense,
                                        std::string* reason) {
  params.validate();
  const State s0 = start.normalized();
  const bool left = turn == SegKind::LeftArc;
  const double u = turn_input(turn);
  const double omega = laser_rate(sense, params);

  const Vec2 center = turn_center(s0.pos(), s0.theta, left, params.rho);
  const auto tan = tangent_through_target(center, params.rho, left, /*toward=*/true);
  if (!tan) {
    set_reason(reason, "turn circle contains the target: no tangent line");
    return std::nullopt;
  }
  const double theta_f = tan->theta;
  const double q_dist = tan->point.norm();
  const double s_len = q_dist - params.r;
  if (s_len < -kTolGeom) {
    set_reason(reason, "tangent point already inside the range circle");
    return std::nullopt;
  }

  const double alpha = sweep_angle(s0.theta, theta_f, left);
  const double t1 = params.rho * alpha;
  const double straight = std::max(s_len, 0.0);
  const double travel = t1 + straight;

  // With the laser off, psi tracks theta; the switch-on must leave exactly
  // enough time for the remaining sweep at the full rate.
  const double psi_off_final = s0.psi + u * alpha;
  const double sweep = rotation_toward(psi_off_final, theta_f, omega);
  const double t_on = travel - sweep / params.omega_max;
  if (t_on < -kTolTime) {
    set_reason(reason, "needs t_l=0: laser cannot finish its sweep in time");
    return std::nullopt;
  }

  RelaxedSolution sol;
  sol.theta_f = wrap_two_pi(theta_f);
  sol.final_point = tan->point * (params.r / q_dist);
  sol.T_D = travel;
  sol.first_switch_time = t1;
  sol.t_l_star = std::clamp(t_on, 0.0, travel);
  sol.plan = make_plan(params, s0, cs_candidate(turn, sense),
                       {{turn, t1}, {SegKind::Straight, straight}},
                       LaserSchedule{sense, sol.t_l_star});
  return sol;
}

std::optional<RelaxedSolution> solve_c(const SystemParams& params, const State& start,
                                       SegKind turn, LaserSense sense,
                                       std::string* reason) {
  params.validate();
  const State s0 = start.normalized();
  const bool left = turn == SegKind::LeftArc;
  const double u = turn_input(turn);
  const double omega = laser_rate(sense, params);
  const Vec2 center = turn_center(s0.pos(), s0.theta, left, params.rho);

  // The turn circle must intersect the range disk at all.
  const double center_dist = center.norm();
  if (center_dist - params.rho > params.r + kTolGeom) {
    set_reason(reason, "turn circle never enters the range circle");
    return std::nullopt;
  }

  const auto position_at = [&](double t) {
    const double theta = s0.theta + u * t / params.rho;
    return point_on_turn_circle(center, theta, left, params.rho);
  };
  // Sweep still to do at arc time t, were the laser off the whole way there.
  const auto sweep_needed = [&](double t) {
    const Vec2 p = position_at(t);
    const double aim = kPi + std::atan2(p.y, p.x);
    const double psi_off = s0.psi + u * t / params.rho;
    return rotation_toward(psi_off, aim, omega);
  };
  // Feasible at arc time t: in range, and the sweep fits in the time elapsed.
  const auto feasible = [&](double t) {
    const Vec2 p = position_at(t);
    if (p.norm_sq() - params.r * params.r > kTolGeom) return false;
    if (p.norm_sq() < 1e-24) return false;  // exactly on target: aim undefined
    return sweep_needed(t) <= params.omega_max * t + kTolTime;
  };

  // One extra lap buys omega_max * 2*pi*rho of sweep, so this horizon covers
  // every case that can capture at all on a single circle.
  const double lap = kTwoPi * params.rho;
  const double horizon =
      lap * (1.0 + std::ceil(1.0 / std::min(params.omega_max * params.rho, 1.0)));
  const int steps_per_lap = 4096;
  const double dt = lap / steps_per_lap;

  double t_feas = -1.0;
  double t_prev = 0.0;
  for (double t = dt; t <= horizon + 0.5 * dt; t += dt) {
    if (feasible(t)) {
      t_feas = t;
      break;
    }
    t_prev = t;
  }
  if (t_feas < 0.0) {
    set_reason(reason, "no capturing arc within the loiter horizon");
    return std::nullopt;
  }
  // Shrink to the feasibility boundary inside the bracketing step.
  double lo = t_prev, hi = t_feas;
  for (int i = 0; i < 80; ++i) {
    const double mid = 0.5 * (lo + hi);
    (feasible(mid) ? hi : lo) = mid;
  }
  const double t_f = hi;

  RelaxedSolution sol;
  const Vec2 p_f = position_at(t_f);
  sol.theta_f = wrap_two_pi(s0.theta + u * t_f / params.rho);
  sol.final_point = p_f;
  sol.T_D = t_f;
  sol.first_switch_time = 0.0;
  sol.t_l_star = std::clamp(t_f - sweep_needed(t_f) / params.omega_max, 0.0, t_f);
  sol.plan = make_plan(params, s0,
                       CandidateType{std::string(1, segment_letter(turn)), sense},
                       {{turn, t_f}}, LaserSchedule{sense, sol.t_l_star});
  return sol;
}

std::optional<RelaxedSolution> solve_s(const SystemParams& params, const State& start,
                                       LaserSense sense, std::string* reason) {
  params.validate();
  const State s0 = start.normalized();
  const double dist = s0.pos().norm();
  if (dist <= params.r + kTolGeom) {
    set_reason(reason, "start already within range; no straight run needed");
    return std::nullopt;
  }
  // The straight segment must be collinear with the target and run toward it.
  const double to_target = std::atan2(-s0.y, -s0.x);
  if (angle_dist(to_target, s0.theta) > kTolAngle) {
    set_reason(reason, "heading line does not pass through the target");
    return std::nullopt;
  }

  const double omega = laser_rate(sense, params);
  const double travel = dist - params.r;
  const double sweep = rotation_toward(s0.psi, s0.theta, omega);
  const double t_on = travel - sweep / params.omega_max;
  if (t_on < -kTolTime) {
    set_reason(reason, "laser cannot finish its sweep on the straight run");
    return std::nullopt;
  }

  RelaxedSolution sol;
  sol.theta_f = s0.theta;
  sol.final_point = s0.pos() + travel * heading_dir(s0.theta);
  sol.T_D = travel;
  sol.first_switch_time = 0.0;
  sol.t_l_star = std::clamp(t_on, 0.0, travel);
  sol.plan = make_plan(params, s0, CandidateType{"S", sense},
                       {{SegKind::Straight, travel}}, LaserSchedule{sense, sol.t_l_star});
  return sol;
}

// ---------------------------------------------------------------------------
// Captures inside the range circle.
// ---------------------------------------------------------------------------

namespace {

// Best capture along a straight probe leaving `q` with heading `theta_s` at
// time t_pre, the laser orientation being `psi_off` were it never switched
// on. The laser may have started at any earlier instant, so the reachable
// orientations at time t span psi_off plus a signed sweep of up to
// omega_max * t. Capture minima sit at the in-range window entry, at an
// exact bearing match with no sweep at all, or where the required sweep
// exactly exhausts the elapsed-time budget.
struct ProbeCapture {
  bool found = false;
  double s = 0.0;      // straight length at capture
  double time = 0.0;   // total capture time
  double sweep = 0.0;  // rotation executed by the capture instant
};

// Exact stop point where the bearing to the target equals psi: intersection
// with the ray leaving the target opposite the laser.
std::optional<double> bearing_stop(const Vec2& q, double theta_s, double psi) {
  const Vec2 dir = heading_dir(theta_s);
  const Vec2 laser = heading_dir(psi);
  const double denom = laser.cross(dir);
  if (std::fabs(denom) < 1e-9) return std::nullopt;  // laser along the line axis
  const double s = -laser.cross(q) / denom;
  if (s < 0.0) return std::nullopt;
  const double d = -(q + s * dir).dot(laser);
  if (d <= 1e-12) return std::nullopt;  // pointing away from (or at) the target
  return s;
}

ProbeCapture best_capture_on_probe(const SystemParams& params, const Vec2& q,
                                   double theta_s, double psi_off, double t_pre,
                                   double omega) {
  ProbeCapture best;
  const Vec2 dir = heading_dir(theta_s);
  const double pe = q.dot(dir);
  const double disc = pe * pe - (q.norm_sq() - params.r * params.r);
  if (disc < 0.0) return best;
  const double root = std::sqrt(disc);
  const double s_in = std::max(-pe - root, 0.0);
  const double s_out = -pe + root;
  if (s_out <= s_in) return best;

  const auto rot_at = [&](double s) {
    const Vec2 p = q + s * dir;
    const double aim = kPi + std::atan2(p.y, p.x);
    return rotation_toward(psi_off, aim, omega);
  };
  const auto offer = [&](double s, double rot) {
    const double t = t_pre + s;
    if (rot > params.omega_max * t + 1e-12) return;
    const Vec2 p = q + s * dir;
    if (p.norm_sq() - params.r * params.r > kTolGeom || p.norm_sq() < 1e-24) return;
    if (!best.found || t < best.time) best = ProbeCapture{true, s, t, rot};
  };

  offer(s_in, rot_at(s_in));
  if (auto s_z = bearing_stop(q, theta_s, psi_off))
    if (*s_z >= s_in && *s_z <= s_out) offer(*s_z, 0.0);

  // Sweep-budget crossings: rot(s) = omega_max * (t_pre + s).
  const int n = 24;
  double prev_rot = 0.0, prev_h = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double s = s_in + (s_out - s_in) * i / n;
    const double rot = rot_at(s);
    const double h = rot - params.omega_max * (t_pre + s);
    if (i > 0 && std::fabs(rot - prev_rot) < kPi && (h > 0) != (prev_h > 0)) {
      double lo = s_in + (s_out - s_in) * (i - 1) / n, hi = s;
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double hm = rot_at(mid) - params.omega_max * (t_pre + mid);
        ((hm > 0) == (prev_h > 0) ? lo : hi) = mid;
      }
      offer(hi, rot_at(hi));
    }
    prev_rot = rot;
    prev_h = h;
  }
  return best;
}

struct InteriorPick {
  bool found = false;
  double arc = 0.0;
  ProbeCapture cap;
};

RelaxedSolution materialize_interior(const SystemParams& params, const State& s0,
                                     const CandidateType& cand, SegKind turn,
                                     LaserSense sense, const InteriorPick& pick) {
  const double t1 = params.rho * pick.arc;
  const double t_f = t1 + pick.cap.s;
  const double t_on =
      std::clamp(t_f - pick.cap.sweep / params.omega_max, 0.0, t_f);

  std::vector<std::pair<SegKind, double>> pieces;
  if (turn != SegKind::Straight) pieces.emplace_back(turn, t1);
  pieces.emplace_back(SegKind::Straight, pick.cap.s);

  RelaxedSolution sol;
  sol.T_D = t_f;
  sol.first_switch_time = t1;
  sol.t_l_star = t_on;
  sol.plan = make_plan(params, s0, cand, pieces, LaserSchedule{sense, t_on});
  sol.theta_f = sol.plan.final_state.theta;
  sol.final_point = sol.plan.final_state.pos();
  return sol;
}

}  // namespace

std::optional<RelaxedSolution> solve_cs_interior(const SystemParams& params,
                                                 const State& start, SegKind turn,
                                                 LaserSense sense, std::string* reason) {
  params.validate();
  const State s0 = start.normalized();
  const bool left = turn == SegKind::LeftArc;
  const double u = turn_input(turn);
  const double omega = laser_rate(sense, params);
  const Vec2 center = turn_center(s0.pos(), s0.theta, left, params.rho);

  const auto probe_at = [&](double arc) -> ProbeCapture {
    const double theta = s0.theta + u * arc;
    const Vec2 q = point_on_turn_circle(center, theta, left, params.rho);
    return best_capture_on_probe(params, q, theta, s0.psi + u * arc,
                                 params.rho * arc, omega);
  };

  // Scan the full turn, then refine around the separated local minima.
  const int n_scan = 720;
  struct Seed {
    double arc;
    double time;
  };
  std::vector<Seed> seeds;
  for (int i = 0; i < n_scan; ++i) {
    const double arc = kTwoPi * i / n_scan;
    const ProbeCapture cap = probe_at(arc);
    if (!cap.found) continue;
    bool merged = false;
    for (Seed& s : seeds)
      if (std::fabs(s.arc - arc) < 6.0 * kTwoPi / n_scan) {
        if (cap.time < s.time) s = Seed{arc, cap.time};
        merged = true;
        break;
      }
    if (!merged) seeds.push_back(Seed{arc, cap.time});
  }
  if (seeds.empty()) {
    set_reason(reason, "no interior aim alignment inside the range circle");
    return std::nullopt;
  }
  std::sort(seeds.begin(), seeds.end(),
            [](const Seed& a, const Seed& b) { return a.time < b.time; });
  if (seeds.size() > 4) seeds.resize(4);

  InteriorPick best;
  for (const Seed& seed : seeds) {
    double center_arc = seed.arc;
    double radius = kTwoPi / n_scan;
    double local_arc = seed.arc;
    ProbeCapture local_cap = probe_at(seed.arc);
    for (int round = 0; round < 14; ++round) {
      for (int j = -4; j <= 4; ++j) {
        if (j == 0) continue;
        const double arc = std::clamp(center_arc + radius * j / 4.0, 0.0, kTwoPi);
        const ProbeCapture cap = probe_at(arc);
        if (cap.found && (!local_cap.found || cap.time < local_cap.time)) {
          local_arc = arc;
          local_cap = cap;
        }
      }
      center_arc = local_arc;
      radius *= 0.55;
    }
    if (local_cap.found && (!best.found || local_cap.time < best.cap.time)) {
      best.found = true;
      best.arc = local_arc;
      best.cap = local_cap;
    }
  }
  if (!best.found) {
    set_reason(reason, "no interior aim alignment inside the range circle");
    return std::nullopt;
  }
  return materialize_interior(params, s0, cs_candidate(turn, sense), turn, sense, best);
}

std::optional<RelaxedSolution> solve_s_interior(const SystemParams& params,
                                                const State& start, LaserSense sense,
                                                std::string* reason) {
  params.validate();
  const State s0 = start.normalized();
  if (s0.pos().norm() <= params.r + kTolGeom) {
    set_reason(reason, "start already within range; no straight run needed");
    return std::nullopt;
  }
  const double omega = laser_rate(sense, params);
  const ProbeCapture cap =
      best_capture_on_probe(params, s0.pos(), s0.theta, s0.psi, 0.0, omega);
  if (!cap.found) {
    set_reason(reason, "no interior aim alignment inside the range circle");
    return std::nullopt;
  }
  InteriorPick pick;
  pick.found = true;
  pick.arc = 0.0;
  pick.cap = cap;
  return materialize_interior(params, s0, CandidateType{"S", sense},
                              SegKind::Straight, sense, pick);
}

}  // namespace dublaser
