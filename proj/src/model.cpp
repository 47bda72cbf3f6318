#include "dublaser/model.hpp"

#include <algorithm>
#include <cmath>

namespace dublaser {

namespace {

constexpr double kDropSegment = 1e-9;  // canonical plans drop shorter pieces
constexpr double kTimeEps = 1e-12;

// Pose-only advance; psi handled by callers that know the laser overlap.
State advance_pose(const SystemParams& p, const State& s, SegKind kind, double dur) {
  State out = s;
  if (kind == SegKind::Straight) {
    out.x += dur * std::cos(s.theta);
    out.y += dur * std::sin(s.theta);
    return out;
  }
  const bool left = kind == SegKind::LeftArc;
  const double dtheta = turn_input(kind) * dur / p.rho;
  const Vec2 c = turn_center(s.pos(), s.theta, left, p.rho);
  const double theta1 = s.theta + dtheta;
  const Vec2 q = point_on_turn_circle(c, theta1, left, p.rho);
  out.x = q.x;
  out.y = q.y;
  out.theta = theta1;
  return out;
}

// Time the laser is on within [t0, t0 + dur] for a given switch-on time.
double active_time(double t0, double dur, double t_on) {
  return std::max(0.0, t0 + dur - std::max(t0, t_on));
}

}  // namespace

State advance(const SystemParams& params, const State& s, SegKind kind, double dur,
              double omega) {
  State out = advance_pose(params, s, kind, dur);
  const double dtheta = turn_input(kind) * dur / params.rho;
  out.psi = s.psi + dtheta + omega * dur;
  return out.normalized();
}

TrajectoryPlan make_plan(const SystemParams& params, const State& start,
                         const CandidateType& candidate,
                         const std::vector<std::pair<SegKind, double>>& pieces,
                         const LaserSchedule& laser) {
  TrajectoryPlan plan;
  plan.candidate = candidate;
  plan.laser = laser;

  const double rate = laser_rate(laser.sense, params);
  State cur = start.normalized();
  double t = 0.0;
  for (const auto& [kind, dur] : pieces) {
    if (dur <= kDropSegment) continue;
    plan.segments.push_back(PoseSegment{kind, dur, cur});
    State next = advance_pose(params, cur, kind, dur);
    next.psi = cur.psi + turn_input(kind) * dur / params.rho +
               rate * active_time(t, dur, laser.t_switch_on);
    cur = next.normalized();
    t += dur;
  }
  plan.t_final = t;
  plan.final_state = cur;
  plan.laser.t_switch_on = std::clamp(laser.t_switch_on, 0.0, plan.t_final);
  return plan;
}

State propagate(const SystemParams& params, const State& start,
                const TrajectoryPlan& plan) {
  const double rate = laser_rate(plan.laser.sense, params);
  State cur = start.normalized();
  double t = 0.0;
  for (const PoseSegment& seg : plan.segments) {
    State next = advance_pose(params, cur, seg.kind, seg.duration);
    next.psi = cur.psi + turn_input(seg.kind) * seg.duration / params.rho +
               rate * active_time(t, seg.duration, plan.laser.t_switch_on);
    cur = next.normalized();
    t += seg.duration;
  }
  return cur;
}

std::vector<TimedState> simulate(const SystemParams& params, const State& start,
                                 const TrajectoryPlan& plan, double dt) {
  params.validate();
  if (!(dt > 0.0)) throw Error(Error::Code::InvalidParams, "simulate: dt must be > 0");

  // Consistency of the recorded per-segment start states.
  State cur = start.normalized();
  double t0 = 0.0;
  std::vector<double> seg_start_times;
  const double rate = laser_rate(plan.laser.sense, params);
  for (const PoseSegment& seg : plan.segments) {
    const State rec = seg.start_state.normalized();
    if (std::hypot(rec.x - cur.x, rec.y - cur.y) > 1e2 * kTolGeom ||
        angle_dist(rec.theta, cur.theta) > 1e2 * kTolGeom ||
        angle_dist(rec.psi, cur.psi) > 1e2 * kTolGeom) {
      throw Error(Error::Code::InconsistentPlan,
                  "simulate: segment start state disagrees with propagated state");
    }
    seg_start_times.push_back(t0);
    State next = advance_pose(params, cur, seg.kind, seg.duration);
    next.psi = cur.psi + turn_input(seg.kind) * seg.duration / params.rho +
               rate * active_time(t0, seg.duration, plan.laser.t_switch_on);
    cur = next.normalized();
    t0 += seg.duration;
  }
  const double t_f = t0;

  std::vector<double> times;
  for (double t = 0.0; t < t_f + 0.5 * dt; t += dt) times.push_back(std::min(t, t_f));
  for (double b : seg_start_times) times.push_back(b);
  times.push_back(t_f);
  if (plan.laser.t_switch_on > 0.0 && plan.laser.t_switch_on < t_f)
    times.push_back(plan.laser.t_switch_on);
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end(),
                          [](double a, double b) { return std::fabs(a - b) < kTimeEps; }),
              times.end());

  std::vector<TimedState> out;
  out.reserve(times.size());
  size_t k = 0;  // current segment index
  for (double t : times) {
    while (k + 1 < plan.segments.size() && t > seg_start_times[k + 1] + kTimeEps) ++k;
    if (plan.segments.empty()) {
      out.emplace_back(t, start.normalized());
      continue;
    }
    const PoseSegment& seg = plan.segments[k];
    const double ts = seg_start_times[k];
    const double tau = std::clamp(t - ts, 0.0, seg.duration);
    State s = advance_pose(params, seg.start_state.normalized(), seg.kind, tau);
    s.psi = seg.start_state.psi + turn_input(seg.kind) * tau / params.rho +
            rate * active_time(ts, tau, plan.laser.t_switch_on);
    out.emplace_back(t, s.normalized());
  }
  return out;
}

CaptureResult capture_check(const SystemParams& params, const State& s,
                            double tol_angle) {
  params.validate();
  if (s.x == 0.0 && s.y == 0.0)
    throw Error(Error::Code::StateAtTarget,
                "capture_check: state at the target, aim direction undefined");
  CaptureResult res;
  res.range_slack = s.x * s.x + s.y * s.y - params.r * params.r;
  res.aim_error = angle_dist(kPi + std::atan2(s.y, s.x), s.psi);
  res.captured = res.range_slack <= kTolGeom && res.aim_error <= tol_angle;
  return res;
}

double laser_angle_swept(const SystemParams& params, const PoseSegment& segment,
                         LaserSense sense, double active_fraction) {
  const double af = std::clamp(active_fraction, 0.0, 1.0);
  return turn_input(segment.kind) * segment.duration / params.rho +
         laser_rate(sense, params) * af * segment.duration;
}

// ---------------------------------------------------------------------------
// Optimality-conditions verifier.
// ---------------------------------------------------------------------------

namespace {

constexpr int kFitN = 4;  // unknowns (c_x, c_y, c_0, c_psi)

// Jacobi eigendecomposition of a symmetric 4x4 matrix. Small and always
// converges in a handful of sweeps at this size.
void eigen_sym4(const double a_in[kFitN][kFitN], double vecs[kFitN][kFitN],
                double vals[kFitN]) {
  double a[kFitN][kFitN];
  for (int i = 0; i < kFitN; ++i)
    for (int j = 0; j < kFitN; ++j) {
      a[i][j] = a_in[i][j];
      vecs[i][j] = (i == j) ? 1.0 : 0.0;
    }
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < kFitN - 1; ++p)
      for (int q = p + 1; q < kFitN; ++q) off += std::fabs(a[p][q]);
    if (off < 1e-300) break;
    for (int p = 0; p < kFitN - 1; ++p)
      for (int q = p + 1; q < kFitN; ++q) {
        if (std::fabs(a[p][q]) < 1e-300) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < kFitN; ++k) {
          const double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (int k = 0; k < kFitN; ++k) {
          const double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
        for (int k = 0; k < kFitN; ++k) {
          const double vkp = vecs[k][p], vkq = vecs[k][q];
          vecs[k][p] = c * vkp - s * vkq;
          vecs[k][q] = s * vkp + c * vkq;
        }
      }
  }
  for (int i = 0; i < kFitN; ++i) vals[i] = a[i][i];
}

struct FitRow {
  double a[kFitN];   // coefficients of (c_x, c_y, c_0, c_psi)
  double b;          // right-hand side (for the normal normalization)
  bool hamiltonian;  // true for H rows, false for geometric rows
};

struct VerifySample {
  double x, y, theta, u, omega;
};

}  // namespace

PmpCertificate pmp_verify(const SystemParams& params, const State& start,
                          const TrajectoryPlan& plan) {
  const double rate = laser_rate(plan.laser.sense, params);
  const double t_on = plan.laser.t_switch_on;

  std::vector<VerifySample> samples;          // H = 0 holds at each of these
  std::vector<Vec2> collinear_pts;            // switching points and S points

  State cur = start.normalized();
  double t0 = 0.0;
  for (size_t i = 0; i < plan.segments.size(); ++i) {
    const PoseSegment& seg = plan.segments[i];
    const int n = 24;
    for (int k = 0; k <= n; ++k) {
      const double tau = seg.duration * k / n;
      const double t = t0 + tau;
      State s = advance_pose(params, cur, seg.kind, tau);
      const double omega = (t >= t_on - kTimeEps && plan.t_final > 0.0) ? rate : 0.0;
      samples.push_back({s.x, s.y, s.theta, turn_input(seg.kind), omega});
      if (seg.kind == SegKind::Straight) collinear_pts.push_back(s.pos());
    }
    // Both sides of the laser switch-on, when it falls inside this segment.
    if (t_on > t0 + kTimeEps && t_on < t0 + seg.duration - kTimeEps) {
      State s = advance_pose(params, cur, seg.kind, t_on - t0);
      samples.push_back({s.x, s.y, s.theta, turn_input(seg.kind), 0.0});
      samples.push_back({s.x, s.y, s.theta, turn_input(seg.kind), rate});
    }
    if (i + 1 < plan.segments.size()) {
      State sw = advance_pose(params, cur, seg.kind, seg.duration);
      collinear_pts.push_back(sw.pos());
    }
    cur = advance_pose(params, cur, seg.kind, seg.duration).normalized();
    t0 += seg.duration;
  }
  const State fin = propagate(params, start, plan);

  std::vector<FitRow> rows;
  for (const VerifySample& s : samples) {
    FitRow r{};
    r.a[0] = std::cos(s.theta) + s.y * s.u / params.rho;
    r.a[1] = std::sin(s.theta) - s.x * s.u / params.rho;
    r.a[2] = s.u / params.rho;
    r.a[3] = s.u / params.rho + s.omega;
    r.b = -1.0;
    r.hamiltonian = true;
    rows.push_back(r);
  }
  // Switching points and straight segments: the switching function
  // p_theta + p_psi vanishes there.
  for (const Vec2& p : collinear_pts)
    rows.push_back(FitRow{{p.y, -p.x, 1.0, 1.0}, 0.0, false});
  // Terminal condition on the heading costate; holds for interior endings too.
  rows.push_back(FitRow{{fin.y, -fin.x, 1.0, 0.0}, 0.0, false});
  // With the trajectory ending on the range circle, the terminal multipliers
  // additionally tie the laser costate to the heading-costate constant.
  const double fin_slack = fin.x * fin.x + fin.y * fin.y - params.r * params.r;
  if (std::fabs(fin_slack) <= 1e-3 * params.r * params.r)
    rows.push_back(FitRow{{0.0, 0.0, 1.0, 1.0}, 0.0, false});

  PmpCertificate cert;
  if (samples.empty()) {  // zero-duration plan: nothing to determine
    cert.rank_deficient = true;
    return cert;
  }

  double ata[kFitN][kFitN] = {};
  double atb[kFitN] = {};
  for (const FitRow& r : rows) {
    for (int i = 0; i < kFitN; ++i) {
      for (int j = 0; j < kFitN; ++j) ata[i][j] += r.a[i] * r.a[j];
      atb[i] += r.a[i] * r.b;
    }
  }

  double vecs[kFitN][kFitN], vals[kFitN];
  eigen_sym4(ata, vecs, vals);
  double vmax = 1e-300;
  for (double v : vals) vmax = std::max(vmax, std::fabs(v));
  // Pseudo-inverse solve; truncated directions mark the fit rank-deficient.
  double c[kFitN] = {0.0, 0.0, 0.0, 0.0};
  for (int e = 0; e < kFitN; ++e) {
    if (vals[e] <= 1e-12 * vmax) {
      cert.rank_deficient = true;
      continue;
    }
    double proj = 0.0;
    for (int i = 0; i < kFitN; ++i) proj += vecs[i][e] * atb[i];
    proj /= vals[e];
    for (int i = 0; i < kFitN; ++i) c[i] += proj * vecs[i][e];
  }

  auto residuals = [&](const double cc[kFitN], double p0, double* h_res,
                       double* g_res) {
    double h = 0.0, g = 0.0;
    for (const FitRow& r : rows) {
      double v = r.hamiltonian ? p0 : 0.0;
      for (int i = 0; i < kFitN; ++i) v += r.a[i] * cc[i];
      if (r.hamiltonian)
        h = std::max(h, std::fabs(v));
      else
        g = std::max(g, std::fabs(v));
    }
    *h_res = h;
    *g_res = g;
  };

  double h_res, g_res;
  residuals(c, 1.0, &h_res, &g_res);

  // Fall back to the abnormal normalization only when the normal fit fails:
  // minimize |A c| over unit c via the smallest eigenvector.
  if (h_res > 1e-4 || g_res > 1e-4) {
    int emin = 0;
    for (int e = 1; e < kFitN; ++e)
      if (vals[e] < vals[emin]) emin = e;
    double c0v[kFitN];
    for (int i = 0; i < kFitN; ++i) c0v[i] = vecs[i][emin];
    double h0, g0;
    residuals(c0v, 0.0, &h0, &g0);
    if (std::max(h0, g0) < std::max(h_res, g_res)) {
      cert.p0 = 0.0;
      for (int i = 0; i < kFitN; ++i) c[i] = c0v[i];
      h_res = h0;
      g_res = g0;
    }
  }

  cert.c_x = c[0];
  cert.c_y = c[1];
  cert.c_0 = c[2];
  cert.c_psi = c[3];
  cert.hamiltonian_residual = h_res;

  // Distance of the switching points and straight segments from the line
  // where the switching function vanishes (through the target whenever the
  // trajectory terminates on the range circle).
  const double cnorm = std::hypot(cert.c_x, cert.c_y);
  double collin = 0.0;
  if (cnorm > 1e-12) {
    for (const Vec2& p : collinear_pts)
      collin = std::max(collin, std::fabs(cert.c_x * p.y - cert.c_y * p.x +
                                          cert.c_0 + cert.c_psi) /
                                    cnorm);
  } else if (!collinear_pts.empty()) {
    cert.rank_deficient = true;
  }
  cert.collinearity_residual = collin;
  return cert;
}

}  // namespace dublaser
