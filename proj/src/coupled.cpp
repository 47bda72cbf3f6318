#include "dublaser/coupled.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dublaser {

double ResidualVector::max_abs() const {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

double ResidualVector::norm2() const {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

namespace {

constexpr double kRootTol = 1e-11;        // infinity-norm convergence target
constexpr double kDedupTol = 1e-6;        // root separation in unknown space
constexpr double kSignSlack = 1e-6;       // tolerance on control sign conditions
constexpr double kSentinel = 1e6;

struct FamilySpec {
  std::string word;
  LaserSense sense = LaserSense::Clockwise;
  bool toward_target = true;  // tangent branch for words with a straight piece
  SegKind first = SegKind::Straight;
  SegKind last = SegKind::Straight;
  bool two_arcs_only = false;  // RL / LR
  bool starts_straight = false;  // SR / SL
};

// Fixed first-leg geometry for words with a straight piece: the straight runs
// on the line through the target, so the first switching point and heading
// are independent of the unknowns.
struct FirstLeg {
  bool valid = false;
  double theta1 = 0.0;
  Vec2 p1;
  double alpha = 0.0;  // first arc sweep; 0 when the word starts with S
};

ResidualVector not_evaluable() {
  ResidualVector r;
  r.v = {kSentinel, kSentinel, kSentinel, kSentinel};
  r.evaluable = false;
  return r;
}

struct CostateConsts {
  double c_x, c_y, c_psi;
};

// In-plane costates from the terminal conditions on the range circle.
CostateConsts costates_from(const SystemParams& params, const CoupledUnknowns& u) {
  const double ce = std::cos(u.eta), se = std::sin(u.eta);
  return {u.lambda1 * params.r * ce - u.c0 * se / params.r,
          u.lambda1 * params.r * se + u.c0 * ce / params.r, -u.c0};
}

double hamiltonian_at_start(const SystemParams& params, const State& s0, double u_in,
                            const CostateConsts& c, double omega) {
  return 1.0 + c.c_x * (std::cos(s0.theta) + s0.y * u_in / params.rho) +
         c.c_y * (std::sin(s0.theta) - s0.x * u_in / params.rho) + c.c_psi * omega;
}

FirstLeg first_leg_for(const SystemParams& params, const State& s0,
                       const FamilySpec& spec) {
  FirstLeg leg;
  if (spec.starts_straight) {
    // The straight piece is the start heading line; it must pass through the
    // target for the collinearity conditions to be satisfiable at all.
    const double off_line = std::fabs(s0.x * std::sin(s0.theta) - s0.y * std::cos(s0.theta));
    if (off_line > 1e-6 * std::max(1.0, s0.pos().norm())) return leg;
    leg.valid = true;
    leg.theta1 = s0.theta;
    leg.p1 = s0.pos();
    leg.alpha = 0.0;
    return leg;
  }
  const bool left = spec.first == SegKind::LeftArc;
  const Vec2 center = turn_center(s0.pos(), s0.theta, left, params.rho);
  const auto tan = tangent_through_target(center, params.rho, left, spec.toward_target);
  if (!tan) return leg;
  leg.valid = true;
  leg.theta1 = tan->theta;
  leg.p1 = tan->point;
  leg.alpha = sweep_angle(s0.theta, leg.theta1, left);
  return leg;
}

ResidualVector eval_cc(const SystemParams& params, const State& s0,
                       const FamilySpec& spec, const CoupledUnknowns& u) {
  const double omega = laser_rate(spec.sense, params);
  const Vec2 f{params.r * std::cos(u.eta), params.r * std::sin(u.eta)};
  const bool first_left = spec.first == SegKind::LeftArc;
  const bool last_left = spec.last == SegKind::LeftArc;
  const Vec2 o1 = turn_center(s0.pos(), s0.theta, first_left, params.rho);
  const Vec2 o2 = turn_center(f, u.theta_f, last_left, params.rho);

  const Vec2 d = o1 - o2;
  const double n = d.norm();
  if (n < 1e-9 * params.rho) return not_evaluable();
  const Vec2 dir = d * (1.0 / n);

  // Switch heading is perpendicular to the center line; the branch follows
  // from which side each circle sits on.
  const double theta1 = first_left ? std::atan2(-dir.x, dir.y)
                                   : std::atan2(dir.x, -dir.y);
  const Vec2 p1 = o2 + params.rho * dir;

  const CostateConsts c = costates_from(params, u);
  const double u1 = turn_input(spec.first);
  const double u2 = turn_input(spec.last);
  const double alpha = sweep_angle(s0.theta, theta1, first_left);
  const double beta = sweep_angle(theta1, u.theta_f, last_left);
  const double travel = params.rho * (alpha + beta);
  const double dtheta = u1 * alpha + u2 * beta;

  ResidualVector r;
  r.v[0] = hamiltonian_at_start(params, s0, u1, c, omega);
  r.v[1] = c.c_x * p1.y - c.c_y * p1.x;
  r.v[2] = (n - 2.0 * params.rho) / params.rho;
  r.v[3] = wrap_pi(s0.psi + dtheta + omega * travel - (u.eta + kPi)) / omega;
  return r;
}

ResidualVector eval_csc(const SystemParams& params, const State& s0,
                        const FamilySpec& spec, const FirstLeg& leg,
                        const CoupledUnknowns& u) {
  if (!leg.valid) return not_evaluable();
  const double omega = laser_rate(spec.sense, params);
  const Vec2 f{params.r * std::cos(u.eta), params.r * std::sin(u.eta)};
  const bool last_left = spec.last == SegKind::LeftArc;
  const Vec2 o2 = turn_center(f, u.theta_f, last_left, params.rho);
  const Vec2 p2 = point_on_turn_circle(o2, leg.theta1, last_left, params.rho);

  const CostateConsts c = costates_from(params, u);
  const double u1 = turn_input(spec.first);
  const double u2 = turn_input(spec.last);
  const double s_len = (p2 - leg.p1).dot(heading_dir(leg.theta1));
  const double gamma = sweep_angle(leg.theta1, u.theta_f, last_left);
  const double travel = params.rho * leg.alpha + s_len + params.rho * gamma;
  const double dtheta = u1 * leg.alpha + u2 * gamma;

  ResidualVector r;
  r.v[0] = hamiltonian_at_start(params, s0, u1, c, omega);
  r.v[1] = c.c_x * leg.p1.y - c.c_y * leg.p1.x;
  r.v[2] = c.c_x * p2.y - c.c_y * p2.x;
  r.v[3] = wrap_pi(s0.psi + dtheta + omega * travel - (u.eta + kPi)) / omega;
  return r;
}

FamilySpec spec_for(const CandidateType& cand, bool toward_target) {
  FamilySpec spec;
  spec.word = cand.pose_word;
  spec.sense = cand.laser_sense;
  spec.toward_target = toward_target;
  spec.first = *segment_from_letter(cand.pose_word.front());
  spec.last = *segment_from_letter(cand.pose_word.back());
  spec.two_arcs_only = cand.pose_word.size() == 2 &&
                       cand.pose_word.find('S') == std::string::npos;
  spec.starts_straight = cand.pose_word.front() == 'S';
  return spec;
}

// ---------------------------------------------------------------------------
// Damped Newton with central finite differences on a 4x4 system.
// ---------------------------------------------------------------------------

using Unknowns4 = std::array<double, 4>;

CoupledUnknowns to_unknowns(const Unknowns4& x) { return {x[0], x[1], x[2], x[3]}; }

bool solve_linear4(double a[4][4], double b[4], double x[4]) {
  int perm[4] = {0, 1, 2, 3};
  for (int col = 0; col < 4; ++col) {
    int piv = col;
    for (int r = col + 1; r < 4; ++r)
      if (std::fabs(a[perm[r]][col]) > std::fabs(a[perm[piv]][col])) piv = r;
    std::swap(perm[col], perm[piv]);
    const double diag = a[perm[col]][col];
    if (std::fabs(diag) < 1e-300) return false;
    for (int r = col + 1; r < 4; ++r) {
      const double factor = a[perm[r]][col] / diag;
      for (int cc = col; cc < 4; ++cc) a[perm[r]][cc] -= factor * a[perm[col]][cc];
      b[perm[r]] -= factor * b[perm[col]];
    }
  }
  for (int row = 3; row >= 0; --row) {
    double s = b[perm[row]];
    for (int cc = row + 1; cc < 4; ++cc) s -= a[perm[row]][cc] * x[cc];
    const double diag = a[perm[row]][row];
    if (std::fabs(diag) < 1e-300) return false;
    x[row] = s / diag;
  }
  return true;
}

// Jacobi eigenvalues of a symmetric 4x4 (for the condition number report).
void eigenvalues_sym4(double a[4][4], double vals[4]) {
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < 4; ++p)
      for (int q = p + 1; q < 4; ++q) off += std::fabs(a[p][q]);
    if (off < 1e-300) break;
    for (int p = 0; p < 3; ++p)
      for (int q = p + 1; q < 4; ++q) {
        if (std::fabs(a[p][q]) < 1e-300) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < 4; ++k) {
          const double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (int k = 0; k < 4; ++k) {
          const double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
      }
  }
  for (int i = 0; i < 4; ++i) vals[i] = a[i][i];
}

template <typename Eval>
bool fd_jacobian(const Eval& eval, const Unknowns4& x, double jac[4][4]) {
  for (int i = 0; i < 4; ++i) {
    const double h = 1e-7 * std::max(1.0, std::fabs(x[i]));
    Unknowns4 xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    const ResidualVector rp = eval(to_unknowns(xp));
    const ResidualVector rm = eval(to_unknowns(xm));
    if (!rp.evaluable || !rm.evaluable) return false;
    for (int k = 0; k < 4; ++k) jac[k][i] = (rp.v[k] - rm.v[k]) / (2.0 * h);
  }
  return true;
}

struct NewtonResult {
  bool converged = false;
  Unknowns4 x{};
  ResidualVector res;
  double jacobian_condition = 0.0;
};

template <typename Eval>
NewtonResult newton_solve(const Eval& eval, Unknowns4 x) {
  NewtonResult out;
  ResidualVector r = eval(to_unknowns(x));
  if (!r.evaluable) return out;

  for (int iter = 0; iter < 100; ++iter) {
    if (r.max_abs() < kRootTol) break;
    double jac[4][4];
    if (!fd_jacobian(eval, x, jac)) return out;
    double rhs[4];
    for (int k = 0; k < 4; ++k) rhs[k] = -r.v[k];
    double step[4];
    double jcopy[4][4];
    std::copy(&jac[0][0], &jac[0][0] + 16, &jcopy[0][0]);
    if (!solve_linear4(jcopy, rhs, step)) return out;

    const double base = r.norm2();
    double lam = 1.0;
    bool accepted = false;
    while (lam > 1e-4) {
      Unknowns4 xn = x;
      for (int k = 0; k < 4; ++k) xn[k] += lam * step[k];
      const ResidualVector rn = eval(to_unknowns(xn));
      if (rn.evaluable && rn.norm2() <= (1.0 - 1e-4 * lam) * base) {
        x = xn;
        r = rn;
        accepted = true;
        break;
      }
      lam *= 0.5;
    }
    if (!accepted) return out;       // stalled
    if (r.norm2() > 1e8) return out;  // diverging
  }

  if (r.max_abs() >= kRootTol) return out;
  out.converged = true;
  out.x = x;
  out.res = r;
  return out;
}

template <typename Eval>
double jacobian_condition_at(const Eval& eval, const Unknowns4& x) {
  double jac[4][4];
  if (!fd_jacobian(eval, x, jac)) return std::numeric_limits<double>::infinity();
  double jtj[4][4] = {};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k) jtj[i][j] += jac[k][i] * jac[k][j];
  double vals[4];
  eigenvalues_sym4(jtj, vals);
  double vmin = std::numeric_limits<double>::infinity(), vmax = 0.0;
  for (double v : vals) {
    vmin = std::min(vmin, v);
    vmax = std::max(vmax, v);
  }
  return vmin > 0.0 ? std::sqrt(vmax / vmin) : std::numeric_limits<double>::infinity();
}

// ---------------------------------------------------------------------------
// Root materialization and admissibility filters.
// ---------------------------------------------------------------------------

bool sign_conditions_hold(const SystemParams& params, const State& start,
                          const TrajectoryPlan& plan, const CoupledUnknowns& u) {
  const CostateConsts c = costates_from(params, u);
  const double cnorm = std::hypot(c.c_x, c.c_y);

  // Laser rate must agree with the sign of its costate (undetermined at 0).
  const double w_slack = kSignSlack * (1.0 + std::fabs(u.c0));
  if (plan.laser.sense == LaserSense::Clockwise && c.c_psi < -w_slack) return false;
  if (plan.laser.sense == LaserSense::CounterClockwise && c.c_psi > w_slack) return false;

  // Turn input must agree with the sign of the switching function along arcs.
  State cur = start.normalized();
  for (const PoseSegment& seg : plan.segments) {
    if (seg.kind != SegKind::Straight) {
      const int n = 16;
      for (int k = 0; k <= n; ++k) {
        const State s = advance(params, cur, seg.kind, seg.duration * k / n, 0.0);
        const double sw = c.c_x * s.y - c.c_y * s.x;
        const double slack = kSignSlack * (1.0 + cnorm * (1.0 + s.pos().norm()));
        if (seg.kind == SegKind::RightArc && sw < -slack) return false;
        if (seg.kind == SegKind::LeftArc && sw > slack) return false;
      }
    }
    cur = advance(params, cur, seg.kind, seg.duration, 0.0);
  }
  return true;
}

std::optional<TrajectoryPlan> materialize(const SystemParams& params, const State& s0,
                                          const CandidateType& cand,
                                          const FamilySpec& spec, const FirstLeg& leg,
                                          const NewtonResult& root) {
  const CoupledUnknowns u = to_unknowns(root.x);
  const Vec2 f{params.r * std::cos(u.eta), params.r * std::sin(u.eta)};
  const bool first_left = spec.first == SegKind::LeftArc;
  const bool last_left = spec.last == SegKind::LeftArc;

  std::vector<std::pair<SegKind, double>> pieces;
  if (spec.two_arcs_only) {
    const Vec2 o1 = turn_center(s0.pos(), s0.theta, first_left, params.rho);
    const Vec2 o2 = turn_center(f, u.theta_f, last_left, params.rho);
    const Vec2 d = o1 - o2;
    const double n = d.norm();
    if (std::fabs(n - 2.0 * params.rho) > 1e-6 * params.rho) return std::nullopt;
    const Vec2 dir = d * (1.0 / n);
    const double theta1 = first_left ? std::atan2(-dir.x, dir.y)
                                     : std::atan2(dir.x, -dir.y);
    pieces.emplace_back(spec.first,
                        params.rho * sweep_angle(s0.theta, theta1, first_left));
    pieces.emplace_back(spec.last,
                        params.rho * sweep_angle(theta1, u.theta_f, last_left));
  } else {
    const Vec2 o2 = turn_center(f, u.theta_f, last_left, params.rho);
    const Vec2 p2 = point_on_turn_circle(o2, leg.theta1, last_left, params.rho);
    const double s_len = (p2 - leg.p1).dot(heading_dir(leg.theta1));
    if (s_len < -1e-9) return std::nullopt;  // straight piece would run backwards
    if (!spec.starts_straight)
      pieces.emplace_back(spec.first, params.rho * leg.alpha);
    pieces.emplace_back(SegKind::Straight, std::max(s_len, 0.0));
    pieces.emplace_back(spec.last,
                        params.rho * sweep_angle(leg.theta1, u.theta_f, last_left));
  }

  TrajectoryPlan plan = make_plan(params, s0, cand, pieces, LaserSchedule{spec.sense, 0.0});
  plan.root = RootDiagnostics{root.x, root.res.norm2(), root.jacobian_condition};

  // A root is only admissible if its forward geometry actually captures.
  if (std::hypot(plan.final_state.x - f.x, plan.final_state.y - f.y) >
      1e-6 * std::max(1.0, params.r))
    return std::nullopt;
  try {
    if (!capture_check(params, plan.final_state).captured) return std::nullopt;
  } catch (const Error&) {
    return std::nullopt;
  }
  if (!sign_conditions_hold(params, s0, plan, u)) return std::nullopt;
  return plan;
}

}  // namespace

ResidualVector residuals_cc(const SystemParams& params, const State& start,
                            const std::string& word, LaserSense sense,
                            const CoupledUnknowns& u) {
  const FamilySpec spec = spec_for(CandidateType{word, sense}, true);
  return eval_cc(params, start.normalized(), spec, u);
}

ResidualVector residuals_csc(const SystemParams& params, const State& start,
                             const std::string& word, LaserSense sense,
                             const CoupledUnknowns& u, bool toward_target) {
  const FamilySpec spec = spec_for(CandidateType{word, sense}, toward_target);
  const State s0 = start.normalized();
  const FirstLeg leg = first_leg_for(params, s0, spec);
  return eval_csc(params, s0, spec, leg, u);
}

std::vector<TrajectoryPlan> solve_family(const SystemParams& params, const State& start,
                                         const CandidateType& candidate,
                                         std::string* reason) {
  params.validate();
  if (!candidate.valid())
    throw Error(Error::Code::InvalidParams,
                "solve_family: not an admissible candidate: " + candidate.label());
  const State s0 = start.normalized();

  const bool csc_like = !candidate.pose_word.empty() &&
                        candidate.pose_word.find('S') != std::string::npos;
  std::vector<bool> branches = csc_like && candidate.pose_word.front() != 'S'
                                   ? std::vector<bool>{true, false}
                                   : std::vector<bool>{true};

  // Deterministic multistart grid over the unknowns.
  std::vector<double> angle_grid;
  for (int k = 0; k < 16; ++k) angle_grid.push_back(k * kPi / 8.0);
  const double mult_grid[4] = {-2.0, -0.5, 0.5, 2.0};

  std::vector<TrajectoryPlan> plans;
  bool any_geometry = false;

  for (bool toward : branches) {
    const FamilySpec spec = spec_for(candidate, toward);
    FirstLeg leg;
    if (!spec.two_arcs_only) {
      leg = first_leg_for(params, s0, spec);
      if (!leg.valid) continue;
    }
    any_geometry = true;

    const auto eval = [&](const CoupledUnknowns& u) {
      return spec.two_arcs_only ? eval_cc(params, s0, spec, u)
                                : eval_csc(params, s0, spec, leg, u);
    };

    std::vector<Unknowns4> roots_seen;  // per branch: equal unknowns on the
                                        // other branch give a different path
    for (double eta0 : angle_grid)
      for (double thf0 : angle_grid)
        for (double lam0 : mult_grid)
          for (double c00 : mult_grid) {
            NewtonResult res = newton_solve(eval, {eta0, lam0, thf0, c00});
            if (!res.converged) continue;

            Unknowns4 key = res.x;
            key[0] = wrap_two_pi(key[0]);
            key[2] = wrap_two_pi(key[2]);
            bool dup = false;
            for (const Unknowns4& seen : roots_seen) {
              if (angle_dist(seen[0], key[0]) < kDedupTol &&
                  std::fabs(seen[1] - key[1]) < kDedupTol &&
                  angle_dist(seen[2], key[2]) < kDedupTol &&
                  std::fabs(seen[3] - key[3]) < kDedupTol) {
                dup = true;
                break;
              }
            }
            if (dup) continue;
            roots_seen.push_back(key);

            res.x = key;
            res.jacobian_condition = jacobian_condition_at(eval, key);
            if (auto plan = materialize(params, s0, candidate, spec, leg, res))
              plans.push_back(std::move(*plan));
          }
  }

  if (!any_geometry && reason)
    *reason = candidate.pose_word.front() == 'S'
                  ? "start heading line does not pass through the target"
                  : "first turn circle contains the target: no tangent line";
  if (plans.empty() && any_geometry && reason) *reason = "no admissible root";

  std::sort(plans.begin(), plans.end(), [](const TrajectoryPlan& a, const TrajectoryPlan& b) {
    return a.t_final < b.t_final;
  });
  return plans;
}

}  // namespace dublaser
