#pragma once
// Shared helpers for the test suites: deterministic random scenarios and an
// independent shortest-path reference for a bounded-curvature vehicle driving
// to a point with free final heading. The reference is written against
// std::complex on purpose so it shares no geometry code with the library.

#include <algorithm>
#include <complex>
#include <random>
#include <vector>

#include "dublaser/model.hpp"
#include "dublaser/types.hpp"

namespace dublaser::testing {

struct Scenario {
  SystemParams params;
  State start;
};

inline std::vector<Scenario> random_scenarios(int count, unsigned long long seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> pos(-5.0, 5.0);
  std::uniform_real_distribution<double> ang(0.0, kTwoPi);
  const double omegas[3] = {0.01, 0.3, 2.0};

  std::vector<Scenario> out;
  while ((int)out.size() < count) {
    Scenario sc;
    sc.params.rho = 1.0;
    sc.params.r = 1.0;
    sc.params.omega_max = omegas[rng() % 3];
    sc.start.x = pos(rng);
    sc.start.y = pos(rng);
    sc.start.theta = ang(rng);
    sc.start.psi = ang(rng);
    if (sc.start.x * sc.start.x + sc.start.y * sc.start.y <=
        sc.params.r * sc.params.r + 1e-3)
      continue;  // keep starts strictly outside the range circle
    out.push_back(sc);
  }
  return out;
}

// Minimum time for a unit-speed bounded-curvature vehicle from (start pose)
// to a target *point* with free final heading: the best of turn-straight and
// turn-turn, both turn directions. Complex-plane arithmetic throughout.
inline double dubins_time_to_point(double rho, double x0, double y0, double theta0,
                                   double tx, double ty) {
  using C = std::complex<double>;
  const C start{x0, y0};
  const C target{tx, ty};
  const C head = std::polar(1.0, theta0);
  double best = std::numeric_limits<double>::infinity();

  auto sweep_cw = [](double from, double to) {  // clockwise sweep in [0, 2pi)
    double s = std::fmod(from - to, kTwoPi);
    if (s < 0) s += kTwoPi;
    if (s > kTwoPi - 1e-9) s = 0.0;  // keep aligned cases from aliasing to 2pi
    return s;
  };
  auto sweep_ccw = [&](double from, double to) { return sweep_cw(to, from); };

  for (int dir = -1; dir <= 1; dir += 2) {  // -1 right turn, +1 left turn
    const C center = start + C{0, (double)dir} * head * rho;
    const C w = target - center;
    const double d = std::abs(w);

    if (d >= rho) {
      // Turn until the straight ray toward the target leaves tangentially:
      // target - center = e^{i theta_s} (s - i dir rho).
      const double s = std::sqrt(d * d - rho * rho);
      const double theta_s = std::arg(w) + std::atan2(dir * rho, s);
      const double sw = dir > 0 ? sweep_ccw(theta0, theta_s) : sweep_cw(theta0, theta_s);
      best = std::min(best, rho * sw + s);
    }
    // Turn-turn: the opposite-direction second circle touches ours and passes
    // through the target, so its center lies on both circle(center, 2 rho)
    // and circle(target, rho).
    const double d2 = std::abs(w);
    if (d2 > 1e-15 && d2 <= 3 * rho) {
      const double a = (4 * rho * rho - rho * rho + d2 * d2) / (2 * d2);
      const double h2 = 4 * rho * rho - a * a;
      if (h2 >= 0) {
        const double h = std::sqrt(h2);
        const C base = center + w * (a / d2);
        const C off = C{0, 1} * w * (h / d2);
        for (const C o2 : {base + off, base - off}) {
          const C mid = 0.5 * (center + o2);  // switch point
          // First-arc sweep: vehicle position angle runs from arg(start-center)
          // to arg(mid-center) in the turn direction.
          const double chi0 = std::arg(start - center);
          const double chi1 = std::arg(mid - center);
          const double sw1 = dir > 0 ? sweep_ccw(chi0, chi1) : sweep_cw(chi0, chi1);
          const double chi2 = std::arg(mid - o2);
          const double chi3 = std::arg(target - o2);
          const double sw2 = dir > 0 ? sweep_cw(chi2, chi3) : sweep_ccw(chi2, chi3);
          best = std::min(best, rho * (sw1 + sw2));
        }
      }
    }
  }
  return best;
}

/// Lower bound on any trajectory time that ends on the range circle: best
/// point-to-point time over a dense sample of the circle.
inline double dubins_time_to_circle_lower_bound(const SystemParams& p, const State& s,
                                                int samples = 720) {
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k < samples; ++k) {
    const double a = kTwoPi * k / samples;
    best = std::min(best, dubins_time_to_point(p.rho, s.x, s.y, s.theta,
                                               p.r * std::cos(a), p.r * std::sin(a)));
  }
  return best;
}

}  // namespace dublaser::testing
