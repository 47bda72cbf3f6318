#include <doctest.h>

#include "dublaser/relaxed.hpp"
#include "support.hpp"

using namespace dublaser;

namespace {
const SystemParams kUnit{1.0, 1.0, 0.3};

// A solution is only accepted when its plan actually captures on replay.
void check_captures(const SystemParams& p, const State& s0, const RelaxedSolution& sol) {
  const State fin = propagate(p, s0, sol.plan);
  const auto cap = capture_check(p, fin);
  CHECK(cap.captured);
  CHECK(std::fabs(sol.plan.t_final - total_duration(sol.plan)) < 1e-12);
}
}  // namespace

TEST_CASE("turn-straight solution of the reference scenario") {
  const State s0{2, 2, kPi / 2, kPi};
  auto sol = solve_cs(kUnit, s0, SegKind::RightArc, LaserSense::Clockwise);
  REQUIRE(sol.has_value());

  // Geometry: arc sweep 4.4055, straight sqrt(12) - 1.
  CHECK(sol->T_D == doctest::Approx(6.8696).epsilon(1e-4));
  CHECK(sol->first_switch_time == doctest::Approx(4.40552).epsilon(1e-4));
  CHECK(sol->final_point.norm() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(angle_dist(sol->theta_f, wrap_two_pi(sol->plan.final_state.psi)) < 1e-9);

  // The laser has to sweep a quarter turn, so the latest switch-on is
  // T_D - (pi/2) / omega_max.
  CHECK(sol->t_l_star == doctest::Approx(sol->T_D - 0.5 * kPi / 0.3).epsilon(1e-9));
  check_captures(kUnit, s0, *sol);

  // Moving the switch-on earlier or later breaks the aim on replay.
  for (double t_on : {sol->t_l_star - 0.5, sol->t_l_star + 0.5}) {
    TrajectoryPlan shifted = sol->plan;
    shifted.laser.t_switch_on = t_on;
    const auto cap = capture_check(kUnit, propagate(kUnit, s0, shifted));
    CHECK(!cap.captured);
  }

  // The mirror-word family from here cannot finish its sweep in time.
  std::string why;
  CHECK(!solve_cs(kUnit, s0, SegKind::LeftArc, LaserSense::Clockwise, &why).has_value());
  CHECK(!solve_cs(kUnit, s0, SegKind::LeftArc, LaserSense::CounterClockwise).has_value());
}

TEST_CASE("turn-straight degenerates to a straight run when already tangent") {
  const State s0{2, 0, kPi, kPi};
  auto sol = solve_cs(kUnit, s0, SegKind::RightArc, LaserSense::Clockwise);
  REQUIRE(sol.has_value());
  CHECK(sol->T_D == doctest::Approx(1.0));
  CHECK(sol->t_l_star == doctest::Approx(1.0));
  CHECK(sol->plan.realized_word() == "S");  // zero-length arc dropped
  check_captures(kUnit, s0, *sol);
}

TEST_CASE("turn-straight time dominates the point-to-circle lower bound") {
  for (const auto& sc : testing::random_scenarios(40, 20240901ull)) {
    // Sampled circle bound is coarse to one sample spacing; the bound at the
    // solution's own endpoint is exact.
    const double bound = testing::dubins_time_to_circle_lower_bound(sc.params, sc.start);
    for (SegKind turn : {SegKind::LeftArc, SegKind::RightArc})
      for (LaserSense sense : {LaserSense::Clockwise, LaserSense::CounterClockwise}) {
        auto sol = solve_cs(sc.params, sc.start, turn, sense);
        if (!sol) continue;
        CHECK(sol->T_D >= bound - 0.01);
        const double own = testing::dubins_time_to_point(
            sc.params.rho, sc.start.x, sc.start.y, sc.start.theta,
            sol->final_point.x, sol->final_point.y);
        CHECK(sol->T_D >= own - 1e-9);
        check_captures(sc.params, sc.start, *sol);
      }
  }
}

TEST_CASE("straight-only solutions") {
  SystemParams p{1.0, 1.0, 0.3};

  // Aimed already: the laser never needs to move.
  auto s1 = solve_s(p, State{3, 0, kPi, kPi}, LaserSense::CounterClockwise);
  REQUIRE(s1.has_value());
  CHECK(s1->T_D == doctest::Approx(2.0));
  CHECK(s1->t_l_star == doctest::Approx(2.0));
  check_captures(p, State{3, 0, kPi, kPi}, *s1);

  // 0.4 rad of sweep at rate 0.3 must start no later than 2 - 4/3.
  auto s2 = solve_s(p, State{3, 0, kPi, kPi - 0.4}, LaserSense::CounterClockwise);
  REQUIRE(s2.has_value());
  CHECK(s2->t_l_star == doctest::Approx(2.0 - 0.4 / 0.3).epsilon(1e-6));
  check_captures(p, State{3, 0, kPi, kPi - 0.4}, *s2);
  // Turning the long way around cannot finish in 2 time units.
  CHECK(!solve_s(p, State{3, 0, kPi, kPi - 0.4}, LaserSense::Clockwise).has_value());

  // A full rad of sweep needs 10/3 > 2 time units: infeasible as a pure line.
  CHECK(!solve_s(p, State{3, 0, kPi, kPi - 1.0}, LaserSense::CounterClockwise).has_value());

  // Heading line missing the target is rejected outright.
  std::string why;
  CHECK(!solve_s(p, State{3, 0, kPi / 3, kPi}, LaserSense::Clockwise, &why).has_value());
  CHECK(why == "heading line does not pass through the target");
}

TEST_CASE("single-arc capture can end strictly inside the range circle") {
  // The left turn circle passes within 0.015 of the target. As the vehicle
  // sweeps by, the off-laser orientation happens to cross the aim direction,
  // so capture occurs deep inside the range disk with zero laser activity.
  SystemParams p{1.0, 1.0, 0.3};
  const State s0{0.6, 0.9, kPi / 2, kPi};

  auto left = solve_c(p, s0, SegKind::LeftArc, LaserSense::CounterClockwise);
  REQUIRE(left.has_value());
  check_captures(p, s0, *left);
  CHECK(left->final_point.norm() < p.r - 1e-3);
  CHECK(left->T_D == doctest::Approx(5.1306).epsilon(1e-3));
  CHECK(left->t_l_star == doctest::Approx(left->T_D).epsilon(1e-6));
}

TEST_CASE("single-arc switch-on approaches the end as the laser speeds up") {
  SystemParams fast{1.0, 1.0, 100.0};
  const State s0{0.6, 0.9, kPi / 2, kPi};
  auto sol = solve_c(fast, s0, SegKind::LeftArc, LaserSense::CounterClockwise);
  REQUIRE(sol.has_value());
  CHECK(sol->T_D - sol->t_l_star < kTwoPi / 100.0 + 1e-9);
  check_captures(fast, s0, *sol);
}

TEST_CASE("single-arc loiters when the laser needs more time than one lap") {
  // Laser starts far from any orientation the pass-by can supply for free,
  // and at 0.01 rad per unit time the vehicle must circle while it creeps.
  SystemParams p{1.0, 1.0, 0.01};
  const State s0{0.6, 0.9, kPi / 2, 5.14};
  auto sol = solve_c(p, s0, SegKind::LeftArc, LaserSense::CounterClockwise);
  REQUIRE(sol.has_value());
  check_captures(p, s0, *sol);
  CHECK(sol->T_D > kTwoPi * p.rho);  // more than one full lap
}
