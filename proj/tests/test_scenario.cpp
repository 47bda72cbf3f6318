#include <doctest.h>

#include <sstream>

#include "dublaser/scenario.hpp"

using namespace dublaser;

namespace {
const char* kScenarioText =
    "# sample\n"
    "x0 = 2\n"
    "y0 = 2\n"
    "theta0 = 1.5707963267948966\n"
    "psi0 = 3.141592653589793\n"
    "rho = 1\n"
    "r = 1\n"
    "omega_max = 0.3\n";
}

TEST_CASE("scenario parsing") {
  const ScenarioFile sc = ScenarioFile::parse_text(kScenarioText);
  CHECK(sc.start.x == 2.0);
  CHECK(sc.params.omega_max == 0.3);

  // Missing and malformed fields name the offender.
  try {
    (void)ScenarioFile::parse_text("x0 = 1\n");
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Error::Code::ParseError);
    CHECK(std::string(e.what()).find("y0") != std::string::npos);
  }
  try {
    (void)ScenarioFile::parse_text(std::string(kScenarioText) + "rho = banana\n");
    CHECK(false);
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("rho") != std::string::npos);
  }

  // Degrees conversion touches only the angles.
  const ScenarioFile deg = ScenarioFile::parse_text(
      "x0=2\ny0=2\ntheta0=90\npsi0=180\nrho=1\nr=1\nomega_max=0.3\n", true);
  CHECK(deg.start.theta == doctest::Approx(kPi / 2));
  CHECK(deg.start.psi == doctest::Approx(kPi));
  CHECK(deg.start.x == 2.0);
}

TEST_CASE("result documents are deterministic and round-trip") {
  const ScenarioFile sc = ScenarioFile::parse_text(kScenarioText);
  const SolveReport rep = plan(sc.params, sc.start);

  const std::string doc1 = write_report(sc, rep);
  const std::string doc2 = write_report(sc, plan(sc.params, sc.start));
  CHECK(doc1 == doc2);  // byte-identical across runs

  const TrajectoryPlan replayed = parse_report_plan(doc1, sc.params, sc.start);
  const State a = rep.best.final_state;
  const State b = replayed.final_state;
  CHECK(std::hypot(a.x - b.x, a.y - b.y) < 1e-9);
  CHECK(angle_dist(a.psi, b.psi) < 1e-9);

  // The sixteen-row table is present.
  CHECK(doc1.find("candidate.15.label") != std::string::npos);
}

TEST_CASE("svg render contract") {
  const ScenarioFile sc = ScenarioFile::parse_text(kScenarioText);
  const SolveReport rep = plan(sc.params, sc.start);
  const std::string svg = render_svg(sc.params, sc.start, rep.best);

  // Exactly one dashed circle, radius r.
  size_t dashed = 0, pos = 0;
  while ((pos = svg.find("stroke-dasharray", pos)) != std::string::npos) {
    ++dashed;
    ++pos;
  }
  CHECK(dashed == 1);
  CHECK(svg.find("<circle cx=\"0\" cy=\"0\" r=\"1\"") != std::string::npos);

  // The polyline's last point sits on the range circle.
  const size_t pl = svg.find("points=\"");
  REQUIRE(pl != std::string::npos);
  const size_t end = svg.find('"', pl + 8);
  const std::string pts = svg.substr(pl + 8, end - pl - 8);
  const size_t last_space = pts.rfind(' ');
  const std::string last_pt = pts.substr(last_space + 1);
  const size_t comma = last_pt.find(',');
  const double x = std::stod(last_pt.substr(0, comma));
  const double y = std::stod(last_pt.substr(comma + 1));
  CHECK(std::fabs(x * x + y * y - 1.0) <= 1e-6);
}
