#include "dublaser/scenario.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

namespace dublaser {

namespace {

std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

// Fixed full-precision float formatting shared by every document writer.
std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double parse_number(const std::string& key, const std::string& value) {
  try {
    size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument("trailing characters");
    if (!std::isfinite(v)) throw std::invalid_argument("not finite");
    return v;
  } catch (const std::exception&) {
    throw Error(Error::Code::ParseError, "field '" + key + "': bad number '" + value + "'");
  }
}

std::map<std::string, std::string> parse_kv(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(Error::Code::ParseError,
                  "line " + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw Error(Error::Code::ParseError,
                  "line " + std::to_string(lineno) + ": empty key");
    kv[key] = value;
  }
  return kv;
}

}  // namespace

ScenarioFile ScenarioFile::parse_text(const std::string& text, bool degrees) {
  const auto kv = parse_kv(text);
  auto need = [&](const char* key) -> double {
    auto it = kv.find(key);
    if (it == kv.end())
      throw Error(Error::Code::ParseError, std::string("missing field '") + key + "'");
    return parse_number(key, it->second);
  };
  auto get = [&](const char* key, double fallback) -> double {
    auto it = kv.find(key);
    return it == kv.end() ? fallback : parse_number(key, it->second);
  };

  ScenarioFile sc;
  sc.start.x = need("x0");
  sc.start.y = need("y0");
  sc.start.theta = need("theta0");
  sc.start.psi = need("psi0");
  sc.params.rho = need("rho");
  sc.params.r = need("r");
  sc.params.omega_max = need("omega_max");
  if (degrees) {
    sc.start.theta *= kPi / 180.0;
    sc.start.psi *= kPi / 180.0;
  }
  sc.start = sc.start.normalized();

  sc.oracle.duration_grid_resolution =
      get("oracle.resolution", sc.oracle.duration_grid_resolution);
  sc.oracle.refine_iterations = static_cast<int>(
      get("oracle.refine_iterations", sc.oracle.refine_iterations));
  sc.oracle.max_segments =
      static_cast<int>(get("oracle.max_segments", sc.oracle.max_segments));

  try {
    sc.params.validate();
    sc.oracle.validate();
  } catch (const Error& e) {
    throw Error(Error::Code::ParseError, e.what());
  }
  return sc;
}

ScenarioFile ScenarioFile::load(const std::string& path, bool degrees) {
  std::ifstream in(path);
  if (!in)
    throw Error(Error::Code::ParseError, "cannot open scenario file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_text(buf.str(), degrees);
}

std::string ScenarioFile::to_text() const {
  std::ostringstream out;
  out << "x0 = " << num(start.x) << "\n"
      << "y0 = " << num(start.y) << "\n"
      << "theta0 = " << num(start.theta) << "\n"
      << "psi0 = " << num(start.psi) << "\n"
      << "rho = " << num(params.rho) << "\n"
      << "r = " << num(params.r) << "\n"
      << "omega_max = " << num(params.omega_max) << "\n";
  return out.str();
}

namespace {

const char* status_name(CandidateStatus s) {
  switch (s) {
    case CandidateStatus::Solved: return "solved";
    case CandidateStatus::Infeasible: return "infeasible";
    case CandidateStatus::NoRoot: return "no_root";
  }
  return "?";
}

void write_plan_lines(std::ostringstream& out, const TrajectoryPlan& plan) {
  out << "candidate = " << plan.candidate.label() << "\n";
  out << "t_final = " << num(plan.t_final) << "\n";
  out << "laser_sense = " << sense_symbol(plan.laser.sense) << "\n";
  out << "t_switch_on = " << num(plan.laser.t_switch_on) << "\n";
  out << "final.x = " << num(plan.final_state.x) << "\n";
  out << "final.y = " << num(plan.final_state.y) << "\n";
  out << "final.theta = " << num(plan.final_state.theta) << "\n";
  out << "final.psi = " << num(plan.final_state.psi) << "\n";
  out << "segments = " << plan.segments.size() << "\n";
  for (size_t i = 0; i < plan.segments.size(); ++i) {
    out << "segment." << i << ".kind = " << segment_letter(plan.segments[i].kind)
        << "\n";
    out << "segment." << i << ".duration = " << num(plan.segments[i].duration) << "\n";
  }
}

}  // namespace

std::string write_report(const ScenarioFile& scenario, const SolveReport& report) {
  std::ostringstream out;
  out << "# dublaser plan result\n";
  out << scenario.to_text();
  out << "\n";
  write_plan_lines(out, report.best);
  const PmpCertificate& c = report.best_certificate;
  out << "certificate.c_x = " << num(c.c_x) << "\n";
  out << "certificate.c_y = " << num(c.c_y) << "\n";
  out << "certificate.c_psi = " << num(c.c_psi) << "\n";
  out << "certificate.c_0 = " << num(c.c_0) << "\n";
  out << "certificate.p0 = " << num(c.p0) << "\n";
  out << "certificate.hamiltonian_residual = " << num(c.hamiltonian_residual) << "\n";
  out << "certificate.collinearity_residual = " << num(c.collinearity_residual) << "\n";
  out << "certificate.rank_deficient = " << (c.rank_deficient ? 1 : 0) << "\n";
  out << "\n";
  for (size_t i = 0; i < report.per_candidate.size(); ++i) {
    const CandidateOutcome& o = report.per_candidate[i];
    out << "candidate." << i << ".label = " << o.candidate.label() << "\n";
    out << "candidate." << i << ".status = " << status_name(o.status) << "\n";
    if (o.status == CandidateStatus::Solved)
      out << "candidate." << i << ".t_final = " << num(o.t_final) << "\n";
    else
      out << "candidate." << i << ".reason = " << o.reason << "\n";
  }
  if (report.oracle_time) {
    out << "\n";
    out << "oracle.time = " << num(*report.oracle_time) << "\n";
    if (report.oracle_structure)
      out << "oracle.structure = " << *report.oracle_structure << "\n";
    if (report.oracle_gap) out << "oracle.gap = " << num(*report.oracle_gap) << "\n";
  }
  return out.str();
}

std::string write_oracle_result(const ScenarioFile& scenario, const OracleResult& res) {
  std::ostringstream out;
  out << "# dublaser oracle result\n";
  out << scenario.to_text();
  out << "\n";
  out << "oracle.found = " << (res.found ? 1 : 0) << "\n";
  if (res.found) {
    out << "oracle.time = " << num(res.time) << "\n";
    out << "oracle.word = " << res.word << "\n";
    out << "oracle.sense = " << sense_symbol(res.sense) << "\n";
    for (size_t i = 0; i < res.durations.size(); ++i)
      out << "oracle.duration." << i << " = " << num(res.durations[i]) << "\n";
    out << "oracle.t_switch_on = " << num(res.t_switch_on) << "\n";
  }
  return out.str();
}

TrajectoryPlan parse_report_plan(const std::string& text, const SystemParams& params,
                                 const State& start) {
  const auto kv = parse_kv(text);
  auto need = [&](const std::string& key) -> std::string {
    auto it = kv.find(key);
    if (it == kv.end())
      throw Error(Error::Code::ParseError, "result missing field '" + key + "'");
    return it->second;
  };

  const auto cand = CandidateType::parse(need("candidate"));
  if (!cand) throw Error(Error::Code::ParseError, "bad candidate label");
  const auto sense = sense_from_symbol(need("laser_sense")[0]);
  if (!sense) throw Error(Error::Code::ParseError, "bad laser_sense");
  const double t_on = parse_number("t_switch_on", need("t_switch_on"));
  const size_t nseg = static_cast<size_t>(parse_number("segments", need("segments")));

  std::vector<std::pair<SegKind, double>> pieces;
  for (size_t i = 0; i < nseg; ++i) {
    const std::string prefix = "segment." + std::to_string(i);
    const std::string kind_s = need(prefix + ".kind");
    const auto kind = segment_from_letter(kind_s.empty() ? '?' : kind_s[0]);
    if (!kind) throw Error(Error::Code::ParseError, "bad segment kind");
    pieces.emplace_back(*kind, parse_number(prefix + ".duration",
                                            need(prefix + ".duration")));
  }
  return make_plan(params, start, *cand, pieces, LaserSchedule{*sense, t_on});
}

std::string render_svg(const SystemParams& params, const State& start,
                       const TrajectoryPlan& plan) {
  const double dt = plan.t_final > 0.0 ? std::max(plan.t_final / 800.0, 1e-6) : 1.0;
  const auto samples = simulate(params, start, plan, dt);

  double min_x = -params.r, max_x = params.r;
  double min_y = -params.r, max_y = params.r;
  for (const auto& [t, s] : samples) {
    min_x = std::min(min_x, s.x);
    max_x = std::max(max_x, s.x);
    min_y = std::min(min_y, s.y);
    max_y = std::max(max_y, s.y);
  }
  const double span = std::max(max_x - min_x, max_y - min_y);
  const double margin = 0.10 * std::max(span, 1e-6);
  min_x -= margin;
  min_y -= margin;
  max_x += margin;
  max_y += margin;

  char buf[256];
  std::ostringstream svg;
  std::snprintf(buf, sizeof(buf),
                "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" "
                "width=\"640\" height=\"640\" viewBox=\"%.6g %.6g %.6g %.6g\">\n",
                min_x, -max_y, max_x - min_x, max_y - min_y);
  svg << buf;
  // Y grows upward in the plane; flip into SVG's downward axis once here so
  // every coordinate below is written in plain plane units.
  svg << "<g transform=\"scale(1,-1)\">\n";

  const double stroke = std::max(max_x - min_x, max_y - min_y) / 320.0;
  std::snprintf(buf, sizeof(buf),
                "<circle cx=\"0\" cy=\"0\" r=\"%.17g\" fill=\"none\" stroke=\"black\" "
                "stroke-width=\"%.4g\" stroke-dasharray=\"%.4g %.4g\"/>\n",
                params.r, stroke, 4 * stroke, 3 * stroke);
  svg << buf;
  std::snprintf(buf, sizeof(buf),
                "<circle cx=\"0\" cy=\"0\" r=\"%.4g\" fill=\"red\"/>\n", 2.2 * stroke);
  svg << buf;

  svg << "<polyline fill=\"none\" stroke=\"blue\" stroke-width=\"" << 1.4 * stroke
      << "\" points=\"";
  for (size_t i = 0; i < samples.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%s%.17g,%.17g", i ? " " : "", samples[i].second.x,
                  samples[i].second.y);
    svg << buf;
  }
  svg << "\"/>\n";

  // Laser direction ticks at regular intervals.
  const size_t tick_every = std::max<size_t>(1, samples.size() / 24);
  const double tick_len = 0.35 * params.r;
  for (size_t i = 0; i < samples.size(); i += tick_every) {
    const State& s = samples[i].second;
    std::snprintf(buf, sizeof(buf),
                  "<line x1=\"%.17g\" y1=\"%.17g\" x2=\"%.17g\" y2=\"%.17g\" "
                  "stroke=\"goldenrod\" stroke-width=\"%.4g\"/>\n",
                  s.x, s.y, s.x + tick_len * std::cos(s.psi),
                  s.y + tick_len * std::sin(s.psi), 0.8 * stroke);
    svg << buf;
  }

  const State& first = samples.front().second;
  const State& last = samples.back().second;
  std::snprintf(buf, sizeof(buf),
                "<circle cx=\"%.17g\" cy=\"%.17g\" r=\"%.4g\" fill=\"green\"/>\n",
                first.x, first.y, 2.2 * stroke);
  svg << buf;
  std::snprintf(buf, sizeof(buf),
                "<circle cx=\"%.17g\" cy=\"%.17g\" r=\"%.4g\" fill=\"blue\"/>\n",
                last.x, last.y, 2.2 * stroke);
  svg << buf;

  svg << "</g>\n</svg>\n";
  return svg.str();
}

}  // namespace dublaser
