// Command-line front end: solve a scenario, run the brute-force reference,
// compare the two, or render a trajectory as SVG.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "dublaser/scenario.hpp"

namespace {

using namespace dublaser;

int error_exit_code(const Error& e) {
  switch (e.code()) {
    case Error::Code::ParseError: return 2;
    case Error::Code::NoPlanFound: return 3;
    case Error::Code::UnsupportedInitialCondition: return 3;
    default: return 1;
  }
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw Error(Error::Code::ParseError, "cannot write output: " + out_path);
  out << text;
}

struct CommonArgs {
  std::string scenario_path;
  std::string out_path;
  bool degrees = false;
  std::optional<double> oracle_resolution;
};

ScenarioFile load_scenario(const CommonArgs& args) {
  ScenarioFile sc = ScenarioFile::load(args.scenario_path, args.degrees);
  if (args.oracle_resolution) {
    sc.oracle.duration_grid_resolution = *args.oracle_resolution;
    sc.oracle.validate();
  }
  return sc;
}

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("scenario", args.scenario_path, "scenario file (key = value lines)")
      ->required();
  cmd->add_option("--out", args.out_path, "write the result document here");
  cmd->add_flag("--degrees", args.degrees, "interpret theta0/psi0 in degrees");
  cmd->add_option("--oracle-resolution", args.oracle_resolution,
                  "override the oracle duration grid resolution");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"minimum-time planner for a Dubins vehicle with a rotating laser"};
  app.require_subcommand(1);

  CommonArgs plan_args, oracle_args, compare_args, render_args;
  CLI::App* cmd_plan = app.add_subcommand("plan", "solve a scenario");
  add_common(cmd_plan, plan_args);
  CLI::App* cmd_oracle = app.add_subcommand("oracle", "run the brute-force reference");
  add_common(cmd_oracle, oracle_args);
  CLI::App* cmd_compare =
      app.add_subcommand("compare", "solve and cross-check against the reference");
  add_common(cmd_compare, compare_args);
  CLI::App* cmd_render = app.add_subcommand("render", "render the best plan as SVG");
  add_common(cmd_render, render_args);

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_plan->parsed()) {
      const ScenarioFile sc = load_scenario(plan_args);
      const SolveReport report = plan(sc.params, sc.start);
      emit(write_report(sc, report), plan_args.out_path);
    } else if (cmd_oracle->parsed()) {
      const ScenarioFile sc = load_scenario(oracle_args);
      const OracleResult res = oracle_min_time(sc.params, sc.start, sc.oracle);
      emit(write_oracle_result(sc, res), oracle_args.out_path);
    } else if (cmd_compare->parsed()) {
      const ScenarioFile sc = load_scenario(compare_args);
      SolveReport report = plan(sc.params, sc.start);
      const OracleResult res = oracle_min_time(sc.params, sc.start, sc.oracle);
      if (res.found) {
        report.oracle_time = res.time;
        report.oracle_structure =
            res.word + "|" + std::string(1, sense_symbol(res.sense));
        report.oracle_gap = report.best.t_final - res.time;
      }
      emit(write_report(sc, report), compare_args.out_path);
    } else if (cmd_render->parsed()) {
      const ScenarioFile sc = load_scenario(render_args);
      const SolveReport report = plan(sc.params, sc.start);
      const std::string path =
          render_args.out_path.empty() ? "out.svg" : render_args.out_path;
      emit(render_svg(sc.params, sc.start, report.best), path);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return error_exit_code(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
