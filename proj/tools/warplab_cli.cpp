// Scenario runner and per-operation command line for the warped-metric
// laboratory. Subcommands map onto the library operations; `scenario`
// executes an operation list from a config file.

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <sstream>

#include "warplab/scenario.hpp"

using namespace warplab;

namespace {

struct CommonArgs {
  std::string fixture = "fix-a";
  std::string config_path;
  std::string scale;
  long long level = -1;
  long long radius = -1;
  std::string output_dir;
  std::string format = "json";
  bool use_float = false;
  double tolerance = 1e-9;
  // torus / stabilizer / window specifics
  long long dim = -1;
  long long denominator = -1;
  std::string coprime;
  long long power = -1;
  long long window = -1;
  std::string point;
  std::string input_path;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--fixture", args.fixture,
                  "built-in fixture: fix-a, fix-b, fix-c, fix-d");
  cmd->add_option("--config", args.config_path, "config file with a [fixture] table");
  cmd->add_option("--scale", args.scale, "scale s (rational, e.g. 4 or 1/2)");
  cmd->add_option("--level", args.level, "chain level n");
  cmd->add_option("--radius", args.radius, "ball or cap radius r");
  cmd->add_option("--output", args.output_dir, "output directory");
  cmd->add_option("--format", args.format, "json | csv | both");
  cmd->add_flag("--float", args.use_float, "float mode (exact is the default)");
  cmd->add_flag("!--exact", args.use_float, "exact mode (default)");
  cmd->add_option("--tol", args.tolerance, "float-mode comparison tolerance");
  cmd->add_option("--dim", args.dim, "torus dimension (2 or 3)");
  cmd->add_option("--denominator", args.denominator, "torus denominator q");
  cmd->add_option("--coprime", args.coprime, "coprime list q1,q2[,q3]");
  cmd->add_option("--power", args.power, "stabilizer power m");
  cmd->add_option("--window", args.window, "exponential window W");
  cmd->add_option("--x", args.point, "torus point, e.g. 1/2,1/3");
  cmd->add_option("--input", args.input_path, "edge-list input file");
}

std::string default_output_dir(const CommonArgs& args) {
  if (!args.output_dir.empty()) return args.output_dir;
  if (const char* env = std::getenv("WARPLAB_OUTPUT_DIR")) return env;
  return "warplab-out";
}

ConfigTable params_from_args(const CommonArgs& args, const CLI::App* cmd) {
  ConfigTable params;
  auto put_rat = [&](const std::string& key, const Rat& value) {
    ConfigValue v;
    v.kind = ConfigValue::Kind::rational;
    v.rational = value;
    params.values[key] = v;
  };
  if (!args.scale.empty()) put_rat("scale", parse_rat(args.scale));
  if (args.level >= 0) put_rat("level", Rat(args.level));
  if (args.radius >= 0) {
    put_rat("radius", Rat(args.radius));
    put_rat("r_max", Rat(args.radius));
  }
  if (cmd->get_name() == "hr") {
    ConfigValue v;
    v.kind = ConfigValue::Kind::boolean;
    v.boolean = true;
    params.values["cone"] = v;
  }
  if (args.power >= 0) put_rat("power", Rat(args.power));
  if (args.window >= 0) put_rat("window", Rat(args.window));
  if (!args.input_path.empty()) {
    ConfigValue v;
    v.kind = ConfigValue::Kind::string;
    v.str = args.input_path;
    params.values["input"] = v;
  }
  if (!args.coprime.empty()) {
    ConfigValue list;
    list.kind = ConfigValue::Kind::list;
    std::istringstream in(args.coprime);
    std::string token;
    while (std::getline(in, token, ',')) {
      ConfigValue v;
      v.kind = ConfigValue::Kind::rational;
      v.rational = parse_rat(token);
      list.items.push_back(std::move(v));
    }
    params.values["coprime"] = list;
  }
  return params;
}

ResolvedFixture fixture_from_args(const CommonArgs& args) {
  if (!args.config_path.empty()) {
    auto cfg = Config::parse_file(args.config_path);
    auto scenario = ScenarioConfig::from_config(cfg);
    return scenario.fixture;
  }
  ConfigTable t;
  auto put = [&](const std::string& key, ConfigValue v) { t.values[key] = std::move(v); };
  auto put_int = [&](const std::string& key, long long n) {
    ConfigValue v;
    v.kind = ConfigValue::Kind::rational;
    v.rational = Rat(n);
    put(key, std::move(v));
  };
  ConfigValue kind;
  kind.kind = ConfigValue::Kind::string;
  kind.str = args.fixture;
  if (args.dim >= 0 || args.denominator >= 0) kind.str = "torus";
  put("kind", kind);
  if (args.level >= 0) put_int("level", args.level);
  if (args.dim >= 0) put_int("dim", args.dim);
  if (args.denominator >= 0) put_int("denominator", args.denominator);
  if (args.window >= 0) put_int("window", args.window);
  if (!args.point.empty()) {
    ConfigValue list;
    list.kind = ConfigValue::Kind::list;
    std::istringstream in(args.point);
    std::string token;
    while (std::getline(in, token, ',')) {
      ConfigValue v;
      v.kind = ConfigValue::Kind::rational;
      v.rational = parse_rat(token);
      list.items.push_back(std::move(v));
    }
    put("x", std::move(list));
  }
  return resolve_fixture(t);
}

int finish(RunReport&& report, const CommonArgs& args) {
  auto written = emit_report(report, args.format, default_output_dir(args));
  for (const auto& op : report.operations)
    std::cout << (op.status == "pass" ? "[PASS] " : "[" + op.status + "] ")
              << op.op << "\n";
  for (const auto& path : written) std::cout << "wrote " << path << "\n";
  return report.all_passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"warped-metric laboratory"};
  app.require_subcommand(1);

  const std::vector<std::string> op_names = {
      "warp",       "slice", "delta",      "box",  "spectral",
      "embed-box",  "hr",    "stabilizer", "orbit", "embed-cone"};
  std::map<std::string, CommonArgs> arg_sets;
  for (const auto& name : op_names) {
    auto* cmd = app.add_subcommand(name, "run the " + name + " operation");
    add_common(cmd, arg_sets[name]);
  }
  CommonArgs scenario_args;
  auto* scenario_cmd =
      app.add_subcommand("scenario", "run an operation list from a config file");
  add_common(scenario_cmd, scenario_args);

  CLI11_PARSE(app, argc, argv);

  try {
    auto* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    if (name == "scenario") {
      if (scenario_args.config_path.empty())
        throw std::runtime_error("scenario requires --config PATH");
      auto cfg = Config::parse_file(scenario_args.config_path);
      auto scenario = ScenarioConfig::from_config(cfg);
      if (scenario_args.use_float) scenario.exact = false;
      return finish(run_scenario(scenario), scenario_args);
    }
    const CommonArgs& args = arg_sets[name];
    auto fixture = fixture_from_args(args);
    RunReport report;
    report.fixture = fixture.name;
    report.operations.push_back(run_operation(
        name, params_from_args(args, sub), fixture, ResourceCaps{}));
    return finish(std::move(report), args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
