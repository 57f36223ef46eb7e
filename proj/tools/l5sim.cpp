// l5sim: validate, run and compare overlay scenarios.
//
// Exit codes: 0 ok, 1 invalid config or run fault, 2 usage or I/O error,
// 3 topology mismatch in compare.

#include "l5/error.hpp"
#include "l5/report.hpp"
#include "l5/scenario.hpp"
#include "l5/simulator.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace l5;

namespace {

std::string
slurp(const std::string& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int
cmd_validate(const std::string& file)
{
  auto v = scenario::validate_file(file);
  if (v.diagnostics.empty()) {
    std::cout << file << ": ok (" << v.config->name << ", " << v.config->anchors.size()
              << " anchors, " << v.config->events.size() << " events)\n";
    return 0;
  }
  for (const auto& d : v.diagnostics)
    std::cout << file << ": " << d.path << ": " << d.message << "\n";
  return 1;
}

fs::path
default_out(const scenario::ScenarioConfig& cfg)
{
  fs::path dir = ".";
  if (const char* env = std::getenv("L5SIM_OUT_DIR"); env && *env)
    dir = env;
  return dir / (cfg.name + "-" + std::string(scenario::to_string(cfg.mode)) + "-" +
                std::to_string(cfg.seed) + ".json");
}

int
cmd_run(const std::string& file, std::optional<std::uint64_t> seed,
        const std::optional<std::string>& mode, const std::optional<std::string>& out)
{
  auto cfg = scenario::load_file(file);
  if (seed)
    cfg.seed = *seed;
  if (mode)
    cfg.mode = *scenario::parse_mode(*mode);

  auto result = simnet::run_scenario(cfg);
  fs::path path = out ? fs::path(*out) : default_out(cfg);
  if (path.has_parent_path())
    fs::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os)
    throw std::runtime_error("cannot write " + path.string());
  os << report::to_json_text(result);
  os.close();

  const auto& s = result.summary;
  const auto& f = result.faults;
  char line[512];
  std::snprintf(line, sizeof line,
                "%s mode=%s seed=%llu throughput=%.3f Mbps potential=%.3f Mbps "
                "fraction=%.4f residual_fraction=%.4f l3_violations=%llu trace=%s -> %s",
                result.scenario.c_str(), result.mode.c_str(),
                static_cast<unsigned long long>(result.seed), s.throughput_mbps, s.potential_mbps,
                s.potential_fraction, s.residual_fraction,
                static_cast<unsigned long long>(f.l3_violations), result.trace_hash.c_str(),
                path.string().c_str());
  std::cout << line << "\n";
  return f.l3_violations + f.causality_violations == 0 ? 0 : 1;
}

int
cmd_compare(const std::string& a, const std::string& b, bool as_json,
            const std::optional<std::string>& out)
{
  auto c = report::compare(slurp(a), slurp(b));
  if (out) {
    std::ofstream os(*out, std::ios::binary);
    if (!os)
      throw std::runtime_error("cannot write " + *out);
    os << c.json;
  }
  std::cout << (as_json ? c.json : c.table);
  return 0;
}

}  // namespace

int
main(int argc, char** argv)
{
  CLI::App app{"Session-layer overlay simulator"};
  app.require_subcommand(1);

  std::string file;
  auto* validate = app.add_subcommand("validate", "Check a scenario file");
  validate->add_option("file", file, "Scenario JSON")->required();

  std::optional<std::uint64_t> seed;
  std::optional<std::string> mode;
  std::optional<std::string> out;
  auto* run = app.add_subcommand("run", "Simulate a scenario and write a metrics report");
  run->add_option("file", file, "Scenario JSON")->required();
  run->add_option("--seed", seed, "Override the scenario seed");
  run->add_option("--mode", mode, "Override the routing mode")
    ->check(CLI::IsMember({"baseline", "l5"}));
  run->add_option("--out", out, "Report path (default $L5SIM_OUT_DIR/<name>-<mode>-<seed>.json)");

  std::string a, b;
  bool as_json = false;
  std::optional<std::string> cmp_out;
  auto* compare = app.add_subcommand("compare", "Compare two metrics reports");
  compare->add_option("a", a, "First report")->required();
  compare->add_option("b", b, "Second report")->required();
  compare->add_flag("--json", as_json, "Print JSON instead of a table");
  compare->add_option("--out", cmp_out, "Also write the comparison JSON here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*validate)
      return cmd_validate(file);
    if (*run)
      return cmd_run(file, seed, mode, out);
    return cmd_compare(a, b, as_json, cmp_out);
  }
  catch (const Error& e) {
    std::cerr << "l5sim: " << e.what() << "\n";
    if (e.code() == ErrorCode::TopologyMismatch)
      return 3;
    if (e.code() == ErrorCode::ConfigInvalid || e.code() == ErrorCode::ParseError)
      return 1;
    return 2;
  }
  catch (const std::exception& e) {
    std::cerr << "l5sim: " << e.what() << "\n";
    return 2;
  }
}
