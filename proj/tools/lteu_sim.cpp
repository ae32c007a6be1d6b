// lteu-sim: command-line front end.
//
// Exit codes: 0 success, 1 runtime or configuration error, 2 usage error.

#include <lteu/events_csv.hpp>
#include <lteu/scenario.hpp>

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <numeric>

namespace {

using namespace lteu;

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error
{
  using std::runtime_error::runtime_error;
};

std::optional<std::uint64_t>
env_seed()
{
  const char* raw = std::getenv("HETNET_SEED");
  if (raw == nullptr || *raw == '\0')
    {
      return std::nullopt;
    }
  char* end = nullptr;
  errno = 0;
  const unsigned long long v = std::strtoull(raw, &end, 10);
  if (errno != 0 || *end != '\0' || *raw == '-')
    {
      throw UsageError(std::string("HETNET_SEED is not an unsigned integer: '") + raw + "'");
    }
  return v;
}

/// --seed beats the file, the file beats HETNET_SEED, and 1 is the last resort.
std::uint64_t
resolve_seed(const std::optional<std::uint64_t>& flag, const engine::ScenarioConfig& cfg)
{
  if (flag)
    {
      return *flag;
    }
  if (cfg.seed)
    {
      return *cfg.seed;
    }
  return env_seed().value_or(1);
}

engine::ScenarioConfig
load_config(const std::string& path, const std::vector<std::string>& overrides)
{
  auto cfg = path.empty() ? engine::ScenarioConfig{} : scenario::load_scenario_file(path);
  for (const auto& o : overrides)
    {
      scenario::apply_override(cfg, o);
    }
  return cfg;
}

template<typename Fn>
void
with_output(const std::string& path, Fn&& write)
{
  if (path.empty() || path == "-")
    {
      write(std::cout);
      return;
    }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    {
      throw Error("cannot open output file '" + path + "'");
    }
  write(out);
}

struct RunArgs
{
  std::string config;
  std::vector<std::string> overrides;
  std::string output;
  std::optional<std::uint64_t> seed;
};

int
cmd_run(const RunArgs& a)
{
  auto cfg = load_config(a.config, a.overrides);
  cfg.seed = resolve_seed(a.seed, cfg);
  const auto result = engine::run_scenario(cfg);
  with_output(a.output.empty() ? cfg.output_path : a.output,
              [&](std::ostream& out) { csv::emit_events_csv(result.events, out); });

  const auto total = result.metrics.aggregate();
  std::fprintf(stderr,
               "seed %llu: %d handovers (macro-macro %d, macro-lteu %d, lteu-lteu %d, lteu-macro %d), "
               "%d ping-pong, %d temp requests, %d temp grants, time in microcell %.4f\n",
               static_cast<unsigned long long>(result.seed), total.handover_total(),
               total.handovers_of(handover::Scenario::macro_macro), total.handovers_of(handover::Scenario::macro_lteu),
               total.handovers_of(handover::Scenario::lteu_lteu), total.handovers_of(handover::Scenario::lteu_macro),
               total.pingpong, total.temp_requests, total.temp_grants, total.time_in_microcell());
  return 0;
}

int
cmd_coexist(const RunArgs& a)
{
  auto cfg = load_config(a.config, a.overrides);
  const std::uint64_t base = resolve_seed(a.seed, cfg);
  std::vector<std::uint64_t> seeds(static_cast<std::size_t>(cfg.coexist_seeds));
  std::iota(seeds.begin(), seeds.end(), base);
  const auto rows = coexist::coexist_sweep(cfg.coexist, seeds);
  with_output(a.output, [&](std::ostream& out) { csv::emit_coexist_csv(rows, out); });
  return 0;
}

// Short names accepted by `fuzzy --input`.
const std::map<std::string, std::string, std::less<>>&
input_aliases()
{
  static const std::map<std::string, std::string, std::less<>> aliases{
    {"sinr", std::string(fuzzy::var::sinr)},       {"velocity", std::string(fuzzy::var::velocity)},
    {"auth", std::string(fuzzy::var::auth)},       {"latency", std::string(fuzzy::var::latency)},
    {"battery", std::string(fuzzy::var::battery)}, {"load", std::string(fuzzy::var::load)},
  };
  return aliases;
}

struct FuzzyArgs
{
  std::vector<std::string> inputs;
  std::string config;
  std::vector<std::string> overrides;
  std::optional<double> threshold;
};

int
cmd_fuzzy(const FuzzyArgs& a)
{
  const auto cfg = load_config(a.config, a.overrides);
  const auto rb = engine::build_rule_base(cfg);

  std::map<std::string, double, std::less<>> crisp;
  for (const auto& item : a.inputs)
    {
      const auto eq = item.find('=');
      if (eq == std::string::npos)
        {
          throw UsageError("--input expects name=value, got '" + item + "'");
        }
      std::string name = item.substr(0, eq);
      const std::string value = item.substr(eq + 1);
      if (auto it = input_aliases().find(name); it != input_aliases().end())
        {
          name = it->second;
        }
      double v = 0.0;
      if (name == fuzzy::var::latency && (value == "rt" || value == "nrt"))
        {
          v = value == "rt" ? cfg.latency.real_time_ms : cfg.latency.non_real_time_ms;
        }
      else
        {
          std::size_t used = 0;
          try
            {
              v = std::stod(value, &used);
            }
          catch (const std::exception&)
            {
              used = 0;
            }
          if (used == 0 || used != value.size())
            {
              throw UsageError("--input " + name + ": not a number: '" + value + "'");
            }
        }
      if (!crisp.emplace(name, v).second)
        {
          throw UsageError("--input " + name + " given twice");
        }
    }
  for (const auto& var : rb.inputs())
    {
      if (!crisp.contains(var.name()))
        {
          throw UsageError("missing --input for '" + var.name() + "'");
        }
    }
  for (const auto& [name, v] : crisp)
    {
      rb.input(name); // throws for names outside the vocabulary
    }

  double value = 0.0;
  try
    {
      value = rb.infer(crisp).crisp;
    }
  catch (const fuzzy::NoRuleFired&)
    {
      value = 0.0;
    }
  const double threshold = a.threshold.value_or(cfg.handover.fuzzy_threshold);
  std::printf("%s\n", csv::format_fixed4(value).c_str());
  std::fprintf(stderr, "%s (threshold %.4f)\n", value >= threshold ? "handoff" : "no_handoff", threshold);
  return 0;
}

struct GridArgs
{
  std::string config;
  std::vector<std::string> overrides;
  std::optional<int> n_macro;
  std::optional<double> radius;
  std::string output;
};

int
cmd_grid(const GridArgs& a)
{
  auto cfg = load_config(a.config, a.overrides);
  const auto grid = topology::HexGrid::build(a.n_macro.value_or(cfg.n_macro), a.radius.value_or(cfg.radio.cell_radius_m),
                                             cfg.radio.macro_tx_dbm);
  with_output(a.output, [&](std::ostream& out) { csv::emit_grid_csv(grid.macro_sites(), out); });
  return 0;
}

} // namespace

int
main(int argc, char** argv)
{
  CLI::App app{"LTE-U microcell handover and coexistence simulator"};
  app.require_subcommand(1);

  RunArgs run_args;
  auto* run = app.add_subcommand("run", "Run a scenario and write the event CSV");
  run->add_option("-c,--config", run_args.config, "Scenario file")->required()->check(CLI::ExistingFile);
  run->add_option("--set", run_args.overrides, "Override section.key=value (repeatable)");
  run->add_option("-o,--output", run_args.output, "Output CSV path, '-' for stdout");
  run->add_option("--seed", run_args.seed, "Seed; beats the file and HETNET_SEED");

  RunArgs coexist_args;
  auto* coexist_cmd = app.add_subcommand("coexist", "Run the coexistence sweep and write its CSV");
  coexist_cmd->add_option("-c,--config", coexist_args.config, "Scenario file with a [coexist] section")
    ->required()
    ->check(CLI::ExistingFile);
  coexist_cmd->add_option("--set", coexist_args.overrides, "Override section.key=value (repeatable)");
  coexist_cmd->add_option("-o,--output", coexist_args.output, "Output CSV path");
  coexist_cmd->add_option("--seed", coexist_args.seed, "First seed of the sweep");

  FuzzyArgs fuzzy_args;
  auto* fuzzy_cmd = app.add_subcommand("fuzzy", "Evaluate the fuzzy handoff decider on one input vector");
  fuzzy_cmd
    ->add_option("-i,--input", fuzzy_args.inputs,
                 "name=value; names: sinr, velocity, auth, latency (ms, rt or nrt), battery, load")
    ->required();
  fuzzy_cmd->add_option("-c,--config", fuzzy_args.config, "Scenario file for rules and terms")
    ->check(CLI::ExistingFile);
  fuzzy_cmd->add_option("--set", fuzzy_args.overrides, "Override section.key=value (repeatable)");
  fuzzy_cmd->add_option("--threshold", fuzzy_args.threshold, "Decision threshold");

  GridArgs grid_args;
  auto* grid_cmd = app.add_subcommand("grid", "Print macro site coordinates as CSV");
  grid_cmd->add_option("-c,--config", grid_args.config, "Scenario file")->check(CLI::ExistingFile);
  grid_cmd->add_option("--set", grid_args.overrides, "Override section.key=value (repeatable)");
  grid_cmd->add_option("--n-macro", grid_args.n_macro, "Number of macro sites");
  grid_cmd->add_option("--radius", grid_args.radius, "Cell radius in metres");
  grid_cmd->add_option("-o,--output", grid_args.output, "Output CSV path");

  try
    {
      app.parse(argc, argv);
    }
  catch (const CLI::CallForHelp& e)
    {
      return app.exit(e);
    }
  catch (const CLI::ParseError& e)
    {
      app.exit(e);
      return kExitUsage;
    }

  try
    {
      if (run->parsed())
        {
          return cmd_run(run_args);
        }
      if (coexist_cmd->parsed())
        {
          return cmd_coexist(coexist_args);
        }
      if (fuzzy_cmd->parsed())
        {
          return cmd_fuzzy(fuzzy_args);
        }
      return cmd_grid(grid_args);
    }
  catch (const UsageError& e)
    {
      std::cerr << "usage error: " << e.what() << '\n';
      return kExitUsage;
    }
  catch (const std::exception& e)
    {
      std::cerr << "error: " << e.what() << '\n';
      return kExitRuntime;
    }
}
