// Command-line runner: bergman <verify|commutator|cover|constants|report> [options]
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "bergman/cli/config.hpp"
#include "bergman/cli/experiments.hpp"

namespace {

using namespace bergman;
using namespace bergman::cli;

constexpr int kConfigErrorStatus = 3;

struct Overrides {
  std::string config;
  std::optional<std::size_t> n;
  std::optional<std::uint64_t> seed;
  std::optional<int> degree;
  std::optional<std::string> out;
  std::optional<std::string> prefix;
  std::optional<unsigned> threads;
};

void add_overrides(CLI::App* app, Overrides& o) {
  app->add_option("-c,--config", o.config, "JSON config file")->check(CLI::ExistingFile);
  app->add_option("--n", o.n, "Dimension");
  app->add_option("--seed", o.seed, "Master seed (re-derives unpinned seeds)");
  app->add_option("--degree", o.degree, "Polynomial degree (constants: the only degree)");
  app->add_option("--out", o.out, "Output directory");
  app->add_option("--prefix", o.prefix, "Output file prefix");
  app->add_option("--threads", o.threads, "Worker threads");
}

ExperimentConfig build_config(ExperimentKind kind, const Overrides& o) {
  ExperimentConfig c;
  bool kind_given = false;
  if (!o.config.empty()) {
    std::ifstream in(o.config);
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::parse_error& e) {
      throw ConfigError("config", std::string("invalid JSON: ") + e.what());
    }
    kind_given = j.is_object() && j.contains("experiment");
    c = config_from_json(j);
  }
  if (kind_given && c.kind != kind) {
    throw ConfigError("experiment", "config is for '" + to_string(c.kind) + "', not '" + to_string(kind) + "'");
  }
  c.kind = kind;
  if (o.n) c.n = *o.n;
  if (o.seed) {
    c.seed = *o.seed;
    c.polynomial.seed.reset();
    c.cover.seed.reset();
  }
  if (o.degree) {
    c.polynomial.degree = *o.degree;
    c.constants.degrees = {*o.degree};
  }
  if (o.out) c.output.dir = *o.out;
  if (o.prefix) c.output.prefix = *o.prefix;
  if (o.threads) c.threads = *o.threads;
  c.normalize();
  return c;
}

int run_experiment(ExperimentKind kind, const Overrides& o) {
  const ExperimentConfig c = build_config(kind, o);
  const RunResult r = run(c);
  std::cout << to_string(kind) << ": " << r.records << " records, " << r.failures << " failed\n";
  for (const auto& f : r.files) std::cout << "  wrote " << f << '\n';
  if (!r.message.empty()) std::cerr << r.message << '\n';
  return r.status;
}

int run_report(const std::string& input, const std::string& output) {
  std::ifstream in(input);
  if (!in) throw ConfigError("report", "cannot open '" + input + "'");
  const auto rows = summarize_jsonl(in);
  if (output.empty()) {
    write_summary_csv(std::cout, rows);
  } else {
    std::ofstream out(output);
    if (!out) throw ConfigError("report", "cannot write '" + output + "'");
    write_summary_csv(out, rows);
  }
  bool all = true;
  for (const auto& row : rows) all = all && row.passed == row.count;
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact and tolerance-controlled checks for weighted Bergman-space inequalities"};
  app.require_subcommand(1);

  struct Sub {
    ExperimentKind kind;
    const char* name;
    const char* help;
  };
  const Sub subs[] = {
      {ExperimentKind::verify, "verify", "Run the inequality and identity suite"},
      {ExperimentKind::commutator, "commutator", "Singular values of truncated submodule commutators"},
      {ExperimentKind::cover, "cover", "Greedy box cover of a sampled shell"},
      {ExperimentKind::constants, "constants", "Empirical constants of the shell bounds"},
  };
  Overrides overrides[4];
  CLI::App* apps[4];
  for (int i = 0; i < 4; ++i) {
    apps[i] = app.add_subcommand(subs[i].name, subs[i].help);
    add_overrides(apps[i], overrides[i]);
  }
  std::string report_in, report_out;
  auto* report = app.add_subcommand("report", "Summary CSV from a JSON-lines report");
  report->add_option("input", report_in, "JSON-lines file")->required();
  report->add_option("-o,--out", report_out, "CSV path (default: stdout)");

  CLI11_PARSE(app, argc, argv);
  try {
    for (int i = 0; i < 4; ++i) {
      if (apps[i]->parsed()) return run_experiment(subs[i].kind, overrides[i]);
    }
    return run_report(report_in, report_out);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigErrorStatus;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
