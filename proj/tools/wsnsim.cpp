// wsnsim command line: run, compare, validate.
#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "wsnsim/network.hpp"
#include "wsnsim/parallel.hpp"
#include "wsnsim/report.hpp"
#include "wsnsim/scenario.hpp"

namespace fs = std::filesystem;
using namespace wsnsim;

namespace {

enum Exit { kOk = 0, kConfig = 1, kInvariant = 2, kIo = 3 };

ScenarioConfig load(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot read " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_scenario(ss.str());
}

struct ModeSpec {
  std::string label;
  DiscoveryMode mode;
  MacMode mac;
};

ModeSpec parse_mode_spec(const std::string& s) {
  const auto plus = s.find('+');
  const std::string routing = s.substr(0, plus);
  auto mode = parse_discovery_mode(routing);
  if (!mode) throw ConfigError("--modes", "unknown mode '" + s + "'");
  MacMode mac = MacMode::kHmac;
  if (plus != std::string::npos) {
    const std::string m = s.substr(plus + 1);
    if (m == "hmac") {
      mac = MacMode::kHmac;
    } else if (m == "always_on") {
      mac = MacMode::kAlwaysOn;
    } else {
      throw ConfigError("--modes", "unknown MAC '" + m + "'");
    }
  }
  return {s, *mode, mac};
}

void print_summary(const std::string& label, std::uint64_t seed, const MetricsReport& r) {
  std::printf("%s seed=%llu sent=%zu delivered=%zu dropped=%zu in_flight=%zu pdr=%s energy=%.6f J\n", label.c_str(),
              static_cast<unsigned long long>(seed), r.sent, r.delivered, r.dropped, r.in_flight,
              r.pdr ? std::to_string(*r.pdr).c_str() : "null", r.total_joules);
}

int guarded(const std::function<void()>& body) {
  try {
    body();
    return kOk;
  } catch (const SyntaxError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfig;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfig;
  } catch (const InvariantViolation& e) {
    std::fprintf(stderr, "invariant violation at %s\n", e.what());
    return kInvariant;
  } catch (const IoError& e) {
    std::fprintf(stderr, "i/o error: %s\n", e.what());
    return kIo;
  } catch (const fs::filesystem_error& e) {
    std::fprintf(stderr, "i/o error: %s\n", e.what());
    return kIo;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deterministic wireless sensor network simulator"};
  app.require_subcommand(1);

  std::string scenario;
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::size_t seeds = 1;
  bool check = false;
  bool trace = false;
  std::string format = "json";
  std::string out = ".";
  std::vector<std::string> modes = {"aomdv+hmac", "aomdv+always_on", "dsr+always_on", "hello", "disco"};

  auto* run = app.add_subcommand("run", "Run a scenario (optionally over a seed sweep)");
  run->add_option("scenario", scenario, "Scenario file")->required();
  run->add_option("--seed", seed, "Override the scenario seed")->each([&](const std::string&) { seed_given = true; });
  run->add_option("--seeds", seeds, "Number of consecutive seeds to sweep")->check(CLI::PositiveNumber);
  run->add_flag("--check", check, "Run invariant checkers after every mutation");
  run->add_flag("--trace", trace, "Write the line-per-event trace");
  run->add_option("--format", format, "Report format")->check(CLI::IsMember({"json", "csv"}));
  run->add_option("--out", out, "Output directory");

  auto* cmp = app.add_subcommand("compare", "Run one scenario under several modes side by side");
  cmp->add_option("scenario", scenario, "Scenario file")->required();
  cmp->add_option("--modes", modes, "Modes such as aomdv+hmac, dsr+always_on, hello, disco");
  cmp->add_option("--seed", seed, "Override the scenario seed")->each([&](const std::string&) { seed_given = true; });
  cmp->add_flag("--check", check, "Run invariant checkers after every mutation");
  cmp->add_option("--out", out, "Output directory for per-mode JSON reports");

  auto* val = app.add_subcommand("validate", "Parse and validate a scenario, printing the normalized form");
  val->add_option("scenario", scenario, "Scenario file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kConfig;
  }

  if (val->parsed()) {
    return guarded([&] { std::fputs(emit_scenario(load(scenario)).c_str(), stdout); });
  }

  const std::string stem = fs::path(scenario).stem().string();

  if (run->parsed()) {
    return guarded([&] {
      ScenarioConfig cfg = load(scenario);
      if (seed_given) cfg.seed = seed;
      fs::create_directories(out);
      const RunOptions opt{check, trace};
      std::vector<std::uint64_t> seed_list;
      for (std::size_t i = 0; i < seeds; ++i) seed_list.push_back(cfg.seed + i);
      auto runs = seeds == 1 ? std::vector<RunOutput>{} : sweep_parallel(cfg, seed_list, opt);
      if (seeds == 1) runs.push_back(run_scenario(cfg, opt));

      std::vector<MetricsReport> reports;
      for (std::size_t i = 0; i < runs.size(); ++i) {
        const std::string base = seeds == 1 ? stem : stem + "_seed" + std::to_string(seed_list[i]);
        const auto& r = runs[i].report;
        if (format == "json") {
          write_file(fs::path(out) / (base + ".json"), report_json(r, stem, seed_list[i]));
        } else {
          write_file(fs::path(out) / (base + ".csv"), report_csv(r));
        }
        if (trace) write_file(fs::path(out) / (base + ".trace"), trace_text(runs[i].trace));
        print_summary(stem, seed_list[i], r);
        reports.push_back(r);
      }
      if (seeds > 1) {
        const auto agg = aggregate(reports);
        if (format == "json") {
          write_file(fs::path(out) / (stem + "_aggregate.json"), aggregate_json(agg, reports.size()));
        } else {
          write_file(fs::path(out) / (stem + "_aggregate.csv"), aggregate_csv(agg));
        }
      }
    });
  }

  return guarded([&] {
    const ScenarioConfig base = load(scenario);
    std::vector<std::pair<std::string, MetricsReport>> table;
    for (const auto& m : modes) {
      const ModeSpec spec = parse_mode_spec(m);
      ScenarioConfig cfg = base;
      if (seed_given) cfg.seed = seed;
      cfg.mode = spec.mode;
      cfg.mac.mode = spec.mac;
      validate_scenario(cfg);
      auto res = run_scenario(cfg, RunOptions{check, false});
      if (cmp->count("--out") > 0) {
        fs::create_directories(out);
        write_file(fs::path(out) / (stem + "_" + spec.label + ".json"), report_json(res.report, stem, cfg.seed));
      }
      table.emplace_back(spec.label, std::move(res.report));
    }
    std::fputs(comparison_table(table).c_str(), stdout);
  });
}
