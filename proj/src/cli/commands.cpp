// Copyright 2026 The probtele Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <fstream>
#include <optional>
#include <ostream>

#include <CLI11.hpp>

#include "probtele/cli.hpp"
#include "probtele/errors.hpp"
#include "probtele/verification.hpp"

namespace probtele::cli {

namespace {

struct ScenarioFlags {
  std::optional<std::string> scheme;
  std::optional<double> a2, b2, b_phase;
  std::optional<double> d2, d_phase, f2, f_phase;
  std::optional<double> alpha, alpha_im, beta, beta_im;
  bool random_input = false;
  std::optional<std::string> relay_novel;
};

struct GlobalFlags {
  std::string format = "table";
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> trials;
  std::optional<std::string> config_path;
};

void add_scenario_flags(CLI::App* cmd, ScenarioFlags& f) {
  cmd->add_option("--scheme", f.scheme,
                  "typical | novel-direct | novel-circuit | relay-assistant | relay-endpoints");
  cmd->add_option("--b2", f.b2, "|b|^2 of the channel, in (0, 0.5]");
  cmd->add_option("--a2", f.a2, "|a|^2 of the channel, in [0.5, 1)");
  cmd->add_option("--b-phase", f.b_phase, "phase of b in radians");
  cmd->add_option("--d2", f.d2, "relay: |d|^2 of the Alice-Charlie channel");
  cmd->add_option("--d-phase", f.d_phase, "relay: phase of d");
  cmd->add_option("--f2", f.f2, "relay: |f|^2 of the Charlie-Bob channel");
  cmd->add_option("--f-phase", f.f_phase, "relay: phase of f");
  cmd->add_option("--alpha", f.alpha, "real part of alpha");
  cmd->add_option("--alpha-im", f.alpha_im, "imaginary part of alpha");
  cmd->add_option("--beta", f.beta, "real part of beta");
  cmd->add_option("--beta-im", f.beta_im, "imaginary part of beta");
  cmd->add_flag("--random-input", f.random_input, "draw a Haar-random input per trial");
  cmd->add_option("--relay-novel", f.relay_novel, "circuit | direct");
}

void add_global_flags(CLI::App& app, GlobalFlags& g) {
  app.add_option("--format", g.format, "table | json | csv")
      ->check(CLI::IsMember({"table", "json", "csv"}));
  app.add_option("--seed", g.seed, "base seed for per-trial generators");
  app.add_option("--trials", g.trials, "number of Monte Carlo trials");
  app.add_option("--config", g.config_path, "JSON scenario config");
}

Json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidConfig("cannot open config file " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidConfig("config file " + path + " is not valid JSON: " + e.what());
  }
}

// Writes channel flags into channels[index], replacing a2/b2 when a magnitude is given.
void overlay_channel(Json& doc, std::size_t index, const std::optional<double>& b2,
                     const std::optional<double>& a2, const std::optional<double>& phase) {
  if (!b2 && !a2 && !phase) return;
  if (!doc.contains("channels") || !doc["channels"].is_array()) doc["channels"] = Json::array();
  Json& chans = doc["channels"];
  while (chans.size() <= index) chans.push_back(Json::object());
  Json& ch = chans[index];
  if (!ch.is_object()) ch = Json::object();
  if (b2 || a2) {
    ch.erase("a2");
    ch.erase("b2");
  }
  if (b2) ch["b2"] = *b2;
  if (a2) ch["a2"] = *a2;
  if (phase) ch["b_phase"] = *phase;
}

ScenarioConfig resolve_config(const GlobalFlags& g, const ScenarioFlags& f) {
  Json doc = g.config_path ? load_config(*g.config_path) : Json::object();
  if (!doc.is_object()) throw InvalidConfig("config must be a JSON object");
  if (f.scheme) doc["scheme"] = *f.scheme;
  if (!doc.contains("scheme")) doc["scheme"] = "typical";
  const bool relay = doc["scheme"].is_string() && is_relay(parse_scheme(doc["scheme"].get<std::string>()));

  if (relay) {
    if (f.b2 || f.a2 || f.b_phase) throw InvalidConfig("relay schemes take --d2/--f2, not --b2/--a2");
    overlay_channel(doc, 0, f.d2, std::nullopt, f.d_phase);
    overlay_channel(doc, 1, f.f2, std::nullopt, f.f_phase);
  } else {
    if (f.d2 || f.f2 || f.d_phase || f.f_phase) {
      throw InvalidConfig("--d2/--f2 apply to relay schemes only");
    }
    if (f.a2 && f.b2) throw InvalidConfig("give exactly one of --a2 / --b2");
    overlay_channel(doc, 0, f.b2, f.a2, f.b_phase);
  }

  const bool amplitude_flags = f.alpha || f.alpha_im || f.beta || f.beta_im;
  if (f.random_input && amplitude_flags) {
    throw InvalidConfig("--random-input conflicts with explicit amplitudes");
  }
  if (f.random_input) doc["input"] = "random";
  if (amplitude_flags) {
    const double are = f.alpha.value_or(0.0);
    const double aim = f.alpha_im.value_or(0.0);
    double bre = f.beta.value_or(0.0);
    // A lone real alpha fixes beta = sqrt(1 - |alpha|^2).
    if (!f.beta && !f.beta_im) bre = std::sqrt(std::max(0.0, 1.0 - are * are - aim * aim));
    doc["input"] = {{"alpha_re", are}, {"alpha_im", aim}, {"beta_re", bre},
                    {"beta_im", f.beta_im.value_or(0.0)}};
  }
  if (g.trials) doc["trials"] = *g.trials;
  if (g.seed) doc["seed"] = *g.seed;
  if (f.relay_novel) doc["relay_novel"] = *f.relay_novel;
  return parse_config(doc);
}

int cmd_run(const GlobalFlags& g, const ScenarioFlags& f, bool dump_config, std::ostream& out) {
  const ScenarioConfig cfg = resolve_config(g, f);
  if (dump_config) {
    out << config_to_json(cfg).dump(2) << "\n";
    return kExitOk;
  }
  const Report report = monte_carlo(cfg);
  if (g.format == "json") {
    out << report_to_json(report).dump(2) << "\n";
  } else if (g.format == "csv") {
    out << report_csv(report);
  } else {
    out << report_table(report);
  }
  return kExitOk;
}

int cmd_sweep(const GlobalFlags& g, const ScenarioFlags& f, const std::string& grid_text,
              std::ostream& out) {
  const std::vector<double> points = grid_points(parse_grid(grid_text));
  ScenarioFlags base = f;
  // Seed the swept channel so the base config validates; it is replaced per row.
  const bool relay = is_relay(parse_scheme(f.scheme.value_or("typical")));
  if (relay) {
    if (!base.f2) base.f2 = points.front();
  } else if (!base.b2 && !base.a2) {
    base.b2 = points.front();
  }
  ScenarioConfig cfg = resolve_config(g, base);
  const std::size_t swept = relay ? 1 : 0;
  const double phase = cfg.channels[swept].b_phase();

  Json rows = Json::array();
  std::string csv;
  for (std::size_t i = 0; i < kSweepColumns.size(); ++i) csv += (i ? "," : "") + kSweepColumns[i];
  csv += "\n";
  for (double x : points) {
    cfg.channels[swept] = ChannelParams::from_b2(x, phase);
    const Report r = monte_carlo(cfg);
    const double values[] = {x, r.analytic_success, r.exact_success, r.empirical_success,
                             r.mean_success_fidelity};
    Json row;
    for (std::size_t i = 0; i < kSweepColumns.size(); ++i) {
      csv += (i ? "," : "") + format_number(values[i]);
      row[kSweepColumns[i]] = round12(values[i]);
    }
    csv += "\n";
    rows.push_back(std::move(row));
  }
  if (g.format == "json") {
    out << rows.dump(2) << "\n";
  } else {
    out << csv;
  }
  return kExitOk;
}

int cmd_verify(const GlobalFlags& g, const std::string& level, bool literal_a, std::ostream& out) {
  VerifyOptions options;
  options.level = level == "full" ? VerifyLevel::Full : VerifyLevel::Fast;
  options.literal_a = literal_a;
  if (g.seed) options.seed = *g.seed;
  if (g.trials) options.trials = *g.trials;
  const std::vector<CheckResult> results = run_verification(options);
  if (g.format == "json") {
    Json arr = Json::array();
    for (const CheckResult& r : results) {
      arr.push_back({{"check", r.name},
                     {"verdict", r.verdict == StatVerdict::Pass   ? "pass"
                                 : r.verdict == StatVerdict::Flag ? "flag"
                                                                  : "fail"},
                     {"detail", r.detail}});
    }
    out << arr.dump(2) << "\n";
  } else {
    for (const CheckResult& r : results) {
      const char* tag = r.verdict == StatVerdict::Pass ? "[PASS]" : r.verdict == StatVerdict::Flag ? "[FLAG]" : "[FAIL]";
      out << tag << " " << r.name << ": " << r.detail << "\n";
    }
  }
  return all_passed(results) ? kExitOk : kExitVerificationFailure;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Probabilistic teleportation simulator"};
  app.require_subcommand(1);
  GlobalFlags global;
  add_global_flags(app, global);

  ScenarioFlags run_flags;
  bool dump_config = false;
  CLI::App* run = app.add_subcommand("run", "Run one scenario and print its report");
  add_scenario_flags(run, run_flags);
  run->add_flag("--dump-config", dump_config, "print the resolved config as JSON and exit");
  run->fallthrough();

  ScenarioFlags sweep_flags;
  std::string grid;
  CLI::App* sweep = app.add_subcommand("sweep", "Sweep channel entanglement, CSV output");
  add_scenario_flags(sweep, sweep_flags);
  sweep->add_option("--b2-grid,--f2-grid", grid, "start:stop:step over |b|^2 (|f|^2 for relays)")
      ->required();
  sweep->fallthrough();

  std::string level = "fast";
  bool literal_a = false;
  CLI::App* verify = app.add_subcommand("verify", "Run the invariant verification suite");
  verify->add_option("--level", level, "fast | full")->check(CLI::IsMember({"fast", "full"}));
  verify->add_flag("--literal-a", literal_a, "check the unrepaired A(a,b) block");
  verify->fallthrough();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfigError;
  }

  try {
    if (run->parsed()) return cmd_run(global, run_flags, dump_config, out);
    if (sweep->parsed()) return cmd_sweep(global, sweep_flags, grid, out);
    return cmd_verify(global, level, literal_a, out);
  } catch (const InvariantViolation& e) {
    err << "invariant violated: " << e.what() << "\n";
    return kExitVerificationFailure;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfigError;
  }
}

}  // namespace probtele::cli
