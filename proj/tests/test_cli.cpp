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


#include <cstdio>
#include <filesystem>
#include <fstream>
#include <locale>
#include <sstream>

#include "probtele/cli.hpp"
#include "probtele/errors.hpp"
#include "test_util.hpp"

namespace probtele::cli {
namespace {

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    std::vector<std::string> cells;
    std::istringstream cs(line);
    std::string cell;
    while (std::getline(cs, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

// Decimal comma and thousands grouping, to catch locale-sensitive formatting.
struct CommaPunct : std::numpunct<char> {
  char do_decimal_point() const override { return ','; }
  char do_thousands_sep() const override { return '.'; }
  std::string do_grouping() const override { return "\3"; }
};

class TempFile {
 public:
  explicit TempFile(const std::string& contents)
      : path_(std::filesystem::temp_directory_path() /
              ("probtele_cli_" + std::to_string(reinterpret_cast<std::uintptr_t>(this)) + ".json")) {
    std::ofstream(path_) << contents;
  }
  ~TempFile() { std::filesystem::remove(path_); }
  std::string path() const { return path_.string(); }

 private:
  std::filesystem::path path_;
};

TEST_SUITE("cli") {

TEST_CASE("run reports the exact success probability") {
  const CliResult r = cli({"--format", "json", "run", "--scheme", "typical", "--b2", "0.25", "--alpha",
                           "0.6", "--beta", "0.8", "--trials", "20000", "--seed", "42"});
  REQUIRE(r.code == kExitOk);
  const Json j = Json::parse(r.out);
  CHECK(j["exact_success"].get<double>() == 0.5);
  CHECK(j["analytic_success"].get<double>() == 0.5);
  CHECK(j["per_outcome"].size() == 8);
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  CHECK(keys == std::vector<std::string>{"scheme", "channels", "input", "trials", "seed", "exact_success",
                                         "analytic_success", "empirical_success",
                                         "mean_success_fidelity", "per_outcome"});
  CHECK(j["channels"][0]["a2"].get<double>() == 0.75);
}

TEST_CASE("relay run") {
  const CliResult r = cli({"--format", "json", "--trials", "2000", "run", "--scheme", "relay-assistant",
                           "--d2", "0.3", "--f2", "0.2"});
  REQUIRE(r.code == kExitOk);
  CHECK(Json::parse(r.out)["analytic_success"].get<double>() == 0.24);
  CHECK(Json::parse(r.out)["exact_success"].get<double>() == 0.24);
}

TEST_CASE("table and csv output") {
  const CliResult t = cli({"--trials", "500", "run", "--b2", "0.25"});
  REQUIRE(t.code == kExitOk);
  CHECK(t.out.find("exact success") != std::string::npos);
  CHECK(t.out.find("phi+,m0") != std::string::npos);
  const CliResult c = cli({"--format", "csv", "--trials", "500", "run", "--scheme", "novel-direct", "--b2", "0.25"});
  REQUIRE(c.code == kExitOk);
  const auto rows = csv_rows(c.out);
  REQUIRE(rows.size() == 6);
  CHECK(rows[0] == std::vector<std::string>{"label", "exact", "empirical"});
  CHECK(rows[1][0] == "M0");
  CHECK(rows[1][1] == "0.125");
}

TEST_CASE("config errors exit 1 and name the field") {
  CliResult r = cli({"run", "--scheme", "typical", "--b2", "0.6"});
  CHECK(r.code == kExitConfigError);
  CHECK(r.err.find("b2 must lie in (0, 0.5]") != std::string::npos);

  r = cli({"run", "--scheme", "nonsense", "--b2", "0.2"});
  CHECK(r.code == kExitConfigError);
  r = cli({"run", "--bogus-flag"});
  CHECK(r.code == kExitConfigError);
  r = cli({"run", "--a2", "0.3"});
  CHECK(r.code == kExitConfigError);
  CHECK(r.err.find("a2 must lie in [0.5, 1)") != std::string::npos);
  r = cli({"run", "--b2", "0.2", "--alpha", "0.6", "--beta", "0.6"});
  CHECK(r.code == kExitConfigError);
  r = cli({"run", "--scheme", "relay-endpoints", "--d2", "0.3"});
  CHECK(r.code == kExitConfigError);

  TempFile bad(R"({"scheme": "typical", "channels": [{"b2": 0.2, "c2": 1}]})");
  r = cli({"--config", bad.path(), "run"});
  CHECK(r.code == kExitConfigError);
  CHECK(r.err.find("channels[0].c2") != std::string::npos);

  TempFile both(R"({"scheme": "typical", "channels": [{"b2": 0.2, "a2": 0.8}]})");
  r = cli({"--config", both.path(), "run"});
  CHECK(r.code == kExitConfigError);
  CHECK(r.err.find("channels[0]") != std::string::npos);

  TempFile broken("{not json");
  CHECK(cli({"--config", broken.path(), "run"}).code == kExitConfigError);
  CHECK(cli({"--config", "/nonexistent/probtele.json", "run"}).code == kExitConfigError);
}

TEST_CASE("config round trip") {
  const CliResult first = cli({"--seed", "7", "--trials", "123", "run", "--scheme", "relay-endpoints", "--d2",
                               "0.3", "--d-phase", "0.25", "--f2", "0.2", "--alpha", "0.28", "--alpha-im", "0.96",
                               "--relay-novel", "direct", "--dump-config"});
  REQUIRE(first.code == kExitOk);
  TempFile file(first.out);
  const CliResult second = cli({"--config", file.path(), "run", "--dump-config"});
  REQUIRE(second.code == kExitOk);
  CHECK(first.out == second.out);

  const ScenarioConfig cfg = parse_config(Json::parse(first.out));
  CHECK(cfg.scheme == Scheme::RelayEndpointsKnow);
  CHECK(cfg.trials == 123);
  CHECK(cfg.seed == 7);
  CHECK(cfg.relay_novel == NovelVariant::Direct);
  CHECK(cfg.channels[0].b2() == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(cfg.channels[0].b_phase() == doctest::Approx(0.25).epsilon(1e-15));
  const InputQubit& in = std::get<InputQubit>(cfg.input);
  CHECK(in.alpha() == Complex(0.0, 0.0) + Complex(0.28, 0.96));
  CHECK(std::abs(in.beta()) < 1e-15);

  // Flags override the file.
  const CliResult overlay = cli({"--config", file.path(), "--seed", "8", "run", "--dump-config"});
  CHECK(Json::parse(overlay.out)["seed"] == 8);
}

TEST_CASE("random input is accepted") {
  const CliResult r = cli({"--format", "json", "--trials", "300", "run", "--scheme", "novel-circuit", "--b2",
                           "0.2", "--random-input"});
  REQUIRE(r.code == kExitOk);
  const Json j = Json::parse(r.out);
  CHECK(j["input"] == "random");
  CHECK(std::abs(j["exact_success"].get<double>() - 0.4) <= 1e-10);
}

TEST_CASE("typical sweep") {
  const CliResult r = cli({"--trials", "400", "sweep", "--scheme", "typical", "--b2-grid", "0.05:0.50:0.05"});
  REQUIRE(r.code == kExitOk);
  const auto rows = csv_rows(r.out);
  REQUIRE(rows.size() == 11);
  CHECK(rows[0] == std::vector<std::string>(kSweepColumns.begin(), kSweepColumns.end()));
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double b2 = std::stod(rows[i][0]);
    CHECK(b2 == doctest::Approx(0.05 * static_cast<double>(i)).epsilon(1e-12));
    CHECK(std::stod(rows[i][1]) == doctest::Approx(2 * b2).epsilon(1e-12));
    CHECK(std::stod(rows[i][2]) == doctest::Approx(2 * b2).epsilon(1e-10));
  }
  CHECK(rows.back()[0] == "0.5");
  CHECK(rows.back()[1] == "1");
}

TEST_CASE("relay sweep over the second channel") {
  const CliResult r =
      cli({"--trials", "200", "sweep", "--scheme", "relay-assistant", "--d2", "0.5", "--f2-grid", "0.1:0.5:0.1"});
  REQUIRE(r.code == kExitOk);
  const auto rows = csv_rows(r.out);
  REQUIRE(rows.size() == 6);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(std::stod(rows[i][1]) == doctest::Approx(2 * std::stod(rows[i][0])).epsilon(1e-12));
  }
}

TEST_CASE("sweep grid errors") {
  CHECK(cli({"sweep", "--b2-grid", "0.1:0.7:0.1"}).code == kExitConfigError);
  CHECK(cli({"sweep", "--b2-grid", "0.3:0.1:0.1"}).code == kExitConfigError);
  CHECK(cli({"sweep", "--b2-grid", "0.1:0.3"}).code == kExitConfigError);
  CHECK(cli({"sweep", "--b2-grid", "0.1:0.3:0"}).code == kExitConfigError);
  CHECK(cli({"sweep"}).code == kExitConfigError);
  CHECK_THROWS_AS(parse_grid("a:b:c"), InvalidConfig);
  CHECK(grid_points(parse_grid("0.1:0.3:0.1")) == std::vector<double>{0.1, 0.2, 0.3});
}

TEST_CASE("verify exit codes") {
  const CliResult fast = cli({"verify", "--level", "fast"});
  CHECK(fast.code == kExitOk);
  CHECK(fast.out.find("[FAIL]") == std::string::npos);
  const CliResult literal = cli({"verify", "--literal-a"});
  CHECK(literal.code == kExitVerificationFailure);
  CHECK(literal.out.find("[FAIL]") != std::string::npos);
}

TEST_CASE("output is byte-identical and locale independent") {
  const std::vector<std::string> args = {"--format", "json", "run", "--scheme", "novel-circuit", "--b2", "0.3",
                                         "--b-phase", "1.2", "--trials", "3000", "--seed", "5"};
  const CliResult a = cli(args);
  const std::locale saved = std::locale::global(std::locale(std::locale::classic(), new CommaPunct));
  const CliResult b = cli(args);
  std::ostringstream imbued;
  imbued.imbue(std::locale(std::locale::classic(), new CommaPunct));
  std::ostringstream err;
  run_cli({"--format", "csv", "sweep", "--b2-grid", "0.1:0.2:0.1", "--trials", "100"}, imbued, err);
  std::locale::global(saved);
  REQUIRE(a.code == kExitOk);
  CHECK(a.out == b.out);
  CHECK(imbued.str().find("0.1,0.2,") != std::string::npos);

  CHECK(format_number(1234567.5) == "1234567.5");
  CHECK(format_number(0.1 + 0.2) == "0.3");
  CHECK(format_number(-0.0) == "0");
  CHECK(round12(0.30000000000000004) == 0.3);
}

}  // TEST_SUITE

}  // namespace
}  // namespace probtele::cli
