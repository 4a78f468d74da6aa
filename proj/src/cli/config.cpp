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

#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

#include "probtele/cli.hpp"
#include "probtele/errors.hpp"

namespace probtele::cli {

namespace {

void reject_unknown_keys(const Json& obj, const std::set<std::string>& allowed, const std::string& path) {
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.contains(key)) throw InvalidConfig(path + key + ": unknown field");
  }
}

double number_field(const Json& obj, const std::string& key, const std::string& path) {
  const Json& v = obj.at(key);
  if (!v.is_number()) throw InvalidConfig(path + key + " must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw InvalidConfig(path + key + " must be finite");
  return x;
}

std::uint64_t unsigned_field(const Json& obj, const std::string& key) {
  const Json& v = obj.at(key);
  if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
    throw InvalidConfig(key + " must be a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

ChannelParams parse_channel(const Json& ch, const std::string& path) {
  if (!ch.is_object()) throw InvalidConfig(path + " must be an object");
  const std::string prefix = path + ".";
  reject_unknown_keys(ch, {"a2", "b2", "b_phase"}, prefix);
  const bool has_a = ch.contains("a2");
  const bool has_b = ch.contains("b2");
  if (has_a == has_b) throw InvalidConfig(path + ": give exactly one of a2 / b2");
  double b2 = 0.0;
  if (has_b) {
    b2 = number_field(ch, "b2", prefix);
  } else {
    const double a2 = number_field(ch, "a2", prefix);
    if (!(a2 >= 0.5 && a2 < 1.0)) throw InvalidConfig(prefix + "a2 must lie in [0.5, 1)");
    b2 = 1.0 - a2;
  }
  if (!(b2 > 0.0 && b2 <= 0.5)) throw InvalidConfig(prefix + "b2 must lie in (0, 0.5]");
  const double phase = ch.contains("b_phase") ? number_field(ch, "b_phase", prefix) : 0.0;
  try {
    return ChannelParams::from_b2(b2, phase);
  } catch (const InvalidChannel& e) {
    throw InvalidConfig(path + ": " + e.what());
  }
}

InputSpec parse_input(const Json& in) {
  if (in.is_string()) {
    if (in.get<std::string>() == "random") return RandomInput{};
    throw InvalidConfig("input must be \"random\" or an amplitude object");
  }
  if (!in.is_object()) throw InvalidConfig("input must be \"random\" or an amplitude object");
  reject_unknown_keys(in, {"alpha_re", "alpha_im", "beta_re", "beta_im"}, "input.");
  auto part = [&](const char* key) { return in.contains(key) ? number_field(in, key, "input.") : 0.0; };
  try {
    return InputQubit::from_amplitudes({part("alpha_re"), part("alpha_im")},
                                       {part("beta_re"), part("beta_im")});
  } catch (const InvalidArgument&) {
    throw InvalidConfig("input: |alpha|^2 + |beta|^2 must equal 1");
  }
}

// Rounds to `digits` significant digits through the decimal form.
double round_digits(double value, int digits) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, digits);
  double out = 0.0;
  std::from_chars(buf, res.ptr, out);
  return out;
}

// 15 digits absorbs the ulp drift of |b|^2 and arg(b) recovered from b, so a
// dumped config re-dumps to the same text.
double config_number(double value) { return round_digits(value, 15); }

Json channel_json(const ChannelParams& ch, bool with_a2) {
  Json j;
  if (with_a2) j["a2"] = round12(ch.a2());
  j["b2"] = with_a2 ? round12(ch.b2()) : config_number(ch.b2());
  j["b_phase"] = with_a2 ? round12(ch.b_phase()) : config_number(ch.b_phase());
  return j;
}

Json input_json(const InputSpec& input, bool rounded) {
  if (std::holds_alternative<RandomInput>(input)) return "random";
  const InputQubit& q = std::get<InputQubit>(input);
  auto r = [rounded](double v) { return rounded ? round12(v) : v; };
  Json j;
  j["alpha_re"] = r(q.alpha().real());
  j["alpha_im"] = r(q.alpha().imag());
  j["beta_re"] = r(q.beta().real());
  j["beta_im"] = r(q.beta().imag());
  return j;
}

std::string complex_text(Complex c) {
  return format_number(c.real()) + (c.imag() < 0 ? "-" : "+") + format_number(std::abs(c.imag())) + "i";
}

}  // namespace

InputQubit default_input() { return InputQubit::from_amplitudes(0.6, 0.8); }

ScenarioConfig parse_config(const Json& doc) {
  if (!doc.is_object()) throw InvalidConfig("config must be a JSON object");
  reject_unknown_keys(doc, {"scheme", "channels", "input", "trials", "seed", "relay_novel"}, "");

  ScenarioConfig cfg;
  if (!doc.contains("scheme") || !doc["scheme"].is_string()) {
    throw InvalidConfig("scheme: missing or not a string");
  }
  cfg.scheme = parse_scheme(doc["scheme"].get<std::string>());

  if (!doc.contains("channels") || !doc["channels"].is_array()) {
    throw InvalidConfig("channels: missing or not an array");
  }
  const Json& chans = doc["channels"];
  if (chans.size() != channel_count(cfg.scheme)) {
    throw InvalidConfig("channels: scheme " + std::string(scheme_name(cfg.scheme)) + " needs " +
                        std::to_string(channel_count(cfg.scheme)) + " channel(s)");
  }
  for (std::size_t i = 0; i < chans.size(); ++i) {
    cfg.channels.push_back(parse_channel(chans[i], "channels[" + std::to_string(i) + "]"));
  }

  cfg.input = doc.contains("input") ? parse_input(doc["input"]) : InputSpec{default_input()};
  cfg.trials = doc.contains("trials") ? unsigned_field(doc, "trials") : 10000;
  if (cfg.trials < 1) throw InvalidConfig("trials must be at least 1");
  cfg.seed = doc.contains("seed") ? unsigned_field(doc, "seed") : 42;

  if (doc.contains("relay_novel")) {
    const Json& v = doc["relay_novel"];
    if (v == "circuit") {
      cfg.relay_novel = NovelVariant::Circuit;
    } else if (v == "direct") {
      cfg.relay_novel = NovelVariant::Direct;
    } else {
      throw InvalidConfig("relay_novel must be \"circuit\" or \"direct\"");
    }
  }
  cfg.validate();
  return cfg;
}

Json config_to_json(const ScenarioConfig& cfg) {
  Json j;
  j["scheme"] = std::string(scheme_name(cfg.scheme));
  j["channels"] = Json::array();
  for (const ChannelParams& ch : cfg.channels) j["channels"].push_back(channel_json(ch, false));
  j["input"] = input_json(cfg.input, false);
  j["trials"] = cfg.trials;
  j["seed"] = cfg.seed;
  j["relay_novel"] = cfg.relay_novel == NovelVariant::Circuit ? "circuit" : "direct";
  return j;
}

std::string format_number(double value) {
  if (value == 0.0) return "0";  // also folds -0
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 12);
  return std::string(buf, res.ptr);
}

double round12(double value) { return value == 0.0 ? 0.0 : round_digits(value, 12); }

Json report_to_json(const Report& r) {
  Json j;
  j["scheme"] = std::string(scheme_name(r.scheme));
  j["channels"] = Json::array();
  for (const ChannelParams& ch : r.channels) j["channels"].push_back(channel_json(ch, true));
  j["input"] = input_json(r.input, true);
  j["trials"] = r.trials;
  j["seed"] = r.seed;
  j["exact_success"] = round12(r.exact_success);
  j["analytic_success"] = round12(r.analytic_success);
  j["empirical_success"] = round12(r.empirical_success);
  j["mean_success_fidelity"] = round12(r.mean_success_fidelity);
  j["per_outcome"] = Json::array();
  for (const OutcomeStat& s : r.per_outcome) {
    Json o;
    o["label"] = s.label;
    o["exact"] = round12(s.exact);
    o["empirical"] = round12(s.empirical);
    j["per_outcome"].push_back(std::move(o));
  }
  return j;
}

std::string report_table(const Report& r) {
  std::ostringstream os;
  auto row = [&os](const std::string& key, const std::string& value) {
    os << key << std::string(key.size() < 22 ? 22 - key.size() : 1, ' ') << value << "\n";
  };
  row("scheme", std::string(scheme_name(r.scheme)));
  for (std::size_t i = 0; i < r.channels.size(); ++i) {
    const ChannelParams& ch = r.channels[i];
    row("channel " + std::to_string(i + 1), "|a|^2=" + format_number(ch.a2()) + " |b|^2=" +
                                                format_number(ch.b2()) + " arg(b)=" +
                                                format_number(ch.b_phase()));
  }
  if (const auto* q = std::get_if<InputQubit>(&r.input)) {
    row("input", "alpha=" + complex_text(q->alpha()) + " beta=" + complex_text(q->beta()));
  } else {
    row("input", "random (Haar)");
  }
  row("trials", std::to_string(r.trials));
  row("seed", std::to_string(r.seed));
  row("exact success", format_number(r.exact_success));
  row("analytic success", format_number(r.analytic_success));
  row("empirical success", format_number(r.empirical_success));
  row("mean success fidelity", format_number(r.mean_success_fidelity));
  os << "\n";
  std::size_t width = 8;
  for (const OutcomeStat& s : r.per_outcome) width = std::max(width, s.label.size() + 2);
  auto pad = [width](const std::string& s) { return s + std::string(width - s.size(), ' '); };
  os << pad("outcome") << "exact            empirical\n";
  for (const OutcomeStat& s : r.per_outcome) {
    const std::string exact = format_number(s.exact);
    os << pad(s.label) << exact << std::string(exact.size() < 17 ? 17 - exact.size() : 1, ' ')
       << format_number(s.empirical) << "\n";
  }
  return os.str();
}

std::string report_csv(const Report& r) {
  std::string out = "label,exact,empirical\n";
  for (const OutcomeStat& s : r.per_outcome) {
    out += s.label + "," + format_number(s.exact) + "," + format_number(s.empirical) + "\n";
  }
  return out;
}

Grid parse_grid(const std::string& text) {
  Grid g{};
  double* fields[] = {&g.start, &g.stop, &g.step};
  std::size_t pos = 0;
  for (int i = 0; i < 3; ++i) {
    const std::size_t end = i < 2 ? text.find(':', pos) : text.size();
    if (end == std::string::npos) throw InvalidConfig("grid must have the form start:stop:step");
    const char* first = text.data() + pos;
    const char* last = text.data() + end;
    const auto res = std::from_chars(first, last, *fields[i]);
    if (res.ec != std::errc() || res.ptr != last) {
      throw InvalidConfig("grid must have the form start:stop:step");
    }
    pos = end + 1;
  }
  if (!(g.step > 0.0)) throw InvalidConfig("grid step must be positive");
  if (g.stop < g.start) throw InvalidConfig("grid is empty (stop < start)");
  return g;
}

std::vector<double> grid_points(const Grid& g) {
  const auto count = static_cast<std::size_t>(std::floor((g.stop - g.start) / g.step + 1e-9)) + 1;
  std::vector<double> pts;
  for (std::size_t i = 0; i < count; ++i) {
    const double x = round12(g.start + static_cast<double>(i) * g.step);
    if (!(x > 0.0 && x <= 0.5)) throw InvalidConfig("grid point " + format_number(x) + " outside (0, 0.5]");
    pts.push_back(x);
  }
  if (pts.empty()) throw InvalidConfig("grid is empty");
  return pts;
}

}  // namespace probtele::cli
