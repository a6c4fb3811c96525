// Copyright 2026 The hcboot Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "hcboot/experiment.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

namespace hcboot {

namespace {

using Json = nlohmann::ordered_json;

std::string shortest(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

double parse_number(std::string_view text, std::string_view what) {
  double value = 0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  const auto res = std::from_chars(first, last, value);
  if (res.ec != std::errc{} || res.ptr != last || !std::isfinite(value)) {
    throw ConfigError("invalid number '" + std::string(text) + "' for " + std::string(what));
  }
  return value;
}

std::int64_t parse_integer(std::string_view text, std::string_view what) {
  const double v = parse_number(text, what);
  if (v != std::floor(v) || std::abs(v) > 9.0e15) {
    throw ConfigError(std::string(what) + " must be an integer, got '" + std::string(text) + "'");
  }
  return static_cast<std::int64_t>(v);
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::vector<int> parse_n_list(std::string_view text) {
  std::vector<int> out;
  for (std::string_view part : split(text, ',')) {
    out.push_back(static_cast<int>(parse_integer(part, "n")));
  }
  return out;
}

// Splits "boot1:3" or "boot3:k_power:1" into the variant and an optional t.
std::pair<Variant, std::optional<RelaxationSpec>> parse_variant_text(std::string_view text) {
  const std::size_t colon = text.find(':');
  try {
    const Variant v = parse_variant(text.substr(0, colon));
    if (colon == std::string_view::npos) return {v, std::nullopt};
    return {v, RelaxationSpec::parse(text.substr(colon + 1))};
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

double exponent_a(const ExperimentConfig& config, std::string_view needed_by) {
  if (config.threshold.kind != ThresholdSpec::Kind::kPower) {
    throw ConfigError(std::string(needed_by) + " needs a power:<a> threshold");
  }
  return config.threshold.value;
}

void validate(const ExperimentConfig& config) {
  if (config.n_values.empty()) throw ConfigError("at least one n is required");
  if (config.experiment.empty() ||
      config.experiment.find_first_of(",\"\n\r") != std::string::npos) {
    throw ConfigError("experiment name must be nonempty without commas, quotes or newlines");
  }
  if (config.trials < 1) throw ConfigError("trials must be >= 1");
  if (config.p.kind == ProbabilitySpec::Kind::kAutoPc && config.trials < 1000) {
    throw ConfigError("auto-pc needs trials >= 1000");
  }
  if (!(config.tolerance > 0 && config.tolerance < 1)) {
    throw ConfigError("tolerance must lie in (0, 1)");
  }
  if (!(config.confidence > 0 && config.confidence < 1)) {
    throw ConfigError("confidence must lie in (0, 1)");
  }
  if (config.format != "csv" && config.format != "json") {
    throw ConfigError("format must be csv or json, got '" + config.format + "'");
  }
  for (int n : config.n_values) resolve(config, n);
}

std::vector<double> probabilities_for(const ExperimentConfig& config, int n) {
  const ProbabilitySpec& ps = config.p;
  switch (ps.kind) {
    case ProbabilitySpec::Kind::kLiteral:
      return {ps.value};
    case ProbabilitySpec::Kind::kSweep: {
      std::vector<double> out;
      for (int i = 0; i < ps.points; ++i) {
        out.push_back(ps.points == 1 ? ps.start
                                     : ps.start + (ps.stop - ps.start) * i / (ps.points - 1));
      }
      return out;
    }
    case ProbabilitySpec::Kind::kReference: {
      const double a = exponent_a(config, "p ref:<c>");
      const double p = ps.value * std::pow(static_cast<double>(n), a - 1.0);
      if (!(p >= 0 && p <= 1)) throw ConfigError("p = c n^(a-1) falls outside [0, 1]");
      return {p};
    }
    case ProbabilitySpec::Kind::kAutoPc:
      break;
  }
  return {};
}

std::vector<std::pair<std::string, double>> references_for(const ExperimentConfig& config,
                                                            const ResolvedParams& params,
                                                            const std::optional<PcBracket>& pc) {
  std::vector<std::pair<std::string, double>> refs;
  const double n = params.n;
  const std::string& name = config.experiment;
  if ((name == "theorem1" || name == "theorem2" || name == "lemma29") &&
      config.threshold.kind == ThresholdSpec::Kind::kPower) {
    const double a = config.threshold.value;
    refs.emplace_back("n^(a-1)", std::pow(n, a - 1));
    if (name == "theorem2") {
      refs.emplace_back("lower n^(a-1)-n^(a/2-1+delta)",
                        std::pow(n, a - 1) - std::pow(n, a / 2 - 1 + config.delta));
      refs.emplace_back("upper n^(a-1)-n^(a/2-1)", std::pow(n, a - 1) - std::pow(n, a / 2 - 1));
    }
  }
  if (name == "theorem3") {
    const double half_k = params.k / 2.0;
    refs.emplace_back("upper 1/2-n^(-k/2)", 0.5 - std::pow(n, -half_k));
    if (pc) {
      const double mid = 0.5 * (pc->lo + pc->hi);
      refs.emplace_back("gap (1/2-pc)n^(k/2)/sqrt(log n)",
                        (0.5 - mid) * std::pow(n, half_k) / std::sqrt(std::log(n)));
    }
  }
  return refs;
}

Json estimate_json(const PercProbEstimate& e) {
  Json j;
  j["trials"] = e.trials;
  j["successes"] = e.successes;
  j["p_hat"] = e.p_hat;
  j["ci_low"] = e.ci_low;
  j["ci_high"] = e.ci_high;
  j["confidence"] = e.confidence;
  return j;
}

PercProbEstimate estimate_from(const Json& j) {
  PercProbEstimate e;
  e.trials = j.at("trials").get<std::uint64_t>();
  e.successes = j.at("successes").get<std::uint64_t>();
  e.p_hat = j.at("p_hat").get<double>();
  e.ci_low = j.at("ci_low").get<double>();
  e.ci_high = j.at("ci_high").get<double>();
  e.confidence = j.at("confidence").get<double>();
  return e;
}

Json config_json(const ExperimentConfig& c) {
  Json j;
  j["experiment"] = c.experiment;
  j["n"] = c.n_values;
  j["k"] = c.k;
  j["threshold"] = c.threshold.str();
  j["variant"] = std::string(to_string(c.variant));
  j["t"] = c.t.str();
  j["p"] = c.p.str();
  j["trials"] = c.trials;
  j["seed"] = c.seed;
  j["tolerance"] = c.tolerance;
  j["confidence"] = c.confidence;
  j["delta"] = c.delta;
  j["stabilization"] = c.stabilization;
  j["output"] = c.output;
  j["format"] = c.format;
  return j;
}

std::string text_field(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
  if (v.is_number()) return shortest(v.get<double>());
  throw ConfigError("expected a string or number, got " + v.dump());
}

// Overlays the fields present in j onto c.
void overlay_config(ExperimentConfig& c, const Json& j) {
  static const char* const known[] = {"experiment", "preset", "n", "k", "threshold",
                                      "variant", "t", "p", "pc", "trials", "seed",
                                      "tolerance", "confidence", "delta",
                                      "stabilization", "output", "format"};
  for (const auto& [key, value] : j.items()) {
    if (std::find(std::begin(known), std::end(known), key) == std::end(known)) {
      throw ConfigError("unknown config field '" + key + "'");
    }
  }
  try {
    if (j.contains("preset")) apply_preset(c, j["preset"].get<std::string>());
    if (j.contains("experiment")) c.experiment = j["experiment"].get<std::string>();
    if (j.contains("n")) {
      const Json& n = j["n"];
      c.n_values = n.is_array() ? n.get<std::vector<int>>() : parse_n_list(text_field(n));
    }
    if (j.contains("k")) c.k = j["k"].get<int>();
    if (j.contains("threshold")) c.threshold = ThresholdSpec::parse(j["threshold"].get<std::string>());
    if (j.contains("variant")) {
      auto [v, t] = parse_variant_text(j["variant"].get<std::string>());
      c.variant = v;
      if (t) c.t = *t;
    }
    if (j.contains("t")) c.t = RelaxationSpec::parse(text_field(j["t"]));
    if (j.contains("p")) c.p = ProbabilitySpec::parse(text_field(j["p"]));
    if (j.contains("pc") && j["pc"].get<bool>()) c.p = ProbabilitySpec::parse("auto-pc");
    if (j.contains("trials")) c.trials = j["trials"].get<std::uint64_t>();
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("tolerance")) c.tolerance = j["tolerance"].get<double>();
    if (j.contains("confidence")) c.confidence = j["confidence"].get<double>();
    if (j.contains("delta")) c.delta = j["delta"].get<double>();
    if (j.contains("stabilization")) c.stabilization = j["stabilization"].get<bool>();
    if (j.contains("output")) c.output = j["output"].get<std::string>();
    if (j.contains("format")) c.format = j["format"].get<std::string>();
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("bad config field: ") + e.what());
  }
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 10);
  return std::string(buf, res.ptr);
}

std::int64_t ceil_policy(double x) {
  const double nearest = std::round(x);
  if (std::abs(x - nearest) <= 1e-9 * std::max(1.0, std::abs(x))) {
    return static_cast<std::int64_t>(nearest);
  }
  return static_cast<std::int64_t>(std::ceil(x));
}

ThresholdSpec ThresholdSpec::parse(std::string_view text) {
  ThresholdSpec spec;
  if (text == "majority") {
    spec.kind = Kind::kMajority;
    spec.value = 0;
    return spec;
  }
  const std::size_t colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw ConfigError("threshold must be const:<r>, power:<a> or majority, got '" +
                      std::string(text) + "'");
  }
  const std::string_view head = text.substr(0, colon);
  const std::string_view tail = text.substr(colon + 1);
  if (head == "const") {
    spec.kind = Kind::kConst;
    spec.value = static_cast<double>(parse_integer(tail, "threshold const"));
    if (spec.value < 1) throw ConfigError("threshold const:<r> needs r >= 1");
  } else if (head == "power") {
    spec.kind = Kind::kPower;
    spec.value = parse_number(tail, "threshold power");
    if (!(spec.value > 0)) throw ConfigError("threshold power:<a> needs a > 0");
  } else {
    throw ConfigError("unknown threshold kind '" + std::string(head) + "'");
  }
  return spec;
}

std::string ThresholdSpec::str() const {
  switch (kind) {
    case Kind::kConst: return "const:" + std::to_string(static_cast<std::int64_t>(value));
    case Kind::kPower: return "power:" + shortest(value);
    case Kind::kMajority: return "majority";
  }
  return {};
}

RelaxationSpec RelaxationSpec::parse(std::string_view text) {
  RelaxationSpec spec;
  const std::size_t colon = text.find(':');
  if (colon == std::string_view::npos) {
    spec.kind = Kind::kLiteral;
    spec.value = static_cast<double>(parse_integer(text, "t"));
    if (spec.value < 0) throw ConfigError("t must be >= 0");
    return spec;
  }
  const std::string_view head = text.substr(0, colon);
  spec.value = parse_number(text.substr(colon + 1), "t");
  if (head == "eps2_na") {
    spec.kind = Kind::kEps2Na;
  } else if (head == "half_power") {
    spec.kind = Kind::kHalfPower;
  } else if (head == "linear") {
    spec.kind = Kind::kLinear;
  } else if (head == "k_power") {
    spec.kind = Kind::kKPower;
  } else {
    throw ConfigError("unknown t formula '" + std::string(head) + "'");
  }
  if (spec.kind != Kind::kHalfPower && !(spec.value > 0)) {
    throw ConfigError("t formula constant must be > 0");
  }
  return spec;
}

std::string RelaxationSpec::str() const {
  switch (kind) {
    case Kind::kLiteral: return std::to_string(static_cast<std::int64_t>(value));
    case Kind::kEps2Na: return "eps2_na:" + shortest(value);
    case Kind::kHalfPower: return "half_power:" + shortest(value);
    case Kind::kLinear: return "linear:" + shortest(value);
    case Kind::kKPower: return "k_power:" + shortest(value);
  }
  return {};
}

ProbabilitySpec ProbabilitySpec::parse(std::string_view text) {
  ProbabilitySpec spec;
  auto check_unit = [](double p) {
    if (!(p >= 0 && p <= 1)) throw ConfigError("probability must lie in [0, 1]");
  };
  if (text == "auto-pc") {
    spec.kind = Kind::kAutoPc;
    return spec;
  }
  if (text.starts_with("sweep:")) {
    const auto parts = split(text.substr(6), ':');
    if (parts.size() != 3) throw ConfigError("sweep must be sweep:<start>:<stop>:<points>");
    spec.kind = Kind::kSweep;
    spec.start = parse_number(parts[0], "sweep start");
    spec.stop = parse_number(parts[1], "sweep stop");
    spec.points = static_cast<int>(parse_integer(parts[2], "sweep points"));
    check_unit(spec.start);
    check_unit(spec.stop);
    if (spec.points < 1) throw ConfigError("sweep needs at least one point");
    return spec;
  }
  if (text.starts_with("ref:")) {
    spec.kind = Kind::kReference;
    spec.value = parse_number(text.substr(4), "p ref");
    if (!(spec.value > 0)) throw ConfigError("p ref:<c> needs c > 0");
    return spec;
  }
  spec.kind = Kind::kLiteral;
  spec.value = parse_number(text, "p");
  check_unit(spec.value);
  return spec;
}

std::string ProbabilitySpec::str() const {
  switch (kind) {
    case Kind::kLiteral: return shortest(value);
    case Kind::kSweep:
      return "sweep:" + shortest(start) + ":" + shortest(stop) + ":" + std::to_string(points);
    case Kind::kAutoPc: return "auto-pc";
    case Kind::kReference: return "ref:" + shortest(value);
  }
  return {};
}

ResolvedParams resolve(const ExperimentConfig& config, int n) {
  if (config.k > n) {
    throw ConfigError("k > n (k=" + std::to_string(config.k) + ", n=" + std::to_string(n) + ")");
  }
  ResolvedParams out;
  out.n = n;
  out.k = config.k;
  try {
    out.degree = CubeSpec(n, config.k).degree();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  const double nd = n;
  switch (config.threshold.kind) {
    case ThresholdSpec::Kind::kConst:
      out.r = static_cast<std::int64_t>(config.threshold.value);
      break;
    case ThresholdSpec::Kind::kPower:
      out.r = ceil_policy(std::pow(nd, config.threshold.value));
      break;
    case ThresholdSpec::Kind::kMajority:
      out.r = ceil_policy(static_cast<double>(out.degree) / 2.0);
      break;
  }
  if (out.r < 1) throw ConfigError("threshold resolves to r=" + std::to_string(out.r) + " < 1");
  const RelaxationSpec& t = config.t;
  switch (t.kind) {
    case RelaxationSpec::Kind::kLiteral:
      out.t = static_cast<std::int64_t>(t.value);
      break;
    case RelaxationSpec::Kind::kEps2Na:
      out.t = ceil_policy(t.value * std::pow(nd, exponent_a(config, "t eps2_na")));
      break;
    case RelaxationSpec::Kind::kHalfPower:
      out.t = ceil_policy(std::pow(nd, exponent_a(config, "t half_power") / 2.0 + t.value) / 10.0);
      break;
    case RelaxationSpec::Kind::kLinear:
      out.t = ceil_policy(t.value * nd);
      break;
    case RelaxationSpec::Kind::kKPower:
      out.t = ceil_policy(t.value * std::pow(nd, config.k / 2.0));
      break;
  }
  try {
    ThresholdSchedule::make(config.variant, out.r, out.t);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string(e.what()) + " (n=" + std::to_string(n) + ")");
  }
  return out;
}

std::string policy_string(const ExperimentConfig& config) {
  return "ceil;threshold=" + config.threshold.str() + ";t=" + config.t.str();
}

void apply_preset(ExperimentConfig& c, std::string_view name) {
  if (name == "theorem1") {
    c.experiment = "theorem1";
    c.n_values = {12, 16, 20};
    c.k = 1;
    c.threshold = ThresholdSpec::parse("power:0.8");
    c.variant = Variant::kBoot;
    c.t = RelaxationSpec{};
    c.p = ProbabilitySpec::parse("auto-pc");
    c.trials = 20'000;
    c.tolerance = 0.02;
  } else if (name == "theorem2") {
    c.experiment = "theorem2";
    c.n_values = {12, 16, 20};
    c.k = 1;
    c.threshold = ThresholdSpec::parse("power:0.8");
    c.variant = Variant::kBoot;
    c.t = RelaxationSpec{};
    c.p = ProbabilitySpec::parse("auto-pc");
    c.trials = 20'000;
    c.tolerance = 0.02;
    c.delta = 0.15;
  } else if (name == "theorem3") {
    c.experiment = "theorem3";
    c.n_values = {8, 10, 12};
    c.k = 2;
    c.threshold = ThresholdSpec::parse("majority");
    c.variant = Variant::kBoot;
    c.t = RelaxationSpec{};
    c.p = ProbabilitySpec::parse("auto-pc");
    c.trials = 20'000;
    c.tolerance = 0.01;
  } else if (name == "lemma29") {
    // p = (1 - eps1) n^(a-1) with eps1 = 0.2 and t = eps2 n^a with
    // eps2 = 0.05, so eps1 > 2 eps2.
    c.experiment = "lemma29";
    c.n_values = {12};
    c.k = 1;
    c.threshold = ThresholdSpec::parse("power:0.8");
    c.variant = Variant::kBoot1;
    c.t = RelaxationSpec::parse("eps2_na:0.05");
    c.p = ProbabilitySpec::parse("ref:0.8");
    c.trials = 10'000;
    c.stabilization = true;
  } else {
    throw ConfigError("unknown preset '" + std::string(name) + "'");
  }
}

ExperimentConfig parse_config(const std::vector<std::string>& args) {
  CLI::App app{"Bootstrap percolation on hypercubes"};
  std::string preset, config_path, n_text, threshold_text, variant_text, t_text, p_text;
  std::string experiment, output, format;
  int k = 0;
  std::uint64_t trials = 0, seed = 0;
  double tolerance = 0, confidence = 0, delta = 0;
  bool pc = false, stabilization = false;
  app.add_option("--preset", preset, "theorem1 | theorem2 | theorem3 | lemma29");
  app.add_option("--config", config_path, "JSON config (or a previous JSON record)");
  app.add_option("--experiment", experiment, "Label written to every output row");
  app.add_option("--n", n_text, "Dimension, or a comma-separated list");
  app.add_option("--k", k, "Maximum Hamming radius of adjacency");
  app.add_option("--threshold", threshold_text, "const:<r> | power:<a> | majority");
  app.add_option("--variant", variant_text, "boot | boot1 | boot2 | boot3 (optionally :<t>)");
  app.add_option("--t", t_text, "<int> | eps2_na:<e> | half_power:<d> | linear:<c> | k_power:<c>");
  app.add_option("--p", p_text, "<p> | sweep:<start>:<stop>:<points> | auto-pc | ref:<c>");
  app.add_flag("--pc", pc, "Search for the critical probability");
  app.add_option("--trials", trials, "Trials per probability point");
  app.add_option("--seed", seed, "Master seed");
  app.add_option("--tolerance", tolerance, "Bracket width for --pc");
  app.add_option("--confidence", confidence, "Wilson interval level");
  app.add_option("--delta", delta, "Second-order exponent for theorem2 references");
  app.add_flag("--stabilization", stabilization, "Record fixpoint-step profiles");
  app.add_option("--output", output, "Output path (default stdout)");
  app.add_option("--format", format, "csv | json");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested(app.help());
  } catch (const CLI::ParseError& e) {
    throw ConfigError(std::string("command line: ") + e.what());
  }

  ExperimentConfig c;
  if (!preset.empty()) apply_preset(c, preset);
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) throw ConfigError("cannot read config file '" + config_path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    Json j;
    try {
      j = Json::parse(buf.str());
    } catch (const Json::exception& e) {
      throw ConfigError(std::string("config file: ") + e.what());
    }
    overlay_config(c, j.contains("config") ? j["config"] : j);
  }
  if (app.count("--experiment")) c.experiment = experiment;
  if (app.count("--n")) c.n_values = parse_n_list(n_text);
  if (app.count("--k")) c.k = k;
  if (app.count("--threshold")) c.threshold = ThresholdSpec::parse(threshold_text);
  if (app.count("--variant")) {
    auto [v, t] = parse_variant_text(variant_text);
    c.variant = v;
    if (t) c.t = *t;
  }
  if (app.count("--t")) c.t = RelaxationSpec::parse(t_text);
  if (app.count("--p")) c.p = ProbabilitySpec::parse(p_text);
  if (pc) c.p = ProbabilitySpec::parse("auto-pc");
  if (app.count("--trials")) c.trials = trials;
  if (app.count("--seed")) c.seed = seed;
  if (app.count("--tolerance")) c.tolerance = tolerance;
  if (app.count("--confidence")) c.confidence = confidence;
  if (app.count("--delta")) c.delta = delta;
  if (stabilization) c.stabilization = true;
  if (app.count("--output")) c.output = output;
  if (app.count("--format")) c.format = format;
  validate(c);
  return c;
}

RunRecord run_experiment(const ExperimentConfig& config) {
  validate(config);
  const auto start = std::chrono::steady_clock::now();
  RunRecord record;
  record.config = config;
  for (int n : config.n_values) {
    RunResult run;
    run.params = resolve(config, n);
    const CubeSpec spec(n, config.k);
    const ThresholdSchedule schedule =
        ThresholdSchedule::make(config.variant, run.params.r, run.params.t);
    if (config.p.kind == ProbabilitySpec::Kind::kAutoPc) {
      PcSearchOptions opts;
      opts.trials_per_point = config.trials;
      opts.p_tolerance = config.tolerance;
      opts.seed = config.seed;
      opts.confidence = config.confidence;
      const PcEstimate est = estimate_pc(spec, schedule, opts);
      for (const PcEvaluation& ev : est.evaluations) {
        run.points.push_back({ev.p, ev.estimate, std::nullopt});
      }
      run.pc = PcBracket{est.lo, est.hi, est.target, est.ci_limited};
    } else {
      for (double p : probabilities_for(config, n)) {
        const TrialPlan plan{spec, schedule, p, config.trials, config.seed};
        PointResult point{p, percolation_probability(plan, config.confidence), std::nullopt};
        if (config.stabilization) {
          const StabilizationProfile prof = stabilization_profile(plan, config.confidence);
          point.stabilization = StabilizationSummary{
              {prof.fixpoint_histogram.begin(), prof.fixpoint_histogram.end()},
              prof.stable_by_step1,
              prof.stable_by_step2};
        }
        run.points.push_back(std::move(point));
      }
    }
    run.references = references_for(config, run.params, run.pc);
    record.runs.push_back(std::move(run));
  }
  record.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return record;
}

std::string to_csv(const RunRecord& record) {
  const ExperimentConfig& c = record.config;
  const std::string policy = policy_string(c);
  std::string out(kCsvHeader);
  out += '\n';
  for (const RunResult& run : record.runs) {
    const std::string prefix = c.experiment + "," + std::to_string(run.params.n) + "," +
                               std::to_string(run.params.k) + "," +
                               std::string(to_string(c.variant)) + "," +
                               std::to_string(run.params.r) + "," +
                               std::to_string(run.params.t) + ",";
    const std::string suffix = "," + std::to_string(c.seed) + "," + policy + "\n";
    for (const PointResult& pt : run.points) {
      const PercProbEstimate& e = pt.estimate;
      out += prefix + format_double(pt.p) + "," + std::to_string(e.trials) + "," +
             std::to_string(e.successes) + "," + format_double(e.p_hat) + "," +
             format_double(e.ci_low) + "," + format_double(e.ci_high) + ",," + suffix;
    }
    if (run.pc) {
      out += prefix + ",,,,,," + format_double(run.pc->lo) + "," +
             format_double(run.pc->hi) + suffix;
    }
  }
  return out;
}

std::string config_to_json(const ExperimentConfig& config) {
  return config_json(config).dump(2);
}

ExperimentConfig config_from_json(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("config JSON: ") + e.what());
  }
  ExperimentConfig c;
  overlay_config(c, j.contains("config") ? j["config"] : j);
  validate(c);
  return c;
}

std::string to_json(const RunRecord& record) {
  Json j;
  j["version"] = record.version;
  j["config"] = config_json(record.config);
  j["policy"] = policy_string(record.config);
  j["seed"] = record.config.seed;
  Json runs = Json::array();
  for (const RunResult& run : record.runs) {
    Json r;
    r["n"] = run.params.n;
    r["k"] = run.params.k;
    r["N"] = run.params.degree;
    r["r"] = run.params.r;
    r["t"] = run.params.t;
    Json points = Json::array();
    for (const PointResult& pt : run.points) {
      Json p;
      p["p"] = pt.p;
      p["estimate"] = estimate_json(pt.estimate);
      if (pt.stabilization) {
        Json s;
        Json hist = Json::array();
        for (const auto& [step, count] : pt.stabilization->fixpoint_histogram) {
          hist.push_back({step, count});
        }
        s["fixpoint_histogram"] = std::move(hist);
        s["a2_equals_a1"] = estimate_json(pt.stabilization->stable_by_step1);
        s["a3_equals_a2"] = estimate_json(pt.stabilization->stable_by_step2);
        p["stabilization"] = std::move(s);
      }
      points.push_back(std::move(p));
    }
    r["points"] = std::move(points);
    if (run.pc) {
      r["pc"] = {{"lo", run.pc->lo}, {"hi", run.pc->hi}, {"target", run.pc->target},
                 {"ci_limited", run.pc->ci_limited}};
    } else {
      r["pc"] = nullptr;
    }
    Json refs = Json::array();
    for (const auto& [name, value] : run.references) refs.push_back({{"name", name}, {"value", value}});
    r["references"] = std::move(refs);
    runs.push_back(std::move(r));
  }
  j["runs"] = std::move(runs);
  j["wall_time_seconds"] = record.wall_time_seconds;
  return j.dump(2) + "\n";
}

RunRecord record_from_json(std::string_view text) {
  const Json j = Json::parse(text);
  RunRecord record;
  record.version = j.at("version").get<std::string>();
  overlay_config(record.config, j.at("config"));
  for (const Json& r : j.at("runs")) {
    RunResult run;
    run.params.n = r.at("n").get<int>();
    run.params.k = r.at("k").get<int>();
    run.params.degree = r.at("N").get<std::uint64_t>();
    run.params.r = r.at("r").get<std::int64_t>();
    run.params.t = r.at("t").get<std::int64_t>();
    for (const Json& p : r.at("points")) {
      PointResult pt;
      pt.p = p.at("p").get<double>();
      pt.estimate = estimate_from(p.at("estimate"));
      if (p.contains("stabilization")) {
        const Json& s = p["stabilization"];
        StabilizationSummary sum;
        for (const Json& h : s.at("fixpoint_histogram")) {
          sum.fixpoint_histogram.emplace_back(h.at(0).get<std::uint64_t>(),
                                              h.at(1).get<std::uint64_t>());
        }
        sum.stable_by_step1 = estimate_from(s.at("a2_equals_a1"));
        sum.stable_by_step2 = estimate_from(s.at("a3_equals_a2"));
        pt.stabilization = std::move(sum);
      }
      run.points.push_back(std::move(pt));
    }
    if (!r.at("pc").is_null()) {
      const Json& pc = r["pc"];
      run.pc = PcBracket{pc.at("lo").get<double>(), pc.at("hi").get<double>(),
                         pc.at("target").get<double>(), pc.at("ci_limited").get<bool>()};
    }
    for (const Json& ref : r.at("references")) {
      run.references.emplace_back(ref.at("name").get<std::string>(),
                                  ref.at("value").get<double>());
    }
    record.runs.push_back(std::move(run));
  }
  record.wall_time_seconds = j.at("wall_time_seconds").get<double>();
  return record;
}

void emit_results(const RunRecord& record, std::string_view format,
                  const std::string& output, std::ostream& stdout_stream) {
  std::string text;
  if (format == "csv") {
    text = to_csv(record);
  } else if (format == "json") {
    text = to_json(record);
  } else {
    throw ConfigError("format must be csv or json");
  }
  if (output.empty()) {
    stdout_stream << text;
    stdout_stream.flush();
    if (!stdout_stream) throw std::runtime_error("failed writing results to stdout");
    return;
  }
  std::ofstream out(output, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open output file '" + output + "'");
  out << text;
  out.flush();
  if (!out) throw std::runtime_error("failed writing output file '" + output + "'");
}

}  // namespace hcboot
