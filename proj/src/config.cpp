#include "uamcts/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include "uamcts/envs.hpp"

namespace uamcts {

namespace {

struct VariantName {
  Variant v;
  const char* name;
};

constexpr VariantName kVariantNames[] = {
    {Variant::true_model, "true-model"},
    {Variant::corrupted_model, "corrupted-model"},
    {Variant::ua_select_only, "ua-select-only"},
    {Variant::ua_expand_only, "ua-expand-only"},
    {Variant::ua_simulate_only, "ua-simulate-only"},
    {Variant::ua_backprop_only, "ua-backprop-only"},
    {Variant::ua_combined, "ua-combined"},
    {Variant::learned_linear, "learned-transition-linear"},
    {Variant::learned_hidden8, "learned-transition-hidden-8"},
    {Variant::learned_hidden16, "learned-transition-hidden-16"},
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

template <class T>
T parse_number(const std::string& s) {
  T v{};
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) throw std::invalid_argument("not a number: '" + s + "'");
  return v;
}

bool parse_bool(const std::string& s) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw std::invalid_argument("not a boolean: '" + s + "'");
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string join_sizes(const std::vector<std::size_t>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
  return out;
}

}  // namespace

const char* variant_name(Variant v) {
  for (const auto& e : kVariantNames) {
    if (e.v == v) return e.name;
  }
  return "?";
}

Variant parse_variant(const std::string& raw) {
  std::string name = raw;
  if (name.starts_with("learned-transition(") && name.ends_with(")")) {
    name = "learned-transition-" + name.substr(19, name.size() - 20);
  }
  for (const auto& e : kVariantNames) {
    if (name == e.name) return e.v;
  }
  throw std::invalid_argument("unknown variant '" + raw + "'");
}

const std::vector<Variant>& all_variants() {
  static const std::vector<Variant> all = [] {
    std::vector<Variant> v;
    for (const auto& e : kVariantNames) v.push_back(e.v);
    return v;
  }();
  return all;
}

PhaseMask variant_phases(Variant v) {
  switch (v) {
    case Variant::ua_select_only: return {true, false, false, false};
    case Variant::ua_expand_only: return {false, true, false, false};
    case Variant::ua_simulate_only: return {false, false, true, false};
    case Variant::ua_backprop_only: return {false, false, false, true};
    case Variant::ua_combined: return PhaseMask::all();
    default: return PhaseMask::none();
  }
}

bool uses_uncertainty(Variant v) { return variant_phases(v).any(); }

bool is_learned_transition(Variant v) {
  return v == Variant::learned_linear || v == Variant::learned_hidden8 || v == Variant::learned_hidden16;
}

std::vector<std::size_t> learned_transition_hidden(Variant v) {
  if (v == Variant::learned_hidden8) return {8};
  if (v == Variant::learned_hidden16) return {16};
  return {};
}

std::vector<std::int64_t> ExperimentConfig::seeds() const {
  std::vector<std::int64_t> out;
  for (auto s = seed_first; s <= seed_last; ++s) out.push_back(s);
  return out;
}

InputEncoding ExperimentConfig::encoding() const {
  switch (input_encoding) {
    case EncodingChoice::concat: return InputEncoding::concat;
    case EncodingChoice::product: return InputEncoding::state_action_product;
    default: return hidden.empty() ? InputEncoding::state_action_product : InputEncoding::concat;
  }
}

ConfigError::ConfigError(std::vector<std::string> problems)
    : std::runtime_error([&] {
        std::string msg = "invalid configuration:";
        for (const auto& p : problems) msg += "\n  " + p;
        return msg;
      }()),
      problems_(std::move(problems)) {}

void ExperimentConfig::validate() const {
  std::vector<std::string> bad;
  auto check = [&](bool ok, const std::string& msg) {
    if (!ok) bad.push_back(msg);
  };
  try {
    env_info(env);
  } catch (const std::exception&) {
    bad.push_back("env: unknown environment '" + env + "'");
  }
  check(!variants.empty(), "variants: at least one variant is required");
  check(hp.iterations >= 1, "iterations: must be >= 1");
  check(hp.rollouts >= 1, "rollouts: must be >= 1");
  check(hp.depth >= 0, "depth: must be >= 0");
  check(hp.c >= 0.0, "c: must be >= 0");
  check(hp.gamma >= 0.0 && hp.gamma <= 1.0, "gamma: must lie in [0, 1]");
  check(hp.tau > 0.0, "tau: must be > 0");
  check(tau_initial > 0.0, "tau_initial: must be > 0");
  check(tau_floor > 0.0, "tau_floor: must be > 0");
  check(train_period >= 1, "train_period: must be >= 1");
  check(train_steps >= 0, "train_steps: must be >= 0");
  check(batch_size >= 1, "batch_size: must be >= 1");
  check(learning_rate > 0.0, "learning_rate: must be > 0");
  check(episodes >= 1, "episodes: must be >= 1");
  check(seed_first >= 0 && seed_last >= seed_first, "seeds: need 0 <= first <= last");
  check(workers >= 0, "workers: must be >= 0");
  check(!c_candidates.empty(), "c_candidates: at least one candidate is required");
  for (double c : c_candidates) check(c >= 0.0, "c_candidates: values must be >= 0");
  for (Variant v : variants) {
    if (is_learned_transition(v)) {
      check(env == "two-way-gridworld" || env == "icy-two-way-gridworld",
            std::string("variants: ") + variant_name(v) + " requires a gridworld env");
      check(scenario == Scenario::online, std::string("scenario: ") + variant_name(v) + " is online only");
    }
  }
  if (!bad.empty()) throw ConfigError(bad);
}

std::pair<std::int64_t, std::int64_t> parse_seed_range(const std::string& text) {
  const std::string t = trim(text);
  const auto dots = t.find("..");
  if (dots == std::string::npos) {
    const auto s = parse_number<std::int64_t>(t);
    return {s, s};
  }
  return {parse_number<std::int64_t>(trim(t.substr(0, dots))), parse_number<std::int64_t>(trim(t.substr(dots + 2)))};
}

ExperimentConfig parse_config(const std::string& text) {
  std::vector<std::pair<std::string, std::string>> entries;
  std::vector<std::string> bad;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      bad.push_back("line " + std::to_string(lineno) + ": expected key = value");
      continue;
    }
    entries.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }

  ExperimentConfig cfg;
  for (const auto& [k, v] : entries) {
    if (k == "env") cfg.env = v;
  }
  try {
    cfg.hp = env_info(cfg.env).defaults;
  } catch (const std::exception&) {
    bad.push_back("env: unknown environment '" + cfg.env + "'");
  }

  using Setter = std::function<void(const std::string&)>;
  const std::map<std::string, Setter> setters{
      {"env", [](const std::string&) {}},
      {"scenario",
       [&](const std::string& v) {
         if (v == "offline") cfg.scenario = Scenario::offline;
         else if (v == "online") cfg.scenario = Scenario::online;
         else throw std::invalid_argument("expected offline or online");
       }},
      {"variants",
       [&](const std::string& v) {
         cfg.variants.clear();
         for (const auto& name : split_list(v)) cfg.variants.push_back(parse_variant(name));
       }},
      {"iterations", [&](const std::string& v) { cfg.hp.iterations = parse_number<int>(v); }},
      {"rollouts", [&](const std::string& v) { cfg.hp.rollouts = parse_number<int>(v); }},
      {"depth", [&](const std::string& v) { cfg.hp.depth = parse_number<int>(v); }},
      {"c", [&](const std::string& v) { cfg.hp.c = parse_number<double>(v); }},
      {"gamma", [&](const std::string& v) { cfg.hp.gamma = parse_number<double>(v); }},
      {"tau", [&](const std::string& v) { cfg.hp.tau = parse_number<double>(v); }},
      {"tau_initial", [&](const std::string& v) { cfg.tau_initial = parse_number<double>(v); }},
      {"tau_floor", [&](const std::string& v) { cfg.tau_floor = parse_number<double>(v); }},
      {"train_period", [&](const std::string& v) { cfg.train_period = parse_number<std::int64_t>(v); }},
      {"train_steps", [&](const std::string& v) { cfg.train_steps = parse_number<int>(v); }},
      {"batch_size", [&](const std::string& v) { cfg.batch_size = parse_number<std::size_t>(v); }},
      {"learning_rate", [&](const std::string& v) { cfg.learning_rate = parse_number<double>(v); }},
      {"hidden",
       [&](const std::string& v) {
         cfg.hidden.clear();
         for (const auto& h : split_list(v)) cfg.hidden.push_back(parse_number<std::size_t>(h));
       }},
      {"input_encoding",
       [&](const std::string& v) {
         if (v == "auto") cfg.input_encoding = EncodingChoice::automatic;
         else if (v == "concat") cfg.input_encoding = EncodingChoice::concat;
         else if (v == "product") cfg.input_encoding = EncodingChoice::product;
         else throw std::invalid_argument("expected auto, concat or product");
       }},
      {"normalize_uncertainty", [&](const std::string& v) { cfg.normalize_uncertainty = parse_bool(v); }},
      {"episodes", [&](const std::string& v) { cfg.episodes = parse_number<int>(v); }},
      {"seeds",
       [&](const std::string& v) {
         const auto [a, b] = parse_seed_range(v);
         cfg.seed_first = a;
         cfg.seed_last = b;
       }},
      {"master_seed", [&](const std::string& v) { cfg.master_seed = parse_number<std::uint64_t>(v); }},
      {"workers", [&](const std::string& v) { cfg.workers = parse_number<int>(v); }},
      {"rollout_uncertainty",
       [&](const std::string& v) {
         if (v == "pre") cfg.hp.rollout_uncertainty = RolloutUncertainty::pre_transition;
         else if (v == "post") cfg.hp.rollout_uncertainty = RolloutUncertainty::post_transition;
         else throw std::invalid_argument("expected pre or post");
       }},
      {"expansion_rule",
       [&](const std::string& v) {
         if (v == "pseudocode") cfg.hp.expansion_rule = ExpansionRule::pseudocode;
         else if (v == "text") cfg.hp.expansion_rule = ExpansionRule::text;
         else throw std::invalid_argument("expected pseudocode or text");
       }},
      {"c_candidates",
       [&](const std::string& v) {
         cfg.c_candidates.clear();
         for (const auto& c : split_list(v)) cfg.c_candidates.push_back(parse_number<double>(c));
       }},
  };

  for (const auto& [k, v] : entries) {
    const auto it = setters.find(k);
    if (it == setters.end()) {
      bad.push_back(k + ": unknown key");
      continue;
    }
    try {
      it->second(v);
    } catch (const std::exception& e) {
      bad.push_back(k + ": " + e.what());
    }
  }
  if (!bad.empty()) throw ConfigError(bad);
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"config: cannot open '" + path + "'"});
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string format_config(const ExperimentConfig& c) {
  std::ostringstream out;
  out << "env = " << c.env << "\n";
  out << "scenario = " << (c.scenario == Scenario::offline ? "offline" : "online") << "\n";
  out << "variants = ";
  for (std::size_t i = 0; i < c.variants.size(); ++i) out << (i ? "," : "") << variant_name(c.variants[i]);
  out << "\n";
  out << "iterations = " << c.hp.iterations << "\n";
  out << "rollouts = " << c.hp.rollouts << "\n";
  out << "depth = " << c.hp.depth << "\n";
  out << "c = " << fmt(c.hp.c) << "\n";
  out << "gamma = " << fmt(c.hp.gamma) << "\n";
  out << "tau = " << fmt(c.hp.tau) << "\n";
  out << "tau_initial = " << fmt(c.tau_initial) << "\n";
  out << "tau_floor = " << fmt(c.tau_floor) << "\n";
  out << "train_period = " << c.train_period << "\n";
  out << "train_steps = " << c.train_steps << "\n";
  out << "batch_size = " << c.batch_size << "\n";
  out << "learning_rate = " << fmt(c.learning_rate) << "\n";
  out << "hidden = " << join_sizes(c.hidden) << "\n";
  const char* enc[] = {"auto", "concat", "product"};
  out << "input_encoding = " << enc[static_cast<int>(c.input_encoding)] << "\n";
  out << "normalize_uncertainty = " << (c.normalize_uncertainty ? "true" : "false") << "\n";
  out << "episodes = " << c.episodes << "\n";
  out << "seeds = " << c.seed_first << ".." << c.seed_last << "\n";
  out << "master_seed = " << c.master_seed << "\n";
  out << "workers = " << c.workers << "\n";
  out << "rollout_uncertainty = "
      << (c.hp.rollout_uncertainty == RolloutUncertainty::pre_transition ? "pre" : "post") << "\n";
  out << "expansion_rule = " << (c.hp.expansion_rule == ExpansionRule::pseudocode ? "pseudocode" : "text")
      << "\n";
  out << "c_candidates = ";
  for (std::size_t i = 0; i < c.c_candidates.size(); ++i) out << (i ? "," : "") << fmt(c.c_candidates[i]);
  out << "\n";
  return out.str();
}

}  // namespace uamcts
