#include "coldstart/config.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "coldstart/common.hpp"

namespace coldstart {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

double to_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ValidationError("config: bad numeric value for " + key + ": '" + value + "'");
  }
}

long long to_int(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ValidationError("config: bad integer value for " + key + ": '" + value + "'");
  }
}

std::uint64_t to_seed(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const std::uint64_t v = std::stoull(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ValidationError("config: bad seed value for " + key + ": '" + value + "'");
  }
}

bool to_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ValidationError("config: bad boolean value for " + key + ": '" + value + "'");
}

SyntheticSpec& synth_of(ExperimentConfig& cfg) {
  if (!cfg.synth) cfg.synth = SyntheticSpec{};
  return *cfg.synth;
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text, const std::string& origin) {
  ExperimentConfig cfg;
  using Setter = std::function<void(ExperimentConfig&, const std::string&, const std::string&)>;
  static const std::map<std::string, Setter> keys = {
      {"data.ratings", [](auto& c, auto&, auto& v) { c.ratings_path = v; }},
      {"data.attributes", [](auto& c, auto&, auto& v) { c.attributes_path = v; }},
      {"synth.users", [](auto& c, auto& k, auto& v) { synth_of(c).users = static_cast<int>(to_int(k, v)); }},
      {"synth.items", [](auto& c, auto& k, auto& v) { synth_of(c).items = static_cast<int>(to_int(k, v)); }},
      {"synth.attrs", [](auto& c, auto& k, auto& v) { synth_of(c).attrs = static_cast<int>(to_int(k, v)); }},
      {"synth.latent_dim", [](auto& c, auto& k, auto& v) { synth_of(c).latent_dim = static_cast<int>(to_int(k, v)); }},
      {"synth.density", [](auto& c, auto& k, auto& v) { synth_of(c).density = to_double(k, v); }},
      {"synth.noise_std", [](auto& c, auto& k, auto& v) { synth_of(c).noise_std = to_double(k, v); }},
      {"synth.seed", [](auto& c, auto& k, auto& v) { synth_of(c).seed = to_seed(k, v); }},
      {"rating.min", [](auto& c, auto& k, auto& v) { c.scale.min = to_double(k, v); }},
      {"rating.max", [](auto& c, auto& k, auto& v) { c.scale.max = to_double(k, v); }},
      {"rating.step", [](auto& c, auto& k, auto& v) { c.scale.step = to_double(k, v); }},
      {"split.test_fraction", [](auto& c, auto& k, auto& v) { c.test_fraction = to_double(k, v); }},
      {"split.seed", [](auto& c, auto& k, auto& v) { c.split_seed = to_seed(k, v); }},
      {"fm.k_f", [](auto& c, auto& k, auto& v) { c.fm.k_f = static_cast<int>(to_int(k, v)); }},
      {"fm.epochs", [](auto& c, auto& k, auto& v) { c.fm.epochs = static_cast<int>(to_int(k, v)); }},
      {"fm.learning_rate", [](auto& c, auto& k, auto& v) { c.fm.learning_rate = to_double(k, v); }},
      {"fm.l2_w0", [](auto& c, auto& k, auto& v) { c.fm.l2_w0 = to_double(k, v); }},
      {"fm.l2_w", [](auto& c, auto& k, auto& v) { c.fm.l2_w = to_double(k, v); }},
      {"fm.l2_v", [](auto& c, auto& k, auto& v) { c.fm.l2_v = to_double(k, v); }},
      {"fm.init_std", [](auto& c, auto& k, auto& v) { c.fm.init_std = to_double(k, v); }},
      {"fm.seed", [](auto& c, auto& k, auto& v) { c.fm.seed = to_seed(k, v); }},
      {"fm.shuffle", [](auto& c, auto& k, auto& v) { c.fm.shuffle = to_bool(k, v); }},
      {"retrain.epochs", [](auto& c, auto& k, auto& v) { c.retrain_epochs = static_cast<int>(to_int(k, v)); }},
      {"retrain.learning_rate", [](auto& c, auto& k, auto& v) { c.retrain_learning_rate = to_double(k, v); }},
      {"criteria.alpha", [](auto& c, auto& k, auto& v) { c.alpha = to_double(k, v); }},
      {"criteria.beta", [](auto& c, auto& k, auto& v) { c.beta = to_double(k, v); }},
      {"criteria.gamma", [](auto& c, auto& k, auto& v) { c.gamma = to_double(k, v); }},
      {"criteria.sigma", [](auto& c, auto& k, auto& v) { c.sigma = to_double(k, v); }},
      {"criteria.divisor",
       [](auto& c, auto& k, auto& v) {
         if (v == "pool") c.divide_by_all_users = false;
         else if (v == "users") c.divide_by_all_users = true;
         else throw ValidationError("config: " + k + " must be 'pool' or 'users'");
       }},
      {"select.k", [](auto& c, auto& k, auto& v) { c.k = static_cast<int>(to_int(k, v)); }},
      {"select.max_iter", [](auto& c, auto& k, auto& v) { c.max_iter = static_cast<int>(to_int(k, v)); }},
      {"budget.k_total", [](auto& c, auto& k, auto& v) { c.k_total = to_int(k, v); }},
      {"budget.lambda", [](auto& c, auto& k, auto& v) { c.lambda = to_double(k, v); }},
      {"budget.normalize", [](auto& c, auto& k, auto& v) { c.budget_normalize = to_bool(k, v); }},
      {"baselines.epsilon", [](auto& c, auto& k, auto& v) { c.epsilon = to_double(k, v); }},
      {"baselines.gamma_e", [](auto& c, auto& k, auto& v) { c.gamma_e = to_double(k, v); }},
      {"topn.n", [](auto& c, auto& k, auto& v) { c.topn = static_cast<int>(to_int(k, v)); }},
      {"topn.threshold", [](auto& c, auto& k, auto& v) { c.topn_threshold = to_double(k, v); }},
      {"strategies",
       [](auto& c, auto& k, auto& v) {
         c.strategies.clear();
         std::stringstream ss(v);
         std::string token;
         while (std::getline(ss, token, ',')) {
           token = trim(token);
           if (token.empty()) continue;
           const auto strategy = parse_strategy(token);
           if (!strategy) throw ValidationError("config: unknown strategy '" + token + "' for " + k);
           c.strategies.push_back(*strategy);
         }
       }},
      {"runs.repetitions", [](auto& c, auto& k, auto& v) { c.repetitions = static_cast<int>(to_int(k, v)); }},
      {"runs.seed", [](auto& c, auto& k, auto& v) { c.seed = to_seed(k, v); }},
      {"output", [](auto& c, auto&, auto& v) { c.output_path = v; }},
  };

  std::istringstream in(text);
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos)
      throw ParseError(origin, line_no, "expected 'key = value'");
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    const auto it = keys.find(key);
    if (it == keys.end()) throw ParseError(origin, line_no, "unknown config key '" + key + "'");
    it->second(cfg, key, value);
  }
  if (cfg.synth) cfg.synth->scale = cfg.scale;
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str(), path);
}

void ExperimentConfig::validate() const {
  const bool files = ratings_path.has_value() || attributes_path.has_value();
  if (files && (!ratings_path || !attributes_path))
    throw ValidationError("config: data.ratings and data.attributes must be given together");
  if (files && synth)
    throw ValidationError("config: choose file data or synthetic data, not both");
  if (!files && !synth)
    throw ValidationError("config: no data source (data.* or synth.*)");
  if (alpha < 0 || beta < 0 || gamma < 0 || sigma < 0)
    throw ValidationError("config: criteria weights must be >= 0");
  if (k < 1) throw ValidationError("config: select.k must be >= 1");
  if (epsilon < 0.0 || epsilon > 1.0)
    throw ValidationError("config: baselines.epsilon must be in [0,1]");
  if (gamma_e < 0.0) throw ValidationError("config: baselines.gamma_e must be >= 0");
  if (lambda < 0.0) throw ValidationError("config: budget.lambda must be >= 0");
  if (topn < 5) throw ValidationError("config: topn.n must be >= 5");
  if (repetitions < 1) throw ValidationError("config: runs.repetitions must be >= 1");
  if (max_iter < 1) throw ValidationError("config: select.max_iter must be >= 1");
  if (strategies.empty()) throw ValidationError("config: no strategies configured");
  for (std::size_t i = 0; i < strategies.size(); ++i)
    for (std::size_t j = i + 1; j < strategies.size(); ++j)
      if (strategies[i] == strategies[j])
        throw ValidationError("config: strategy '" + strategy_name(strategies[i]) +
                              "' listed twice");
}

}  // namespace coldstart
