#include "tbandit/harness/config.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include <toml.hpp>

#include "tbandit/core/error.hpp"
#include "tbandit/harness/presets.hpp"

namespace tbandit::harness {
namespace {

std::string where(const toml::node& node) {
  const auto& src = node.source();
  std::ostringstream os;
  os << " (line " << src.begin.line << ")";
  return os.str();
}

void check_keys(const toml::table& table, const std::set<std::string>& allowed, const std::string& context) {
  for (const auto& [key, node] : table) {
    if (!allowed.count(std::string(key.str()))) {
      throw ConfigError("unknown key '" + std::string(key.str()) + "' in " + context + where(node));
    }
  }
}

double as_real(const toml::node& node, const std::string& key) {
  if (auto v = node.as_floating_point()) return v->get();
  if (auto v = node.as_integer()) return static_cast<double>(v->get());
  throw ConfigError("'" + key + "' must be a number" + where(node));
}

std::int64_t as_int(const toml::node& node, const std::string& key) {
  if (auto v = node.as_integer()) return v->get();
  throw ConfigError("'" + key + "' must be an integer" + where(node));
}

std::size_t as_count(const toml::node& node, const std::string& key) {
  const std::int64_t v = as_int(node, key);
  if (v < 0) throw ConfigError("'" + key + "' must be non-negative" + where(node));
  return static_cast<std::size_t>(v);
}

std::string as_string(const toml::node& node, const std::string& key) {
  if (auto v = node.as_string()) return v->get();
  throw ConfigError("'" + key + "' must be a string" + where(node));
}

bool as_bool(const toml::node& node, const std::string& key) {
  if (auto v = node.as_boolean()) return v->get();
  throw ConfigError("'" + key + "' must be a boolean" + where(node));
}

const toml::array& as_array(const toml::node& node, const std::string& key) {
  if (auto v = node.as_array()) return *v;
  throw ConfigError("'" + key + "' must be an array" + where(node));
}

std::vector<double> real_list(const toml::node& node, const std::string& key) {
  std::vector<double> out;
  for (const auto& item : as_array(node, key)) out.push_back(as_real(item, key));
  return out;
}

std::vector<std::size_t> count_list(const toml::node& node, const std::string& key) {
  std::vector<std::size_t> out;
  for (const auto& item : as_array(node, key)) out.push_back(as_count(item, key));
  return out;
}

env::Truncation parse_truncation(const std::string& text, const toml::node& node) {
  if (text == "none") return env::Truncation::None;
  if (text == "positive") return env::Truncation::PositiveOnly;
  if (text == "negative") return env::Truncation::NegativeOnly;
  throw ConfigError("truncation must be one of none, positive, negative" + where(node));
}

nn::Activation parse_activation(const std::string& text, const toml::node& node) {
  if (text == "relu") return nn::Activation::ReLU;
  if (text == "elu") return nn::Activation::ELU;
  if (text == "tanh") return nn::Activation::Tanh;
  throw ConfigError("activation must be one of relu, elu, tanh" + where(node));
}

struct EnvironmentResult {
  env::DomainPair domains;
  env::BehaviorPolicy policy;
};

EnvironmentResult parse_environment(const toml::table& t) {
  const toml::node* variant_node = t.get("variant");
  if (!variant_node) throw ConfigError("[environment] needs 'variant'");
  const std::string variant = as_string(*variant_node, "variant");

  env::BehaviorPolicy policy;
  auto read_policy = [&] {
    if (auto n = t.get("behavior_offset")) policy.logistic_offset = as_real(*n, "behavior_offset");
    if (auto n = t.get("behavior_base")) policy.binary_base = as_real(*n, "behavior_base");
    if (auto n = t.get("behavior_slope")) policy.binary_slope = as_real(*n, "behavior_slope");
  };

  try {
    if (variant == "binary") {
      check_keys(t, {"variant", "source_c", "target_c", "behavior_base", "behavior_slope"}, "[environment]");
      const toml::node* s = t.get("source_c");
      const toml::node* g = t.get("target_c");
      if (!s || !g) throw ConfigError("binary environment needs source_c and target_c");
      const double cs = as_real(*s, "source_c");
      const double ct = as_real(*g, "target_c");
      read_policy();
      return {env::make_domain_pair(env::DomainSpec::binary(cs), env::ContextParams::bernoulli(cs),
                                    env::ContextParams::bernoulli(ct)),
              policy};
    }

    const bool linear = variant == "linear_gaussian";
    if (!linear && variant != "nonlinear_proxy") {
      throw ConfigError("variant must be binary, linear_gaussian or nonlinear_proxy" + where(*variant_node));
    }
    std::set<std::string> allowed{"variant",          "source_mean",   "target_mean",     "source_truncation",
                                  "target_truncation", "dim_w",         "behavior_offset"};
    if (linear) {
      allowed.insert({"a", "b", "threshold"});
    } else {
      allowed.insert({"generator_seed", "generator_hidden", "output_gain", "noise_std", "scale"});
    }
    check_keys(t, allowed, "[environment]");

    const toml::node* sm = t.get("source_mean");
    const toml::node* tm = t.get("target_mean");
    if (!sm || !tm) throw ConfigError("Gaussian environments need source_mean and target_mean");
    env::Truncation st = env::Truncation::None, tt = env::Truncation::None;
    if (auto n = t.get("source_truncation")) st = parse_truncation(as_string(*n, "source_truncation"), *n);
    if (auto n = t.get("target_truncation")) tt = parse_truncation(as_string(*n, "target_truncation"), *n);
    const auto source = env::ContextParams::gaussian(real_list(*sm, "source_mean"), st);
    const auto target = env::ContextParams::gaussian(real_list(*tm, "target_mean"), tt);

    env::ProxyParams proxy = linear ? env::ProxyParams{} : surrogate_proxy(25);
    if (linear) proxy.dim_w = 5;
    if (auto n = t.get("dim_w")) proxy.dim_w = as_count(*n, "dim_w");
    env::RewardParams reward;
    if (linear) {
      if (auto n = t.get("a")) proxy.a = real_list(*n, "a");
      if (auto n = t.get("b")) proxy.b = real_list(*n, "b");
      if (auto n = t.get("threshold")) reward.threshold = as_real(*n, "threshold");
    } else {
      if (auto n = t.get("generator_seed")) proxy.generator_seed = static_cast<std::uint64_t>(as_int(*n, "generator_seed"));
      if (auto n = t.get("generator_hidden")) proxy.hidden_widths = count_list(*n, "generator_hidden");
      if (auto n = t.get("output_gain")) proxy.output_gain = as_real(*n, "output_gain");
      if (auto n = t.get("noise_std")) proxy.noise_std = as_real(*n, "noise_std");
      if (auto n = t.get("scale")) reward.scale = as_real(*n, "scale");
    }
    read_policy();
    const auto mech = linear ? env::DomainSpec::linear_gaussian(source, proxy, reward)
                             : env::DomainSpec::nonlinear_proxy(source, proxy, reward);
    return {env::make_domain_pair(mech, source, target), policy};
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("[environment]: ") + e.what());
  }
}

void check_experiment_keys(const toml::table& t) {
  check_keys(t,
             {"preset", "name", "steps", "seeds", "n_prior", "grad_steps", "threads", "posterior_samples",
              "dump_prior", "latent_dim", "hidden", "activation", "beta", "epochs", "lr", "batch_size",
              "buffer_capacity"},
             "[experiment]");
}

void parse_experiment(const toml::table& t, ExperimentConfig& cfg) {
  check_experiment_keys(t);
  if (auto n = t.get("name")) cfg.name = as_string(*n, "name");
  if (auto n = t.get("steps")) cfg.steps = as_count(*n, "steps");
  if (auto n = t.get("seeds")) {
    if (n->is_array()) {
      cfg.seeds.clear();
      for (const auto& item : *n->as_array()) cfg.seeds.push_back(as_count(item, "seeds"));
    } else {
      cfg.seeds = seed_range(as_count(*n, "seeds"));
    }
  }
  if (auto n = t.get("n_prior")) cfg.n_prior = as_count(*n, "n_prior");
  if (auto n = t.get("grad_steps")) cfg.grad_steps = count_list(*n, "grad_steps");
  if (auto n = t.get("threads")) cfg.threads = as_count(*n, "threads");
  if (auto n = t.get("posterior_samples")) cfg.posterior_samples = as_count(*n, "posterior_samples");
  if (auto n = t.get("dump_prior")) cfg.dump_prior = as_bool(*n, "dump_prior");
  if (auto n = t.get("latent_dim")) cfg.vae.dim_z = as_count(*n, "latent_dim");
  if (auto n = t.get("hidden")) cfg.vae.hidden = count_list(*n, "hidden");
  if (auto n = t.get("activation")) cfg.vae.activation = parse_activation(as_string(*n, "activation"), *n);
  if (auto n = t.get("beta")) cfg.vae.beta = as_real(*n, "beta");
  if (auto n = t.get("epochs")) cfg.vae.pretrain.epochs = as_count(*n, "epochs");
  if (auto n = t.get("lr")) cfg.vae.pretrain.lr = as_real(*n, "lr");
  if (auto n = t.get("batch_size")) cfg.vae.batch_size = as_count(*n, "batch_size");
  if (auto n = t.get("buffer_capacity")) cfg.vae.buffer_capacity = as_count(*n, "buffer_capacity");
}

AgentConfig parse_agent(const toml::table& t) {
  check_keys(t, {"id", "alpha", "smoothing", "sample_posterior"}, "[[agents]]");
  const toml::node* id = t.get("id");
  if (!id) throw ConfigError("every [[agents]] entry needs an 'id'");
  AgentConfig a;
  a.kind = parse_agent_kind(as_string(*id, "id"));
  if (auto n = t.get("alpha")) a.alpha_explore = as_real(*n, "alpha");
  if (auto n = t.get("smoothing")) a.smoothing = as_real(*n, "smoothing");
  if (auto n = t.get("sample_posterior")) a.sample_posterior = as_bool(*n, "sample_posterior");
  return a;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_commas(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = text.find(',', start);
    out.push_back(trim(text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

ExperimentConfig parse_config(std::string_view toml_text, std::string_view source_name) {
  toml::table root;
  try {
    root = toml::parse(toml_text, source_name);
  } catch (const toml::parse_error& e) {
    std::ostringstream os;
    os << "TOML parse error in " << source_name << " at line " << e.source().begin.line << ": " << e.description();
    throw ConfigError(os.str());
  }
  check_keys(root, {"environment", "experiment", "agents"}, "top level");

  const toml::table* experiment = root.get_as<toml::table>("experiment");
  if (root.get("experiment") && !experiment) throw ConfigError("'experiment' must be a table");
  if (experiment) check_experiment_keys(*experiment);
  const toml::table* environment = root.get_as<toml::table>("environment");
  if (root.get("environment") && !environment) throw ConfigError("'environment' must be a table");

  ExperimentConfig cfg;
  bool from_preset = false;
  if (experiment) {
    if (auto n = experiment->get("preset")) {
      cfg = make_preset(as_string(*n, "preset"));
      from_preset = true;
    }
  }
  if (environment) {
    EnvironmentResult env = parse_environment(*environment);
    cfg.domains = std::move(env.domains);
    cfg.policy = env.policy;
  } else if (!from_preset) {
    throw ConfigError("config needs an [environment] table or experiment.preset");
  }
  if (!from_preset) cfg.seeds = seed_range(5);
  if (experiment) parse_experiment(*experiment, cfg);

  if (auto n = root.get("agents")) {
    const toml::array* arr = n->as_array();
    if (!arr || !arr->is_array_of_tables()) throw ConfigError("'agents' must be an array of tables ([[agents]])");
    cfg.agents.clear();
    for (const auto& item : *arr) cfg.agents.push_back(parse_agent(*item.as_table()));
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config_file(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream os;
  os << is.rdbuf();
  return parse_config(os.str(), path.string());
}

std::vector<std::size_t> parse_size_list(std::string_view text, std::string_view what) {
  std::vector<std::size_t> out;
  for (std::string_view item : split_commas(text)) {
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || ec != std::errc() || ptr != item.data() + item.size()) {
      throw ConfigError("invalid " + std::string(what) + " entry '" + std::string(item) + "'");
    }
    out.push_back(v);
  }
  return out;
}

std::vector<AgentConfig> parse_agent_list(std::string_view text) {
  std::vector<AgentConfig> out;
  for (std::string_view item : split_commas(text)) out.push_back({.kind = parse_agent_kind(item)});
  return out;
}

}  // namespace tbandit::harness
