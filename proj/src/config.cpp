#include "genbo/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace genbo {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

}  // namespace

ConfigError::ConfigError(const std::string& file, int line, const std::string& message)
    : Error(file + ":" + std::to_string(line) + ": " + message), line_(line) {}

FlatConfig FlatConfig::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, 0, "cannot open config file");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_string(buf.str(), path);
}

FlatConfig FlatConfig::parse_string(std::string_view text, std::string name) {
  FlatConfig cfg;
  cfg.name_ = std::move(name);
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, end == std::string_view::npos ? text.size() - pos : end - pos);
    pos = end == std::string_view::npos ? text.size() + 1 : end + 1;
    ++line_no;

    const auto hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(cfg.name_, line_no, "expected 'key = value'");
    }
    std::string key = trim(std::string_view(stripped).substr(0, eq));
    std::string value = trim(std::string_view(stripped).substr(eq + 1));
    if (key.empty()) throw ConfigError(cfg.name_, line_no, "empty key");
    if (cfg.entries_.count(key)) {
      throw ConfigError(cfg.name_, line_no, "duplicate key '" + key + "'");
    }
    cfg.entries_[key] = Entry{value, line_no};
  }
  return cfg;
}

const FlatConfig::Entry* FlatConfig::find(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return nullptr;
  accessed_.insert(key);
  return &it->second;
}

bool FlatConfig::has(const std::string& key) const { return find(key) != nullptr; }

int FlatConfig::line_of(const std::string& key) const {
  auto it = entries_.find(key);
  return it == entries_.end() ? 0 : it->second.line;
}

void FlatConfig::fail(const std::string& key, const std::string& message) const {
  throw ConfigError(name_, line_of(key), "key '" + key + "': " + message);
}

std::string FlatConfig::get_string(const std::string& key, const std::string& fallback) const {
  const Entry* e = find(key);
  return e ? e->value : fallback;
}

double FlatConfig::get_double(const std::string& key, double fallback) const {
  const Entry* e = find(key);
  if (!e) return fallback;
  try {
    std::size_t used = 0;
    double value = std::stod(e->value, &used);
    if (used != e->value.size()) fail(key, "not a number: '" + e->value + "'");
    return value;
  } catch (const std::invalid_argument&) {
    fail(key, "not a number: '" + e->value + "'");
  } catch (const std::out_of_range&) {
    fail(key, "number out of range: '" + e->value + "'");
  }
}

int FlatConfig::get_int(const std::string& key, int fallback) const {
  const Entry* e = find(key);
  if (!e) return fallback;
  try {
    std::size_t used = 0;
    int value = std::stoi(e->value, &used);
    if (used != e->value.size()) fail(key, "not an integer: '" + e->value + "'");
    return value;
  } catch (const std::invalid_argument&) {
    fail(key, "not an integer: '" + e->value + "'");
  } catch (const std::out_of_range&) {
    fail(key, "integer out of range: '" + e->value + "'");
  }
}

std::uint64_t FlatConfig::get_u64(const std::string& key, std::uint64_t fallback) const {
  const Entry* e = find(key);
  if (!e) return fallback;
  try {
    std::size_t used = 0;
    auto value = std::stoull(e->value, &used);
    if (used != e->value.size()) fail(key, "not an integer: '" + e->value + "'");
    return value;
  } catch (const std::exception&) {
    fail(key, "not an integer: '" + e->value + "'");
  }
}

bool FlatConfig::get_bool(const std::string& key, bool fallback) const {
  const Entry* e = find(key);
  if (!e) return fallback;
  if (e->value == "true" || e->value == "1" || e->value == "yes") return true;
  if (e->value == "false" || e->value == "0" || e->value == "no") return false;
  fail(key, "expected true/false: '" + e->value + "'");
}

std::vector<std::uint64_t> FlatConfig::get_seed_list(
    const std::string& key, std::vector<std::uint64_t> fallback) const {
  const Entry* e = find(key);
  if (!e) return fallback;
  const std::string& text = e->value;
  std::vector<std::uint64_t> seeds;
  const auto range = text.find("..");
  try {
    if (range != std::string::npos) {
      const auto lo = std::stoull(trim(std::string_view(text).substr(0, range)));
      const auto hi = std::stoull(trim(std::string_view(text).substr(range + 2)));
      if (hi < lo) fail(key, "descending seed range");
      for (auto s = lo; s <= hi; ++s) seeds.push_back(s);
    } else {
      std::stringstream ss(text);
      std::string item;
      while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) seeds.push_back(std::stoull(item));
      }
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    fail(key, "expected 'a..b' or a comma list of integers: '" + text + "'");
  }
  if (seeds.empty()) fail(key, "no seeds given");
  return seeds;
}

std::vector<std::string> FlatConfig::unused_keys() const {
  std::vector<std::string> out;
  for (const auto& [key, entry] : entries_) {
    if (!accessed_.count(key)) out.push_back(key);
  }
  return out;
}

RunPlan load_run_plan(const std::string& path) {
  return run_plan_from_config(FlatConfig::parse_file(path));
}

RunPlan run_plan_from_config(const FlatConfig& cfg) {
  RunPlan plan;
  ExperimentConfig& c = plan.base;

  const std::string task_name = cfg.get_string("task.name", "aloha");
  if (task_name == "aloha") {
    c.task.kind = TaskSpec::Kind::Aloha;
    c.task.aloha.target = cfg.get_string("aloha.target", "ALOHA");
    c.task.aloha.vocab = cfg.get_string("task.vocab", "ABCDEFGHIJKLMNOPQRSTUVWXYZ");
    c.task.aloha.min_init_edit_distance = cfg.get_int("aloha.min_init_edit_distance", 4);
    c.rounds = cfg.get_int("run.rounds", 10);
    c.batch_size = cfg.get_int("run.batch_size", 8);
    c.init_size = cfg.get_int("run.init_size", 64);
  } else if (task_name == "ehrlich") {
    c.task.kind = TaskSpec::Kind::Ehrlich;
    c.task.ehrlich.length = cfg.get_int("ehrlich.length", 15);
    c.task.ehrlich.num_motifs = cfg.get_int("ehrlich.motifs", 2);
    c.task.ehrlich.motif_length = cfg.get_int("ehrlich.motif_length", 4);
    c.task.ehrlich.quantization = cfg.get_int("ehrlich.quantization", 4);
    c.task.ehrlich.task_seed = cfg.get_u64("ehrlich.task_seed", 0);
    c.task.ehrlich.instance_path = cfg.get_string("ehrlich.instance", "");
    c.rounds = cfg.get_int("run.rounds", 32);
    c.batch_size = cfg.get_int("run.batch_size", 128);
    c.init_size = cfg.get_int("run.init_size", 128);
  } else {
    throw ConfigError(cfg.name(), cfg.line_of("task.name"),
                      "unknown task '" + task_name + "' (aloha | ehrlich)");
  }

  try {
    c.loss.kind = loss_from_name(cfg.get_string("loss.kind", "rpl"));
  } catch (const ValidationError& e) {
    throw ConfigError(cfg.name(), cfg.line_of("loss.kind"), e.what());
  }
  c.loss.temperature = cfg.get_double("loss.temperature", 1.0);
  c.loss.p_flip = cfg.get_double("loss.p_flip", 0.1);
  c.loss.use_importance_weights = cfg.get_bool("loss.use_importance_weights", false);

  try {
    c.utility.kind = utility_from_name(cfg.get_string("utility.kind", "sei"));
  } catch (const ValidationError& e) {
    throw ConfigError(cfg.name(), cfg.line_of("utility.kind"), e.what());
  }
  c.utility.sharpness = cfg.get_double("utility.sharpness", 1.0);

  const std::string prior_mode = cfg.get_string("prior.mode", "noprior");
  if (prior_mode == "noprior") {
    c.prior_mode = PriorMode::NoPrior;
  } else if (prior_mode == "prior") {
    c.prior_mode = PriorMode::FromInitData;
  } else {
    throw ConfigError(cfg.name(), cfg.line_of("prior.mode"),
                      "unknown prior mode '" + prior_mode + "' (noprior | prior)");
  }
  c.prior_smoothing = cfg.get_double("prior.smoothing", 1.0);

  try {
    c.reg_kind = reg_from_name(cfg.get_string("reg.kind", "quadratic"));
  } catch (const ValidationError& e) {
    throw ConfigError(cfg.name(), cfg.line_of("reg.kind"), e.what());
  }
  c.reg_lambda0 = cfg.get_double("reg.lambda0", 0.1);

  c.cbas_last_batch_only = cfg.get_bool("run.cbas_last_batch_only", false);
  c.noise_sigma = cfg.get_double("run.noise_sigma", 0.0);

  c.train.learning_rate = cfg.get_double("train.learning_rate", 0.05);
  c.train.epochs = cfg.get_int("train.epochs", 200);
  c.train.adam_beta1 = cfg.get_double("train.adam_beta1", 0.9);
  c.train.adam_beta2 = cfg.get_double("train.adam_beta2", 0.999);
  c.train.adam_eps = cfg.get_double("train.adam_eps", 1e-8);
  c.train.grad_clip_norm = cfg.get_double("train.grad_clip_norm", 10.0);
  c.train.warm_start = cfg.get_bool("train.warm_start", true);
  c.init_logit_stddev = cfg.get_double("train.init_logit_stddev", 0.01);

  c.schedule.p_start = cfg.get_double("schedule.p_start", 0.5);
  c.schedule.p_end = cfg.get_double("schedule.p_end", 0.99);
  c.schedule.total_rounds = c.rounds;

  plan.seeds = cfg.get_seed_list("run.seeds", {0, 1, 2, 3, 4, 5, 6, 7, 8, 9});

  const std::string methods = cfg.get_string("methods", "genbo,random-mutation");
  std::stringstream ss(methods);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto first = item.find_first_not_of(" \t");
    const auto last = item.find_last_not_of(" \t");
    if (first == std::string::npos) continue;
    try {
      plan.methods.push_back(method_from_name(item.substr(first, last - first + 1)));
    } catch (const ValidationError& e) {
      throw ConfigError(cfg.name(), cfg.line_of("methods"), e.what());
    }
  }
  if (plan.methods.empty()) {
    throw ConfigError(cfg.name(), cfg.line_of("methods"), "no methods given");
  }

  const auto unused = cfg.unused_keys();
  if (!unused.empty()) {
    throw ConfigError(cfg.name(), cfg.line_of(unused.front()),
                      "unknown key '" + unused.front() + "'");
  }

  try {
    c.validate();
  } catch (const ValidationError& e) {
    throw ConfigError(cfg.name(), 0, e.what());
  }
  return plan;
}

}  // namespace genbo
