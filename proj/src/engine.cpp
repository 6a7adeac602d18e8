#include "genbo/engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace genbo {

const char* method_name(Method m) {
  return m == Method::GenBO ? "genbo" : "random-mutation";
}

Method method_from_name(const std::string& name) {
  if (name == "genbo") return Method::GenBO;
  if (name == "random-mutation") return Method::RandomMutation;
  throw ValidationError("unknown method: " + name);
}

void ExperimentConfig::validate() const {
  if (rounds < 1) throw ValidationError("rounds (T) must be >= 1");
  if (batch_size < 1) throw ValidationError("batch_size (B) must be >= 1");
  if (init_size < 2) throw ValidationError("init_size must be >= 2 (thresholds need data)");
  if (noise_sigma < 0) throw ValidationError("noise_sigma must be >= 0");
  loss.validate();
  train.validate();
  if (utility.kind == UtilityKind::SR && !is_preference_loss(loss.kind)) {
    throw ValidationError("SR utility requires a preference loss (KL losses need u >= 0)");
  }
  if (utility.kind == UtilityKind::SEI && utility.sharpness <= 0) {
    throw ValidationError("sEI sharpness must be > 0");
  }
  if (!(schedule.p_start > 0 && schedule.p_start <= schedule.p_end && schedule.p_end < 1)) {
    throw ValidationError("threshold schedule needs 0 < p_start <= p_end < 1");
  }
  if (prior_mode == PriorMode::FromInitData && prior_smoothing <= 0) {
    throw ValidationError("prior smoothing must be > 0");
  }
  if (reg_lambda0 < 0) throw ValidationError("reg lambda0 must be >= 0");
  if (init_logit_stddev < 0) throw ValidationError("init_logit_stddev must be >= 0");
  if (task.kind == TaskSpec::Kind::Aloha) {
    if (task.aloha.min_init_edit_distance > static_cast<int>(task.aloha.target.size())) {
      throw ValidationError("min_init_edit_distance exceeds sequence length");
    }
  }
}

std::string ExperimentConfig::method_label() const {
  if (method == Method::RandomMutation) return "random-mutation";
  std::string label = "genbo-";
  label += loss_name(loss.kind);
  label += "-";
  label += utility_name(utility.kind);
  label += prior_mode == PriorMode::NoPrior ? "-noprior" : "-prior";
  if (is_preference_loss(loss.kind) == false && loss.use_importance_weights) label += "-iw";
  if (cbas_last_batch_only) label += "-lastbatch";
  return label;
}

double simple_regret(double best_y, double f_star) {
  double r = f_star - best_y;
  if (r < 0 && r >= -1e-12) r = 0.0;
  return r;
}

Dataset init_dataset(const BlackBox& bb, int size, RngStream& rng,
                     std::optional<int> min_edit_distance) {
  if (size < 2) throw ValidationError("init_dataset size must be >= 2");
  const int m = bb.length();
  const int v = bb.vocab().size();
  const double uniform_logp = -static_cast<double>(m) * std::log(static_cast<double>(v));
  const Sequence* target = bb.aloha() ? &bb.aloha()->target() : nullptr;

  Dataset data;
  long budget = 1000000;
  while (static_cast<int>(data.size()) < size) {
    if (--budget < 0) {
      throw RejectionBudgetError("init_dataset rejection budget exceeded");
    }
    std::vector<int> tokens(static_cast<std::size_t>(m));
    for (auto& t : tokens) t = static_cast<int>(rng.uniform_index(static_cast<std::size_t>(v)));
    Sequence seq(std::move(tokens));
    if (min_edit_distance && target && levenshtein(seq, *target) < *min_edit_distance) {
      continue;
    }
    const double y = bb.observe(seq, rng);
    data.append(Observation{std::move(seq), y, 0, uniform_logp});
  }
  return data;
}

BlackBox make_blackbox(const ExperimentConfig& config) {
  if (config.task.kind == TaskSpec::Kind::Aloha) {
    return BlackBox(AlohaTask(config.task.aloha.target, Vocab(config.task.aloha.vocab)),
                    config.noise_sigma);
  }
  const auto& es = config.task.ehrlich;
  if (!es.instance_path.empty()) {
    std::ifstream in(es.instance_path);
    if (!in) throw ValidationError("cannot open ehrlich instance: " + es.instance_path);
    std::stringstream buf;
    buf << in.rdbuf();
    return BlackBox(EhrlichFunction::from_json_string(buf.str()), config.noise_sigma);
  }
  RngStream task_rng(es.task_seed, "task", 0);
  return BlackBox(EhrlichFunction::sample(es.length, es.num_motifs, es.motif_length,
                                          es.quantization, task_rng),
                  config.noise_sigma);
}

Engine::Engine(const ExperimentConfig& config, const BlackBox& bb, std::uint64_t seed)
    : config_(config),
      bb_(bb),
      seed_(seed),
      prior_(Prior::uniform(bb.length(), bb.vocab().size())),
      params_(MeanFieldParams::zeros(bb.length(), bb.vocab().size())) {
  config_.validate();

  RngStream init_rng(seed_, "init-data", 0);
  std::optional<int> min_dist;
  if (config_.task.kind == TaskSpec::Kind::Aloha &&
      config_.task.aloha.min_init_edit_distance > 0) {
    min_dist = config_.task.aloha.min_init_edit_distance;
  }
  data_ = init_dataset(bb_, config_.init_size, init_rng, min_dist);

  if (config_.prior_mode == PriorMode::FromInitData) {
    prior_ = Prior::from_data(data_, bb_.length(), bb_.vocab().size(), config_.prior_smoothing);
  }

  RngStream param_rng(seed_, "init-params", 0);
  params_ = MeanFieldParams::gaussian_init(bb_.length(), bb_.vocab().size(),
                                           config_.init_logit_stddev, param_rng);
  theta0_ = params_.logits;
  best_y_ = data_.best_y();
}

std::vector<TrainExample> Engine::training_slice(int t, double threshold) const {
  std::vector<TrainExample> slice;
  slice.reserve(data_.size());
  for (const auto& rec : data_.records()) {
    if (config_.cbas_last_batch_only && rec.round != t - 1) continue;
    slice.push_back(TrainExample{rec.seq, config_.utility(rec.y, threshold), rec.proposal_logp});
  }
  return slice;
}

std::vector<Sequence> Engine::propose_batch(int t) {
  RngStream sample_rng(seed_, "sample", static_cast<std::uint64_t>(t));
  auto batch = sample(params_, sample_rng, config_.batch_size);
  batch_logp_.clear();
  for (const auto& seq : batch) batch_logp_.push_back(log_prob(params_, seq));
  return batch;
}

std::vector<Sequence> Engine::mutate_batch(int t) {
  RngStream sample_rng(seed_, "sample", static_cast<std::uint64_t>(t));
  const int m = bb_.length();
  const int v = bb_.vocab().size();

  // Pool: the B best unique sequences by observed y (best y per sequence),
  // ties broken lexicographically for determinism.
  std::map<Sequence, double> best_by_seq;
  for (const auto& rec : data_.records()) {
    auto [it, inserted] = best_by_seq.try_emplace(rec.seq, rec.y);
    if (!inserted) it->second = std::max(it->second, rec.y);
  }
  std::vector<std::pair<Sequence, double>> pool(best_by_seq.begin(), best_by_seq.end());
  std::stable_sort(pool.begin(), pool.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  const std::size_t pool_size =
      std::min<std::size_t>(pool.size(), static_cast<std::size_t>(config_.batch_size));

  const int num_mutations = std::min(3, m);
  std::vector<Sequence> batch;
  batch.reserve(static_cast<std::size_t>(config_.batch_size));
  batch_logp_.clear();
  const double uniform_logp = -static_cast<double>(m) * std::log(static_cast<double>(v));
  for (int b = 0; b < config_.batch_size; ++b) {
    Sequence child = pool[sample_rng.uniform_index(pool_size)].first;
    // distinct positions; the new symbol may equal the old one
    std::vector<int> positions(static_cast<std::size_t>(m));
    std::iota(positions.begin(), positions.end(), 0);
    sample_rng.shuffle(positions);
    for (int k = 0; k < num_mutations; ++k) {
      child[positions[static_cast<std::size_t>(k)]] =
          static_cast<int>(sample_rng.uniform_index(static_cast<std::size_t>(v)));
    }
    batch.push_back(std::move(child));
    batch_logp_.push_back(uniform_logp);  // placeholder: the baseline trains no proposal
  }
  return batch;
}

RoundRecord Engine::run_round(int t) {
  if (t < 1 || t > config_.rounds) throw ValidationError("round index out of [1, T]");
  ThresholdSchedule sched = config_.schedule;
  sched.total_rounds = config_.rounds;
  const double threshold = compute_threshold(data_, t, sched);

  if (config_.method == Method::GenBO) {
    auto slice = training_slice(t, threshold);
    bool trainable = !slice.empty();
    if (is_preference_loss(config_.loss.kind)) {
      // Pairs need at least two distinct utility values.
      trainable = false;
      for (std::size_t i = 1; i < slice.size(); ++i) {
        if (slice[i].u != slice[0].u) {
          trainable = true;
          break;
        }
      }
    }
    if (trainable) {
      RngStream train_rng(seed_, "train", static_cast<std::uint64_t>(t));
      FitResult fr = fit(params_, config_.loss, slice, prior_, theta0_,
                         static_cast<double>(data_.size()), config_.reg_lambda0,
                         config_.reg_kind, config_.train, train_rng);
      last_fit_loss_ = fr.final_loss;
    } else {
      last_fit_loss_ = 0.0;
    }
  }

  auto batch = config_.method == Method::GenBO ? propose_batch(t) : mutate_batch(t);

  RngStream noise_rng(seed_, "noise", static_cast<std::uint64_t>(t));
  double batch_u_sum = 0.0;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const double y = bb_.observe(batch[i], noise_rng);
    batch_u_sum += config_.utility(y, threshold);
    best_y_ = std::max(best_y_, y);
    data_.append(Observation{batch[i], y, t, batch_logp_[i]});
  }

  RoundRecord rec;
  rec.round = t;
  rec.threshold = threshold;
  rec.best_y = best_y_;
  rec.simple_regret = simple_regret(best_y_, bb_.f_star());
  rec.batch_mean_u = batch_u_sum / static_cast<double>(batch.size());
  rec.final_loss = config_.method == Method::GenBO ? last_fit_loss_ : 0.0;
  rec.n_evals = static_cast<int>(data_.size());
  return rec;
}

RunResult Engine::run_all() {
  const auto start = std::chrono::steady_clock::now();
  RunResult result;
  result.method_label = config_.method_label();
  result.seed = seed_;
  result.initial_best_y = best_y_;
  result.initial_regret = simple_regret(best_y_, bb_.f_star());
  result.rounds.reserve(static_cast<std::size_t>(config_.rounds));
  for (int t = 1; t <= config_.rounds; ++t) result.rounds.push_back(run_round(t));
  if (config_.method == Method::GenBO) result.final_params = params_;
  result.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

RunResult run_experiment(const ExperimentConfig& config, const BlackBox& bb,
                         std::uint64_t seed) {
  Engine engine(config, bb, seed);
  return engine.run_all();
}

}  // namespace genbo
