#include "genbo/blackbox.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <queue>

#include "json.hpp"

namespace genbo {

int levenshtein(const Sequence& a, const Sequence& b) {
  const std::size_t m = a.tokens.size();
  const std::size_t n = b.tokens.size();
  if (m == 0) return static_cast<int>(n);
  if (n == 0) return static_cast<int>(m);

  std::vector<int> prev(n + 1), cur(n + 1);
  std::iota(prev.begin(), prev.end(), 0);
  for (std::size_t i = 1; i <= m; ++i) {
    cur[0] = static_cast<int>(i);
    for (std::size_t j = 1; j <= n; ++j) {
      int sub = prev[j - 1] + (a.tokens[i - 1] == b.tokens[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[n];
}

AlohaTask::AlohaTask() : AlohaTask("ALOHA", Vocab::english_upper()) {}

AlohaTask::AlohaTask(const std::string& target, Vocab vocab)
    : vocab_(std::move(vocab)), target_(seq_from_string(target, vocab_)) {}

double AlohaTask::eval(const Sequence& seq) const {
  if (seq.size() != target_.size()) {
    throw ValidationError("sequence length " + std::to_string(seq.size()) +
                          " does not match task length " + std::to_string(target_.size()));
  }
  for (int t : seq.tokens) {
    if (t < 0 || t >= vocab_.size()) throw ValidationError("token index out of vocab range");
  }
  return -static_cast<double>(levenshtein(seq, target_));
}

int Motif::footprint() const {
  int f = 1;
  for (int s : spacings) f += s;
  return f;
}

namespace {

constexpr double kBanProbability = 0.25;
constexpr int kMaxSpacing = 2;

bool strongly_connected(const std::vector<std::uint8_t>& allowed, int v_count) {
  auto bfs = [&](bool reversed) {
    std::vector<char> seen(static_cast<std::size_t>(v_count), 0);
    std::queue<int> q;
    q.push(0);
    seen[0] = 1;
    int visited = 1;
    while (!q.empty()) {
      int a = q.front();
      q.pop();
      for (int b = 0; b < v_count; ++b) {
        bool edge = reversed ? allowed[static_cast<std::size_t>(b) * v_count + a] != 0
                             : allowed[static_cast<std::size_t>(a) * v_count + b] != 0;
        if (edge && !seen[b]) {
          seen[b] = 1;
          ++visited;
          q.push(b);
        }
      }
    }
    return visited == v_count;
  };
  return bfs(false) && bfs(true);
}

/// Element offsets of a motif relative to its alignment start.
std::vector<int> motif_offsets(const Motif& m) {
  std::vector<int> off(m.pattern.size());
  int pos = 0;
  for (std::size_t j = 0; j < m.pattern.size(); ++j) {
    off[j] = pos;
    if (j < m.spacings.size()) pos += m.spacings[j];
  }
  return off;
}

/// Finds a sequence consistent with the pinned positions and the transition
/// mask via a forward reachability pass plus backtracking. Returns false if
/// no such sequence exists.
bool solve_certificate(const std::vector<std::uint8_t>& allowed, int v_count,
                       const std::vector<int>& pinned, Sequence* out) {
  const int m = static_cast<int>(pinned.size());
  std::vector<std::vector<char>> reach(static_cast<std::size_t>(m),
                                       std::vector<char>(static_cast<std::size_t>(v_count), 0));
  for (int v = 0; v < v_count; ++v) {
    if (pinned[0] < 0 || pinned[0] == v) reach[0][v] = 1;
  }
  for (int pos = 1; pos < m; ++pos) {
    for (int v = 0; v < v_count; ++v) {
      if (pinned[pos] >= 0 && pinned[pos] != v) continue;
      for (int u = 0; u < v_count; ++u) {
        if (reach[pos - 1][u] && allowed[static_cast<std::size_t>(u) * v_count + v]) {
          reach[pos][v] = 1;
          break;
        }
      }
    }
  }
  std::vector<int> tokens(static_cast<std::size_t>(m), -1);
  int last = -1;
  for (int v = 0; v < v_count; ++v) {
    if (reach[m - 1][v]) {
      last = v;
      break;
    }
  }
  if (last < 0) return false;
  tokens[static_cast<std::size_t>(m - 1)] = last;
  for (int pos = m - 2; pos >= 0; --pos) {
    int next = tokens[static_cast<std::size_t>(pos + 1)];
    int found = -1;
    for (int u = 0; u < v_count; ++u) {
      if (reach[pos][u] && allowed[static_cast<std::size_t>(u) * v_count + next]) {
        found = u;
        break;
      }
    }
    if (found < 0) return false;
    tokens[static_cast<std::size_t>(pos)] = found;
  }
  *out = Sequence(std::move(tokens));
  return true;
}

}  // namespace

EhrlichFunction::EhrlichFunction(int M, Vocab vocab, std::vector<std::uint8_t> allowed,
                                 std::vector<Motif> motifs, int quantization,
                                 Sequence certificate)
    : M_(M),
      q_(quantization),
      vocab_(std::move(vocab)),
      allowed_(std::move(allowed)),
      motifs_(std::move(motifs)),
      certificate_(std::move(certificate)) {
  const auto v = static_cast<std::size_t>(vocab_.size());
  if (M_ < 1) throw ValidationError("ehrlich: M must be positive");
  if (q_ < 1) throw ValidationError("ehrlich: quantization must be positive");
  if (allowed_.size() != v * v) throw ValidationError("ehrlich: mask must be V x V");
  if (motifs_.empty()) throw ValidationError("ehrlich: needs at least one motif");
  for (const auto& mo : motifs_) {
    if (mo.pattern.empty() || mo.spacings.size() + 1 != mo.pattern.size()) {
      throw ValidationError("ehrlich: motif pattern/spacing sizes inconsistent");
    }
    if (static_cast<int>(mo.pattern.size()) % q_ != 0) {
      throw ValidationError("ehrlich: quantization must divide motif length");
    }
    for (int s : mo.spacings) {
      if (s < 1) throw ValidationError("ehrlich: spacings must be positive");
    }
    if (mo.footprint() > M_) throw ValidationError("ehrlich: motif does not fit in M");
  }
  if (!strongly_connected(allowed_, vocab_.size())) {
    throw ValidationError("ehrlich: transition mask is not ergodic");
  }
  if (certificate_.size() != M_ || eval(certificate_) != 1.0) {
    throw ValidationError("ehrlich: certificate does not achieve value 1");
  }
}

EhrlichFunction EhrlichFunction::sample(int M, int num_motifs, int motif_length,
                                        int quantization, RngStream& rng, int max_retries) {
  Vocab vocab = Vocab::amino_acids();
  const int v_count = vocab.size();
  if (num_motifs < 1 || motif_length < 1) {
    throw ValidationError("ehrlich: num_motifs and motif_length must be positive");
  }
  if (quantization < 1 || motif_length % quantization != 0) {
    throw ValidationError("ehrlich: quantization must divide motif length");
  }
  if (M < num_motifs * (motif_length + kMaxSpacing)) {
    throw ConstructionFailedError("ehrlich: motifs cannot fit, need M >= " +
                                  std::to_string(num_motifs * (motif_length + kMaxSpacing)));
  }

  for (int attempt = 0; attempt < max_retries; ++attempt) {
    // Random mask: ban each ordered pair independently, then re-add a random
    // Hamiltonian cycle so the digraph stays strongly connected.
    std::vector<std::uint8_t> allowed(static_cast<std::size_t>(v_count) * v_count, 1);
    for (auto& a : allowed) {
      if (rng.uniform() < kBanProbability) a = 0;
    }
    std::vector<int> cycle(static_cast<std::size_t>(v_count));
    std::iota(cycle.begin(), cycle.end(), 0);
    rng.shuffle(cycle);
    for (int i = 0; i < v_count; ++i) {
      int a = cycle[static_cast<std::size_t>(i)];
      int b = cycle[static_cast<std::size_t>((i + 1) % v_count)];
      allowed[static_cast<std::size_t>(a) * v_count + b] = 1;
    }

    // Random motifs; re-draw spacings until everything fits in M.
    std::vector<Motif> motifs(static_cast<std::size_t>(num_motifs));
    int total_footprint = 0;
    bool fits = false;
    for (int tries = 0; tries < 64 && !fits; ++tries) {
      total_footprint = 0;
      for (auto& mo : motifs) {
        mo.pattern.resize(static_cast<std::size_t>(motif_length));
        for (auto& p : mo.pattern) p = static_cast<int>(rng.uniform_index(v_count));
        mo.spacings.assign(static_cast<std::size_t>(motif_length - 1), 1);
        for (auto& s : mo.spacings) s = 1 + static_cast<int>(rng.uniform_index(kMaxSpacing));
        total_footprint += mo.footprint();
      }
      fits = total_footprint <= M;
    }
    if (!fits) continue;

    // Place motifs left to right with random slack between them, pin their
    // element positions, and fill the rest along allowed transitions.
    std::vector<int> pinned(static_cast<std::size_t>(M), -1);
    int slack = M - total_footprint;
    int cursor = 0;
    for (const auto& mo : motifs) {
      int gap = static_cast<int>(rng.uniform_index(static_cast<std::size_t>(slack) + 1));
      slack -= gap;
      cursor += gap;
      auto offsets = motif_offsets(mo);
      for (std::size_t j = 0; j < mo.pattern.size(); ++j) {
        pinned[static_cast<std::size_t>(cursor + offsets[j])] = mo.pattern[j];
      }
      cursor += mo.footprint();
    }

    Sequence certificate;
    if (!solve_certificate(allowed, v_count, pinned, &certificate)) continue;

    EhrlichFunction fx(M, vocab, std::move(allowed), std::move(motifs), quantization,
                       std::move(certificate));
    if (fx.eval(fx.certificate()) == 1.0) return fx;
  }
  throw ConstructionFailedError("ehrlich: no feasible instance found within retry budget");
}

bool EhrlichFunction::feasible(const Sequence& seq) const {
  const int v_count = vocab_.size();
  for (int i = 0; i + 1 < seq.size(); ++i) {
    if (!allowed_[static_cast<std::size_t>(seq[i]) * v_count + seq[i + 1]]) return false;
  }
  return true;
}

double EhrlichFunction::eval(const Sequence& seq) const {
  if (seq.size() != M_) {
    throw ValidationError("sequence length " + std::to_string(seq.size()) +
                          " does not match task length " + std::to_string(M_));
  }
  for (int t : seq.tokens) {
    if (t < 0 || t >= vocab_.size()) throw ValidationError("token index out of vocab range");
  }
  if (!feasible(seq)) return -1.0;

  double value = 1.0;
  for (const auto& mo : motifs_) {
    const auto offsets = motif_offsets(mo);
    const int len = static_cast<int>(mo.pattern.size());
    const int span = mo.footprint();
    int best_matches = 0;
    for (int start = 0; start + span <= M_; ++start) {
      int matches = 0;
      for (int j = 0; j < len; ++j) {
        if (seq[start + offsets[static_cast<std::size_t>(j)]] ==
            mo.pattern[static_cast<std::size_t>(j)]) {
          ++matches;
        }
      }
      best_matches = std::max(best_matches, matches);
    }
    // floor(q * matches / len) / q, computed in integers so quantization is exact
    int quantized = (q_ * best_matches) / len;
    value *= static_cast<double>(quantized) / static_cast<double>(q_);
  }
  return value;
}

std::string EhrlichFunction::to_json_string() const {
  nlohmann::json j;
  j["M"] = M_;
  j["vocab"] = vocab_.symbols();
  j["quantization"] = q_;
  const int v_count = vocab_.size();
  std::vector<std::vector<int>> mask(static_cast<std::size_t>(v_count));
  for (int a = 0; a < v_count; ++a) {
    mask[static_cast<std::size_t>(a)].resize(static_cast<std::size_t>(v_count));
    for (int b = 0; b < v_count; ++b) {
      mask[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] =
          allowed_[static_cast<std::size_t>(a) * v_count + b];
    }
  }
  j["allowed"] = mask;
  j["motifs"] = nlohmann::json::array();
  for (const auto& mo : motifs_) {
    j["motifs"].push_back({{"pattern", mo.pattern}, {"spacings", mo.spacings}});
  }
  j["certificate"] = certificate_.tokens;
  return j.dump(2);
}

EhrlichFunction EhrlichFunction::from_json_string(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  int m = j.at("M").get<int>();
  Vocab vocab(j.at("vocab").get<std::string>());
  int q = j.at("quantization").get<int>();
  auto mask = j.at("allowed").get<std::vector<std::vector<int>>>();
  const auto v_count = static_cast<std::size_t>(vocab.size());
  if (mask.size() != v_count) throw ValidationError("ehrlich json: mask row count != V");
  std::vector<std::uint8_t> allowed(v_count * v_count, 0);
  for (std::size_t a = 0; a < v_count; ++a) {
    if (mask[a].size() != v_count) throw ValidationError("ehrlich json: mask col count != V");
    for (std::size_t b = 0; b < v_count; ++b) {
      allowed[a * v_count + b] = mask[a][b] ? 1 : 0;
    }
  }
  std::vector<Motif> motifs;
  for (const auto& mj : j.at("motifs")) {
    Motif mo;
    mo.pattern = mj.at("pattern").get<std::vector<int>>();
    mo.spacings = mj.at("spacings").get<std::vector<int>>();
    motifs.push_back(std::move(mo));
  }
  Sequence certificate(j.at("certificate").get<std::vector<int>>());
  return EhrlichFunction(m, std::move(vocab), std::move(allowed), std::move(motifs), q,
                         std::move(certificate));
}

BlackBox::BlackBox(AlohaTask task, double noise_sigma)
    : task_(std::move(task)), noise_sigma_(noise_sigma), f_star_(0.0) {
  if (noise_sigma_ < 0) throw ValidationError("noise_sigma must be >= 0");
}

BlackBox::BlackBox(EhrlichFunction task, double noise_sigma)
    : task_(std::move(task)), noise_sigma_(noise_sigma), f_star_(1.0) {
  if (noise_sigma_ < 0) throw ValidationError("noise_sigma must be >= 0");
}

double BlackBox::eval(const Sequence& seq) const {
  return std::visit([&](const auto& t) { return t.eval(seq); }, task_);
}

double BlackBox::observe(const Sequence& seq, RngStream& rng) const {
  double y = eval(seq);
  if (noise_sigma_ > 0) y += noise_sigma_ * rng.normal();
  return y;
}

int BlackBox::length() const {
  return std::visit([](const auto& t) { return t.length(); }, task_);
}

const Vocab& BlackBox::vocab() const {
  return std::visit([](const auto& t) -> const Vocab& { return t.vocab(); }, task_);
}

}  // namespace genbo
