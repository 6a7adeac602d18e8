#pragma once

#include <string>
#include <variant>
#include <vector>

#include "genbo/core.hpp"
#include "genbo/rng.hpp"

namespace genbo {

/// Unit-cost insert/delete/substitute edit distance. Both sequences must be
/// over the same vocab.
int levenshtein(const Sequence& a, const Sequence& b);

/// Text task: maximize -levenshtein(x, target) over V^M.
class AlohaTask {
 public:
  AlohaTask();  // target "ALOHA" over A..Z, M = 5
  AlohaTask(const std::string& target, Vocab vocab);

  double eval(const Sequence& seq) const;

  const Vocab& vocab() const { return vocab_; }
  const Sequence& target() const { return target_; }
  int length() const { return target_.size(); }

 private:
  Vocab vocab_;
  Sequence target_;
};

/// One motif: `pattern[j]` must appear at offset sum(spacings[0..j-1]) from
/// the alignment start.
struct Motif {
  std::vector<int> pattern;
  std::vector<int> spacings;  // length pattern.size() - 1, entries >= 1

  int footprint() const;  // 1 + sum(spacings)
};

/// Closed-form sequence test function with Markov feasibility constraints
/// and quantized motif-satisfaction products. Infeasible sequences score -1;
/// feasible ones score prod_k floor(q * m_k) / q where m_k is the best
/// match fraction of motif k over all alignments. A certificate sequence
/// scoring exactly 1 is stored at construction.
class EhrlichFunction {
 public:
  static EhrlichFunction sample(int M, int num_motifs, int motif_length, int quantization,
                                RngStream& rng, int max_retries = 1000);

  double eval(const Sequence& seq) const;
  bool feasible(const Sequence& seq) const;

  const Sequence& certificate() const { return certificate_; }
  int length() const { return M_; }
  int quantization() const { return q_; }
  const Vocab& vocab() const { return vocab_; }
  const std::vector<Motif>& motifs() const { return motifs_; }
  bool transition_allowed(int from, int to) const {
    return allowed_[static_cast<std::size_t>(from) * static_cast<std::size_t>(vocab_.size()) +
                    static_cast<std::size_t>(to)] != 0;
  }

  std::string to_json_string() const;
  static EhrlichFunction from_json_string(const std::string& text);

  /// Direct constructor for hand-built instances (tests, deserialization).
  /// Validates mask ergodicity and that the certificate scores 1.
  EhrlichFunction(int M, Vocab vocab, std::vector<std::uint8_t> allowed,
                  std::vector<Motif> motifs, int quantization, Sequence certificate);

 private:
  int M_ = 0;
  int q_ = 1;
  Vocab vocab_;
  std::vector<std::uint8_t> allowed_;  // V*V row-major; allowed_[a*V+b]: b may follow a
  std::vector<Motif> motifs_;
  Sequence certificate_;
};

/// Objective wrapper adding Gaussian observation noise.
class BlackBox {
 public:
  explicit BlackBox(AlohaTask task, double noise_sigma = 0.0);
  explicit BlackBox(EhrlichFunction task, double noise_sigma = 0.0);

  double eval(const Sequence& seq) const;
  /// f(seq) plus a N(0, sigma^2) draw; exactly f(seq) when sigma = 0.
  double observe(const Sequence& seq, RngStream& rng) const;

  double f_star() const { return f_star_; }
  double noise_sigma() const { return noise_sigma_; }
  int length() const;
  const Vocab& vocab() const;

  const AlohaTask* aloha() const { return std::get_if<AlohaTask>(&task_); }
  const EhrlichFunction* ehrlich() const { return std::get_if<EhrlichFunction>(&task_); }

 private:
  std::variant<AlohaTask, EhrlichFunction> task_;
  double noise_sigma_ = 0.0;
  double f_star_ = 0.0;
};

}  // namespace genbo
