#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace genbo {

/// Deterministic random stream keyed by (master seed, purpose tag, index).
/// Distinct keys yield statistically independent streams no matter in which
/// order they are created, so results are reproducible across thread
/// schedules. Uniform and normal transforms are implemented on top of the
/// raw 64-bit output instead of std::*_distribution, whose output is
/// implementation-defined.
///
/// Stream layout used by the engine, per run seed:
///   ("init-data", 0)    initial dataset sampling
///   ("init-params", 0)  proposal logits initialization
///   ("train", t)        epoch shuffles for round t
///   ("sample", t)       candidate batch for round t (mutations for the baseline)
///   ("noise", t)        observation noise for round t
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::string_view purpose_tag,
            std::uint64_t index);

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform double in [0, 1), 53-bit resolution.
  double uniform();

  /// Standard normal draw (Box-Muller).
  double normal();

  /// Uniform integer in [0, n); n must be >= 1.
  std::size_t uniform_index(std::size_t n);

  /// In-place Fisher-Yates shuffle.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[uniform_index(i)]);
    }
  }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace genbo
