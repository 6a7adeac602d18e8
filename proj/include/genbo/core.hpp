#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace genbo {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnknownSymbolError : public Error {
 public:
  UnknownSymbolError(char symbol, std::size_t position);
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

class EmptySequenceError : public Error {
 public:
  EmptySequenceError() : Error("empty sequence") {}
};

class EmptyDataError : public Error {
 public:
  explicit EmptyDataError(const std::string& what) : Error(what) {}
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what) : Error(what) {}
};

class DomainTooLargeError : public Error {
 public:
  explicit DomainTooLargeError(const std::string& what) : Error(what) {}
};

class ConstructionFailedError : public Error {
 public:
  explicit ConstructionFailedError(const std::string& what) : Error(what) {}
};

class RejectionBudgetError : public Error {
 public:
  explicit RejectionBudgetError(const std::string& what) : Error(what) {}
};

class NonFiniteLossError : public Error {
 public:
  explicit NonFiniteLossError(const std::string& what) : Error(what) {}
};

/// Ordered alphabet of distinct characters. Token indices follow the
/// declared symbol order, so an alphabetically sorted string gives
/// alphabetical indexing.
class Vocab {
 public:
  explicit Vocab(std::string symbols);

  int size() const { return static_cast<int>(symbols_.size()); }
  char symbol(int index) const { return symbols_.at(static_cast<std::size_t>(index)); }
  /// Index of the symbol, or -1 if absent.
  int index_of(char c) const { return lookup_[static_cast<unsigned char>(c)]; }
  const std::string& symbols() const { return symbols_; }

  bool operator==(const Vocab& other) const { return symbols_ == other.symbols_; }

  static Vocab english_upper();  // A..Z
  static Vocab amino_acids();    // the 20 standard one-letter codes

 private:
  std::string symbols_;
  std::array<int, 256> lookup_{};
};

/// Fixed-length token-index vector; the design point x in V^M.
struct Sequence {
  std::vector<int> tokens;

  Sequence() = default;
  explicit Sequence(std::vector<int> t) : tokens(std::move(t)) {}

  int size() const { return static_cast<int>(tokens.size()); }
  int operator[](int i) const { return tokens[static_cast<std::size_t>(i)]; }
  int& operator[](int i) { return tokens[static_cast<std::size_t>(i)]; }

  auto operator<=>(const Sequence&) const = default;
};

Sequence seq_from_string(std::string_view s, const Vocab& vocab);
std::string seq_to_string(const Sequence& seq, const Vocab& vocab);

/// One black-box evaluation. proposal_logp is the log-density of the
/// distribution the point was sampled from, recorded at sampling time;
/// losses never re-evaluate stale proposals.
struct Observation {
  Sequence seq;
  double y = 0.0;
  int round = 0;
  double proposal_logp = 0.0;
};

/// Append-only evaluation log.
class Dataset {
 public:
  Dataset() = default;

  void append(Observation obs);

  std::span<const Observation> records() const { return records_; }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }
  /// Number of round-0 records (|D0|).
  std::size_t initial_size() const;

  std::vector<double> ys() const;
  double best_y() const;  // throws EmptyDataError

 private:
  std::vector<Observation> records_;
};

/// Per-round metrics emitted by the engine.
struct RoundRecord {
  int round = 0;
  double threshold = 0.0;
  double best_y = 0.0;
  double simple_regret = 0.0;
  double batch_mean_u = 0.0;
  double final_loss = 0.0;
  int n_evals = 0;
};

}  // namespace genbo
