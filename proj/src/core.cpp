#include "genbo/core.hpp"

#include <algorithm>
#include <limits>

namespace genbo {

UnknownSymbolError::UnknownSymbolError(char symbol, std::size_t position)
    : Error("unknown symbol '" + std::string(1, symbol) + "' at position " +
            std::to_string(position)),
      position_(position) {}

Vocab::Vocab(std::string symbols) : symbols_(std::move(symbols)) {
  if (symbols_.size() < 2 || symbols_.size() > 64) {
    throw ValidationError("vocab size must be in [2, 64], got " +
                          std::to_string(symbols_.size()));
  }
  lookup_.fill(-1);
  for (std::size_t i = 0; i < symbols_.size(); ++i) {
    auto c = static_cast<unsigned char>(symbols_[i]);
    if (lookup_[c] != -1) {
      throw ValidationError("duplicate symbol '" + std::string(1, symbols_[i]) +
                            "' in vocab");
    }
    lookup_[c] = static_cast<int>(i);
  }
}

Vocab Vocab::english_upper() { return Vocab("ABCDEFGHIJKLMNOPQRSTUVWXYZ"); }

Vocab Vocab::amino_acids() { return Vocab("ACDEFGHIKLMNPQRSTVWY"); }

Sequence seq_from_string(std::string_view s, const Vocab& vocab) {
  if (s.empty()) throw EmptySequenceError();
  std::vector<int> tokens;
  tokens.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    int idx = vocab.index_of(s[i]);
    if (idx < 0) throw UnknownSymbolError(s[i], i);
    tokens.push_back(idx);
  }
  return Sequence(std::move(tokens));
}

std::string seq_to_string(const Sequence& seq, const Vocab& vocab) {
  std::string out;
  out.reserve(seq.tokens.size());
  for (int t : seq.tokens) out.push_back(vocab.symbol(t));
  return out;
}

void Dataset::append(Observation obs) { records_.push_back(std::move(obs)); }

std::size_t Dataset::initial_size() const {
  std::size_t n = 0;
  for (const auto& r : records_) {
    if (r.round == 0) ++n;
  }
  return n;
}

std::vector<double> Dataset::ys() const {
  std::vector<double> out;
  out.reserve(records_.size());
  for (const auto& r : records_) out.push_back(r.y);
  return out;
}

double Dataset::best_y() const {
  if (records_.empty()) throw EmptyDataError("best_y on empty dataset");
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& r : records_) best = std::max(best, r.y);
  return best;
}

}  // namespace genbo
