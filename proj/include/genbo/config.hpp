#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "genbo/engine.hpp"

namespace genbo {

/// Config-file error with a line anchor ("file:line: message").
class ConfigError : public Error {
 public:
  ConfigError(const std::string& file, int line, const std::string& message);
  int line() const { return line_; }

 private:
  int line_;
};

/// Flat `key = value` file with dotted keys and '#' comments.
class FlatConfig {
 public:
  static FlatConfig parse_file(const std::string& path);
  static FlatConfig parse_string(std::string_view text, std::string name = "<config>");

  bool has(const std::string& key) const;
  int line_of(const std::string& key) const;

  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;

  /// "0..9" ranges or comma lists ("0,3,7").
  std::vector<std::uint64_t> get_seed_list(const std::string& key,
                                           std::vector<std::uint64_t> fallback) const;

  /// Keys present in the file but never read; nonempty means a typo.
  std::vector<std::string> unused_keys() const;
  const std::string& name() const { return name_; }

 private:
  struct Entry {
    std::string value;
    int line = 0;
  };
  std::string name_;
  std::map<std::string, Entry> entries_;
  mutable std::set<std::string> accessed_;

  const Entry* find(const std::string& key) const;
  [[noreturn]] void fail(const std::string& key, const std::string& message) const;
};

/// A full experiment plan: one base configuration fanned out over methods
/// and seeds.
struct RunPlan {
  std::vector<Method> methods;
  std::vector<std::uint64_t> seeds;
  ExperimentConfig base;  // method field is overwritten per cell
};

/// Parses, applies per-task defaults, validates. Throws ConfigError (with a
/// line anchor when one exists) or ValidationError.
RunPlan load_run_plan(const std::string& path);
RunPlan run_plan_from_config(const FlatConfig& cfg);

}  // namespace genbo
