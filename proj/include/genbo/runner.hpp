#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "genbo/config.hpp"
#include "genbo/engine.hpp"

namespace genbo {

inline constexpr const char* kCsvHeader =
    "method,seed,round,n_evals,threshold,best_y,simple_regret,batch_mean_u,final_loss";

struct CsvRow {
  std::string method;
  std::uint64_t seed = 0;
  int round = 0;
  int n_evals = 0;
  double threshold = 0.0;
  double best_y = 0.0;
  double simple_regret = 0.0;
  double batch_mean_u = 0.0;
  double final_loss = 0.0;
};

/// Round-trip float formatting (%.17g) so reruns are byte-identical.
std::string format_double(double value);

std::string csv_line(const CsvRow& row);
std::vector<CsvRow> rows_from_result(const RunResult& result);

/// Parses a results file; throws ValidationError on header or field
/// mismatches.
std::vector<CsvRow> parse_results_csv(std::istream& in);

struct SummaryStats {
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation across seeds
  int count = 0;
};

/// Final-round simple regret per method.
std::map<std::string, SummaryStats> summarize_final_regret(const std::vector<CsvRow>& rows);

std::string summary_to_json(const std::map<std::string, SummaryStats>& summary);

struct RunnerOptions {
  std::string config_path;
  std::string out_dir;
  int parallelism = 1;
  bool force = false;
};

/// Exit codes: 0 ok, 1 runtime failure (partial CSV flushed), 2 config error.
int cmd_run(const RunnerOptions& options, std::ostream& log);
int cmd_plot(const std::string& csv_path, const std::string& out_svg, std::ostream& log);
int cmd_selfcheck(std::ostream& out);

/// Regret-vs-round SVG with a mean line and a +-1 stddev band per method;
/// legend sorted by final mean regret, descending.
std::string render_regret_svg(const std::vector<CsvRow>& rows);

}  // namespace genbo
