#include "genbo/runner.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace genbo {

std::string format_double(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

std::string csv_line(const CsvRow& row) {
  std::ostringstream out;
  out << row.method << ',' << row.seed << ',' << row.round << ',' << row.n_evals << ','
      << format_double(row.threshold) << ',' << format_double(row.best_y) << ','
      << format_double(row.simple_regret) << ',' << format_double(row.batch_mean_u) << ','
      << format_double(row.final_loss);
  return out.str();
}

std::vector<CsvRow> rows_from_result(const RunResult& result) {
  std::vector<CsvRow> rows;
  rows.reserve(result.rounds.size());
  for (const auto& r : result.rounds) {
    CsvRow row;
    row.method = result.method_label;
    row.seed = result.seed;
    row.round = r.round;
    row.n_evals = r.n_evals;
    row.threshold = r.threshold;
    row.best_y = r.best_y;
    row.simple_regret = r.simple_regret;
    row.batch_mean_u = r.batch_mean_u;
    row.final_loss = r.final_loss;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<CsvRow> parse_results_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("csv: empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCsvHeader) throw ValidationError("csv: unexpected header: " + line);

  std::vector<CsvRow> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 9) {
      throw ValidationError("csv line " + std::to_string(line_no) + ": expected 9 fields");
    }
    try {
      CsvRow row;
      row.method = fields[0];
      row.seed = std::stoull(fields[1]);
      row.round = std::stoi(fields[2]);
      row.n_evals = std::stoi(fields[3]);
      row.threshold = std::stod(fields[4]);
      row.best_y = std::stod(fields[5]);
      row.simple_regret = std::stod(fields[6]);
      row.batch_mean_u = std::stod(fields[7]);
      row.final_loss = std::stod(fields[8]);
      rows.push_back(std::move(row));
    } catch (const std::exception&) {
      throw ValidationError("csv line " + std::to_string(line_no) + ": bad field");
    }
  }
  if (rows.empty()) throw ValidationError("csv: no data rows");
  return rows;
}

std::map<std::string, SummaryStats> summarize_final_regret(const std::vector<CsvRow>& rows) {
  std::map<std::string, int> final_round;
  for (const auto& row : rows) {
    auto [it, inserted] = final_round.try_emplace(row.method, row.round);
    if (!inserted) it->second = std::max(it->second, row.round);
  }
  std::map<std::string, std::vector<double>> finals;
  for (const auto& row : rows) {
    if (row.round == final_round.at(row.method)) finals[row.method].push_back(row.simple_regret);
  }
  std::map<std::string, SummaryStats> out;
  for (const auto& [method, values] : finals) {
    SummaryStats st;
    st.count = static_cast<int>(values.size());
    double sum = 0.0;
    for (double v : values) sum += v;
    st.mean = sum / static_cast<double>(values.size());
    if (values.size() > 1) {
      double sq = 0.0;
      for (double v : values) sq += (v - st.mean) * (v - st.mean);
      st.stddev = std::sqrt(sq / static_cast<double>(values.size() - 1));
    }
    out[method] = st;
  }
  return out;
}

std::string summary_to_json(const std::map<std::string, SummaryStats>& summary) {
  nlohmann::json j;
  for (const auto& [method, st] : summary) {
    j["methods"][method] = {
        {"final_regret_mean", st.mean}, {"final_regret_std", st.stddev}, {"seeds", st.count}};
  }
  return j.dump(2);
}

namespace {

struct Cell {
  Method method;
  std::uint64_t seed;
};

std::uint64_t seed_offset_from_env() {
  const char* env = std::getenv("GENBO_SEED_OFFSET");
  if (!env || !*env) return 0;
  return std::strtoull(env, nullptr, 10);
}

}  // namespace

int cmd_run(const RunnerOptions& options, std::ostream& log) {
  RunPlan plan;
  try {
    plan = load_run_plan(options.config_path);
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    log << "config error: " << e.what() << "\n";
    return 2;
  }

  namespace fs = std::filesystem;
  const fs::path out_dir(options.out_dir);
  const fs::path csv_path = out_dir / "results.csv";
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) {
    log << "cannot create output directory " << out_dir << ": " << ec.message() << "\n";
    return 2;
  }
  if (fs::exists(csv_path) && !options.force) {
    log << csv_path.string() << " already exists; pass --force to overwrite\n";
    return 2;
  }

  const std::uint64_t seed_offset = seed_offset_from_env();
  std::vector<std::uint64_t> seeds = plan.seeds;
  for (auto& s : seeds) s += seed_offset;

  std::optional<BlackBox> bb;
  try {
    bb.emplace(make_blackbox(plan.base));
  } catch (const Error& e) {
    log << "task construction failed: " << e.what() << "\n";
    return 2;
  }
  if (const auto* ehrlich = bb->ehrlich()) {
    std::ofstream out(out_dir / "ehrlich_instance.json");
    out << ehrlich->to_json_string() << "\n";
  }

  std::vector<Cell> cells;
  for (Method method : plan.methods) {
    for (std::uint64_t seed : seeds) cells.push_back(Cell{method, seed});
  }

  struct CellOutcome {
    std::vector<CsvRow> rows;
    std::string params_json;
    std::string label;
    std::uint64_t seed = 0;
    std::exception_ptr error;
    bool done = false;
  };
  std::vector<CellOutcome> outcomes(cells.size());

  const int workers = std::max(1, std::min<int>(options.parallelism,
                                                static_cast<int>(cells.size())));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      auto& outcome = outcomes[i];
      try {
        ExperimentConfig cfg = plan.base;
        cfg.method = cells[i].method;
        RunResult result = run_experiment(cfg, *bb, cells[i].seed);
        outcome.rows = rows_from_result(result);
        outcome.label = result.method_label;
        outcome.seed = result.seed;
        if (cfg.method == Method::GenBO) {
          outcome.params_json = params_to_json_string(result.final_params);
        }
      } catch (...) {
        outcome.error = std::current_exception();
      }
      outcome.done = true;
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }

  // Rows land in deterministic (method, seed) cell order regardless of the
  // worker schedule.
  std::ofstream csv(csv_path);
  csv << kCsvHeader << "\n";
  std::vector<CsvRow> all_rows;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    auto& outcome = outcomes[i];
    if (outcome.error) {
      csv.flush();
      try {
        std::rethrow_exception(outcome.error);
      } catch (const std::exception& e) {
        log << "run failed (method=" << method_name(cells[i].method)
            << ", seed=" << cells[i].seed << "): " << e.what() << "\n";
      }
      return 1;
    }
    for (const auto& row : outcome.rows) {
      csv << csv_line(row) << "\n";
      all_rows.push_back(row);
    }
    if (!outcome.params_json.empty()) {
      std::ofstream params(out_dir / ("params_" + outcome.label + "_seed" +
                                      std::to_string(outcome.seed) + ".json"));
      params << outcome.params_json << "\n";
    }
  }
  csv.close();

  std::ofstream summary(out_dir / "summary.json");
  summary << summary_to_json(summarize_final_regret(all_rows)) << "\n";

  log << "wrote " << all_rows.size() << " rows to " << csv_path.string() << "\n";
  return 0;
}

int cmd_plot(const std::string& csv_path, const std::string& out_svg, std::ostream& log) {
  std::ifstream in(csv_path);
  if (!in) {
    log << "cannot open " << csv_path << "\n";
    return 2;
  }
  std::vector<CsvRow> rows;
  try {
    rows = parse_results_csv(in);
  } catch (const Error& e) {
    log << e.what() << "\n";
    return 2;
  }
  std::ofstream out(out_svg);
  if (!out) {
    log << "cannot write " << out_svg << "\n";
    return 1;
  }
  out << render_regret_svg(rows);
  log << "wrote " << out_svg << "\n";
  return 0;
}

}  // namespace genbo
