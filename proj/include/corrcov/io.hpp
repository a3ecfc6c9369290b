#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "corrcov/bounds.hpp"
#include "corrcov/experiments.hpp"

namespace corrcov {

// One CSV line: `model,x,mean,stderr,theoretical,censored`.
// Min-sample rows: x = n, mean/stderr of the minimal m, theoretical = nan.
// Log-error rows: x = m, mean/stderr of the spectral error, censored = 0.
struct CsvRow {
  std::string model;
  double x = 0.0;
  double mean = 0.0;
  double stderr_ = 0.0;
  double theoretical = 0.0;
  std::size_t censored = 0;
};

inline constexpr std::string_view kCsvHeader = "model,x,mean,stderr,theoretical,censored";

std::vector<CsvRow> csv_rows(const ExperimentResult& result);
// Numbers use 17 significant digits so parsing restores them exactly.
void write_csv(std::span<const CsvRow> rows, const std::filesystem::path& path);
void write_csv(const ExperimentResult& result, const std::filesystem::path& path);
std::vector<CsvRow> read_csv(const std::filesystem::path& path);

enum class LineStyle { Solid, Dashed };

struct Series {
  std::string label;
  std::vector<std::pair<double, double>> points;
  LineStyle style = LineStyle::Solid;
};

// Line plot description. The constructor rejects specs with no series, a
// series with fewer than two points, or any non-finite coordinate.
class PlotSpec {
 public:
  PlotSpec(std::string title, std::string x_label, std::string y_label, std::vector<Series> series,
           std::filesystem::path output_path);

  const std::string& title() const noexcept { return title_; }
  const std::string& x_label() const noexcept { return x_label_; }
  const std::string& y_label() const noexcept { return y_label_; }
  const std::vector<Series>& series() const noexcept { return series_; }
  const std::filesystem::path& output_path() const noexcept { return output_path_; }

 private:
  std::string title_;
  std::string x_label_;
  std::string y_label_;
  std::vector<Series> series_;
  std::filesystem::path output_path_;
};

// Standalone SVG document for the spec; a pure function of its input.
std::string svg_document(const PlotSpec& spec);
void render_svg(const PlotSpec& spec);

// Figure for an experiment: minimal m against n, or log10 mean spectral error
// against m with dashed expectation-bound curves.
PlotSpec experiment_plot(const ExperimentResult& result, const std::filesystem::path& output_path);

std::string bound_report_json(const BoundReport& report, int indent = 2);
std::string experiment_result_json(const ExperimentResult& result, int indent = 2);

// Parses the flat JSON experiment config. Keys: name, experiment
// ("min_sample_vs_dim" | "log_error_vs_m"), models (descriptor strings),
// n_range and m_range ([start, stop, step] or a single integer), eta, trials,
// master_seed, sigma_spec ("identity" or an array of rows), m_cap. Unknown
// keys and malformed values throw InvalidConfig; bad JSON throws ParseError.
ExperimentConfig parse_experiment_config(std::string_view json_text);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

// Covariance from a JSON file holding an array of rows.
DenseMatrix load_sigma_file(const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

struct ExperimentFiles {
  std::vector<std::filesystem::path> csv;
  std::filesystem::path svg;
  std::filesystem::path json;
};

// Writes <out_dir>/<name>_<model>.csv per model, <out_dir>/<name>.svg and
// <out_dir>/<name>.json, creating out_dir if needed.
ExperimentFiles write_experiment_outputs(const ExperimentResult& result, const std::filesystem::path& out_dir);

struct ReproductionSummary {
  std::vector<ExperimentResult> results;
  std::vector<DominanceRow> dominance;
  std::vector<std::string> warnings;
};

// Runs the three published experiments at the given trial scale and writes
// their outputs plus bounds.json and summary.json into out_dir.
ReproductionSummary reproduce_paper(const std::filesystem::path& out_dir, std::uint64_t seed, double scale,
                                    const RunOptions& opts = {});

}  // namespace corrcov
