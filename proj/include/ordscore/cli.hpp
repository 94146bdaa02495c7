#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ordscore/optimizer.hpp"

namespace ordscore::cli {

enum class ResponseTransform { Identity, Sqrt, Log };
enum class Mode { Compare, Baseline, Quantile, Spline };

const char* to_string(Mode mode) noexcept;
Mode mode_from_string(const std::string& name);

struct FactorConfig {
  std::string column;
  std::vector<std::string> levels;  ///< in factor order
  std::optional<int> baseline_degree;
  bool scored = false;
  int spline_knots = 1;
  SplineMethod spline_method = SplineMethod::FritschCarlson;
  std::optional<std::vector<double>> fixed_scores;
};

struct RunConfig {
  std::filesystem::path data_path;
  std::string response;
  ResponseTransform response_transform = ResponseTransform::Identity;
  Family family = Family::GaussianIdentity;
  std::vector<std::string> numeric_covariates;
  std::vector<FactorConfig> factor_terms;
  std::filesystem::path output_dir = "ordscore-out";
  std::uint64_t seed = 0;
  Mode mode = Mode::Compare;
};

/// Parses a schema-1 JSON config. Relative data paths resolve against
/// `base_dir`. Throws ConfigError.
RunConfig parse_config(const std::string& json_text, const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::filesystem::path& path);

/// RFC 4180 style CSV: header row, comma delimiter, optional quoting.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column_index(const std::string& name) const;  ///< throws ConfigError
};

CsvTable parse_csv(std::istream& in);
CsvTable read_csv(const std::filesystem::path& path);

/// Typed columns for the config: transformed response, covariates and
/// factors coded by the configured level order.
Dataset load_dataset(const CsvTable& table, const RunConfig& config);
Dataset load_dataset(const RunConfig& config);

EncodingPlan encoding_plan(const RunConfig& config, const Dataset& data);
std::vector<Variant> variants_for(Mode mode);

struct RunOutput {
  std::vector<VariantReport> reports;
  std::string summary;      ///< summary.txt
  std::string scores_json;  ///< scores.json
  std::string plot_csv;     ///< plot_data.csv
  std::string report_json;  ///< report.json
};

/// Runs the configured fits and renders every output file in memory.
RunOutput execute(const RunConfig& config);

/// Coefficient table in the usual summary layout, plus the residual line.
std::string format_table(const FitResult& fit);

/// execute() and write the four files into config.output_dir. Returns the
/// process exit code: 0 ok, 1 config/data error, 2 numerical failure.
/// Messages go to `err`.
int run(const RunConfig& config, std::ostream& err);

}  // namespace ordscore::cli
