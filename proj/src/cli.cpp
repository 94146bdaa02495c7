#include "ordscore/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "ordscore/error.hpp"

namespace ordscore::cli {

using nlohmann::json;
namespace fs = std::filesystem;

const char* to_string(Mode mode) noexcept {
  switch (mode) {
    case Mode::Compare: return "compare";
    case Mode::Baseline: return "baseline";
    case Mode::Quantile: return "quantile";
    case Mode::Spline: return "spline";
  }
  return "unknown";
}

Mode mode_from_string(const std::string& name) {
  if (name == "compare") return Mode::Compare;
  if (name == "baseline") return Mode::Baseline;
  if (name == "quantile") return Mode::Quantile;
  if (name == "spline") return Mode::Spline;
  throw Error(ErrorCode::ConfigError,
              "unknown mode '" + name + "' (expected compare, quantile, spline or baseline)");
}

namespace {

ResponseTransform transform_from_string(const std::string& name) {
  if (name == "identity") return ResponseTransform::Identity;
  if (name == "sqrt") return ResponseTransform::Sqrt;
  if (name == "log") return ResponseTransform::Log;
  throw Error(ErrorCode::ConfigError,
              "unknown response_transform '" + name + "' (expected identity, sqrt or log)");
}

const char* to_string(ResponseTransform t) {
  switch (t) {
    case ResponseTransform::Identity: return "identity";
    case ResponseTransform::Sqrt: return "sqrt";
    case ResponseTransform::Log: return "log";
  }
  return "identity";
}

SplineMethod method_from_string(const std::string& name) {
  if (name == "fritsch-carlson") return SplineMethod::FritschCarlson;
  if (name == "hyman") return SplineMethod::Hyman;
  throw Error(ErrorCode::ConfigError,
              "unknown spline_method '" + name + "' (expected fritsch-carlson or hyman)");
}

FactorConfig parse_factor(const json& j) {
  FactorConfig f;
  f.column = j.at("column").get<std::string>();
  f.levels = j.at("levels").get<std::vector<std::string>>();
  if (j.contains("baseline_degree")) f.baseline_degree = j.at("baseline_degree").get<int>();
  if (j.contains("score")) {
    const auto& s = j.at("score");
    if (s.is_boolean()) {
      f.scored = s.get<bool>();
    } else if (s.is_object()) {
      f.scored = true;
      f.spline_knots = s.value("spline_knots", 1);
      f.spline_method = method_from_string(s.value("spline_method", "fritsch-carlson"));
      if (s.contains("fixed")) f.fixed_scores = s.at("fixed").get<std::vector<double>>();
    } else {
      throw Error(ErrorCode::ConfigError, "factor '" + f.column + "': 'score' must be a bool or object");
    }
  }
  return f;
}

}  // namespace

RunConfig parse_config(const std::string& text, const fs::path& base_dir) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ConfigError, std::string("config is not valid JSON: ") + e.what());
  }
  try {
    if (!j.is_object() || j.value("schema", 0) != 1)
      throw Error(ErrorCode::ConfigError, "config must be an object with \"schema\": 1");
    RunConfig c;
    c.data_path = j.at("data").get<std::string>();
    if (c.data_path.is_relative() && !base_dir.empty()) c.data_path = base_dir / c.data_path;
    c.response = j.at("response").get<std::string>();
    c.response_transform = transform_from_string(j.value("response_transform", "identity"));
    c.family = family_from_string(j.value("family", "gaussian"));
    c.numeric_covariates = j.value("covariates", std::vector<std::string>{});
    for (const auto& f : j.value("factors", json::array())) c.factor_terms.push_back(parse_factor(f));
    if (j.contains("output_dir")) {
      c.output_dir = j.at("output_dir").get<std::string>();
      if (c.output_dir.is_relative() && !base_dir.empty()) c.output_dir = base_dir / c.output_dir;
    }
    c.seed = j.value("seed", std::uint64_t{0});
    c.mode = mode_from_string(j.value("mode", "compare"));
    return c;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ConfigError, std::string("config: ") + e.what());
  }
}

RunConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigError, "cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.parent_path());
}

std::size_t CsvTable::column_index(const std::string& name) const {
  auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end())
    throw Error(ErrorCode::ConfigError, "column '" + name + "' not found in the CSV header");
  return static_cast<std::size_t>(it - header.begin());
}

CsvTable parse_csv(std::istream& in) {
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (text.starts_with("\xEF\xBB\xBF")) text.erase(0, 3);

  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool quoted = false;
  bool field_started = false;
  std::size_t line = 1;
  auto end_field = [&] {
    record.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_record = [&] {
    end_field();
    if (!(record.size() == 1 && record[0].empty())) records.push_back(std::move(record));
    record.clear();
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char ch = text[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        if (ch == '\n') ++line;
        field.push_back(ch);
      }
      continue;
    }
    switch (ch) {
      case '"':
        if (field_started)
          throw Error(ErrorCode::DataError, "stray quote on line " + std::to_string(line));
        quoted = true;
        field_started = true;
        break;
      case ',': end_field(); break;
      case '\r': break;
      case '\n':
        end_record();
        ++line;
        break;
      default:
        field.push_back(ch);
        field_started = true;
    }
  }
  if (quoted) throw Error(ErrorCode::DataError, "unterminated quoted field");
  if (field_started || !field.empty() || !record.empty()) end_record();

  if (records.empty()) throw Error(ErrorCode::DataError, "CSV has no header row");
  CsvTable table;
  table.header = std::move(records.front());
  for (std::size_t r = 1; r < records.size(); ++r) {
    if (records[r].size() != table.header.size())
      throw Error(ErrorCode::DataError, fmt::format("row {} has {} fields, header has {}", r,
                                                    records[r].size(), table.header.size()));
    table.rows.push_back(std::move(records[r]));
  }
  return table;
}

CsvTable read_csv(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ConfigError, "cannot open data file " + path.string());
  return parse_csv(in);
}

namespace {

double parse_number(const std::string& cell, std::size_t row, const std::string& column) {
  if (cell.empty() || cell == "NA")
    throw Error(ErrorCode::DataError,
                fmt::format("missing value in column '{}' at row {}", column, row));
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(cell, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != cell.size() || !std::isfinite(v))
    throw Error(ErrorCode::DataError,
                fmt::format("cannot parse '{}' as a number in column '{}' at row {}", cell,
                            column, row));
  return v;
}

Eigen::VectorXd numeric_column(const CsvTable& t, const std::string& name) {
  const auto idx = t.column_index(name);
  Eigen::VectorXd v(static_cast<Eigen::Index>(t.rows.size()));
  for (std::size_t r = 0; r < t.rows.size(); ++r)
    v[static_cast<Eigen::Index>(r)] = parse_number(t.rows[r][idx], r + 1, name);
  return v;
}

}  // namespace

Dataset load_dataset(const CsvTable& table, const RunConfig& config) {
  // resolve every column first so a missing one is a ConfigError
  table.column_index(config.response);
  for (const auto& c : config.numeric_covariates) table.column_index(c);
  for (const auto& f : config.factor_terms) table.column_index(f.column);

  Dataset data;
  data.response_name = config.response;
  Eigen::VectorXd y = numeric_column(table, config.response);
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const auto row = static_cast<std::size_t>(i + 1);
    switch (config.response_transform) {
      case ResponseTransform::Identity: break;
      case ResponseTransform::Sqrt:
        if (y[i] < 0)
          throw Error(ErrorCode::DataError, fmt::format("negative response at row {}", row));
        y[i] = std::sqrt(y[i]);
        break;
      case ResponseTransform::Log:
        if (y[i] <= 0)
          throw Error(ErrorCode::DataError, fmt::format("nonpositive response at row {}", row));
        y[i] = std::log(y[i]);
        break;
    }
  }
  data.response = std::move(y);
  for (const auto& c : config.numeric_covariates) data.numeric.emplace(c, numeric_column(table, c));

  for (const auto& f : config.factor_terms) {
    const auto idx = table.column_index(f.column);
    std::vector<int> codes;
    codes.reserve(table.rows.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
      const auto& cell = table.rows[r][idx];
      if (cell.empty())
        throw Error(ErrorCode::DataError,
                    fmt::format("missing value in column '{}' at row {}", f.column, r + 1));
      auto it = std::find(f.levels.begin(), f.levels.end(), cell);
      if (it == f.levels.end())
        throw Error(ErrorCode::DataError,
                    fmt::format("unknown level '{}' in column '{}' at row {}", cell, f.column, r + 1));
      codes.push_back(static_cast<int>(it - f.levels.begin()) + 1);
    }
    data.factors.emplace(f.column, OrderedFactor(f.column, f.levels, std::move(codes)));
  }
  return data;
}

Dataset load_dataset(const RunConfig& config) { return load_dataset(read_csv(config.data_path), config); }

EncodingPlan encoding_plan(const RunConfig& config, const Dataset& data) {
  EncodingPlan plan;
  plan.family = config.family;
  plan.covariates = config.numeric_covariates;
  for (const auto& f : config.factor_terms) {
    const int k = data.factor(f.column).num_levels();
    FactorPlan p;
    p.factor = f.column;
    p.baseline_degree = f.baseline_degree.value_or(k - 1);
    p.scored = f.scored;
    p.spline_knots = f.spline_knots;
    p.spline_method = f.spline_method;
    p.fixed_scores = f.fixed_scores;
    plan.factors.push_back(std::move(p));
  }
  return plan;
}

std::vector<Variant> variants_for(Mode mode) {
  switch (mode) {
    case Mode::Compare: return {Variant::Baseline, Variant::Quantile, Variant::Spline};
    case Mode::Baseline: return {Variant::Baseline};
    case Mode::Quantile: return {Variant::Quantile};
    case Mode::Spline: return {Variant::Spline};
  }
  return {};
}

std::string format_table(const FitResult& fit) {
  const bool gaussian = fit.family == Family::GaussianIdentity;
  std::size_t width = 0;
  for (const auto& c : fit.coefficients) width = std::max(width, c.name.size());
  std::string out = fmt::format("{:>{}} {:>10} {:>10} {:>8} {:>9}\n", "", width, "Estimate",
                                "Std. Error", gaussian ? "t value" : "z value",
                                gaussian ? "Pr(>|t|)" : "Pr(>|z|)");
  // avoid printing "-0.00"
  auto fixed = [](double v, int digits) {
    std::string s = fmt::format("{:.{}f}", v, digits);
    if (s.find_first_not_of("-0.") == std::string::npos && s.front() == '-') s.erase(0, 1);
    return s;
  };
  for (const auto& c : fit.coefficients) {
    out += fmt::format("{:>{}} {:>10} {:>10} {:>8} {:>9}\n", c.name, width, fixed(c.estimate, 3),
                       fixed(c.std_error, 2), fixed(c.statistic, 2), fixed(c.p_value, 2));
  }
  if (gaussian)
    out += fmt::format("Residual standard deviation: {} on {} degrees of freedom\n",
                       fixed(fit.residual_sd, 2), fit.df_residual);
  else
    out += fmt::format("Residual deviance: {} on {} degrees of freedom\n", fixed(fit.criterion, 2),
                       fit.df_residual);
  return out;
}

namespace {

json theta_json(const ThetaBlock& theta) {
  if (const auto* gh = std::get_if<GHParams>(&theta)) return {{"g", gh->g}, {"h", gh->h}};
  if (const auto* sp = std::get_if<SplineScoreParams>(&theta)) return {{"t", sp->t}, {"y", sp->y}};
  return nullptr;
}

json mapping_json(const Mapping& m) {
  json j = {{"kind", to_string(m.kind)}};
  if (m.kind == Mapping::Kind::Spline) {
    j["knots"] = m.knots;
    j["method"] = to_string(m.method);
  }
  return j;
}

}  // namespace

RunOutput execute(const RunConfig& config) {
  const Dataset data = load_dataset(config);
  const EncodingPlan plan = encoding_plan(config, data);
  const auto variants = variants_for(config.mode);

  RunOutput out;
  // configuration problems surface before any fitting starts
  for (auto v : variants) {
    const auto spec = variant_spec(plan, v);
    for (const auto& term : spec.factors)
      validate_term(term, data.factor(term.factor).num_levels());
  }
  SearchOptions search;
  search.seed = config.seed;
  out.reports = compare_encodings(plan, data, variants, search);

  json scores = {{"schema", 1}, {"variants", json::array()}};
  json report = {{"schema", 1},
                 {"mode", to_string(config.mode)},
                 {"seed", config.seed},
                 {"response", config.response},
                 {"response_transform", to_string(config.response_transform)},
                 {"family", to_string(config.family)},
                 {"observations", data.rows()},
                 {"variants", json::array()}};
  out.plot_csv = "variant,factor,level_index,level_label,score\n";

  for (const auto& r : out.reports) {
    const auto& fit = r.result.fit;
    const std::string name = to_string(r.variant);
    out.summary += fmt::format("== {} ==\n", name);
    out.summary += format_table(fit);
    out.summary += "\n";

    json factors = json::array();
    for (const auto& fs : r.result.scores) {
      factors.push_back({{"factor", fs.factor},
                         {"levels", fs.levels},
                         {"scores", fs.scores.vector()},
                         {"mapping", mapping_json(fs.mapping)},
                         {"theta", theta_json(fs.theta)}});
      for (std::size_t k = 0; k < fs.levels.size(); ++k) {
        std::string label = fs.levels[k];
        if (label.find_first_of(",\"\n") != std::string::npos) {
          std::string q = "\"";
          for (char ch : label) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
          label = q + "\"";
        }
        out.plot_csv += fmt::format("{},{},{},{},{:.17g}\n", name, fs.factor, k + 1, label,
                                    fs.scores[k]);
      }
    }
    scores["variants"].push_back({{"variant", name}, {"factors", factors}});

    json coefs = json::array();
    for (const auto& c : fit.coefficients)
      coefs.push_back({{"name", c.name},
                       {"estimate", c.estimate},
                       {"std_error", c.std_error},
                       {"statistic", c.statistic},
                       {"p_value", c.p_value}});
    json entry = {{"variant", name},
                  {"criterion", fit.criterion},
                  {"df_residual", fit.df_residual},
                  {"coefficients", coefs},
                  {"optimizer",
                   {{"start_criterion", r.result.search.start_value},
                    {"evaluations", r.result.total_evaluations},
                    {"local_searches", r.result.local_searches},
                    {"iterations", r.result.search.iterations},
                    {"converged", r.result.search.converged}}}};
    if (fit.family == Family::GaussianIdentity) entry["residual_sd"] = fit.residual_sd;
    report["variants"].push_back(std::move(entry));
  }
  out.scores_json = scores.dump(2) + "\n";
  out.report_json = report.dump(2) + "\n";
  return out;
}

namespace {

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream o(path, std::ios::binary | std::ios::trunc);
  o << content;
  if (!o) throw std::runtime_error("cannot write " + path.string());
}

}  // namespace

int run(const RunConfig& config, std::ostream& err) {
  RunOutput out;
  try {
    out = execute(config);
  } catch (const Error& e) {
    err << "ordscore: " << e.what() << "\n";
    return e.is_input_error() ? 1 : 2;
  } catch (const std::exception& e) {
    err << "ordscore: " << e.what() << "\n";
    return 2;
  }
  try {
    fs::create_directories(config.output_dir);
    write_file(config.output_dir / "summary.txt", out.summary);
    write_file(config.output_dir / "scores.json", out.scores_json);
    write_file(config.output_dir / "plot_data.csv", out.plot_csv);
    write_file(config.output_dir / "report.json", out.report_json);
  } catch (const std::exception& e) {
    err << "ordscore: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace ordscore::cli
