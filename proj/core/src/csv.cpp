#include "truncls/csv.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace truncls {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream stream(line);
  while (std::getline(stream, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

double parse_number(const std::string& field, std::size_t line_no) {
  std::size_t consumed = 0;
  double value = 0.0;
  try {
    value = std::stod(field, &consumed);
  } catch (const std::exception&) {
    throw std::runtime_error("csv: line " + std::to_string(line_no) +
                             ": cannot parse '" + field + "'");
  }
  while (consumed < field.size() &&
         (field[consumed] == ' ' || field[consumed] == '\r')) {
    ++consumed;
  }
  if (consumed != field.size()) {
    throw std::runtime_error("csv: line " + std::to_string(line_no) +
                             ": trailing characters in '" + field + "'");
  }
  return value;
}

std::string format_number(double value) {
  if (std::isnan(value)) return "";
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.9g", value);
  return buffer;
}

}  // namespace

Dataset read_dataset_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("csv: cannot open " + path);

  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("csv: empty file " + path);
  const auto header = split_line(line);
  if (header.size() < 2) {
    throw std::runtime_error("csv: header must name at least x1 and y");
  }
  const auto d = static_cast<Eigen::Index>(header.size() - 1);

  std::vector<std::vector<double>> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto fields = split_line(line);
    if (static_cast<Eigen::Index>(fields.size()) != d + 1) {
      throw std::runtime_error("csv: line " + std::to_string(line_no) +
                               ": expected " + std::to_string(d + 1) +
                               " fields, got " + std::to_string(fields.size()));
    }
    std::vector<double> row;
    row.reserve(fields.size());
    for (const auto& field : fields) row.push_back(parse_number(field, line_no));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error("csv: no data rows in " + path);

  Dataset data;
  data.xs.resize(static_cast<Eigen::Index>(rows.size()), d);
  data.ys.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      data.xs(static_cast<Eigen::Index>(i), j) = rows[i][static_cast<std::size_t>(j)];
    }
    data.ys[static_cast<Eigen::Index>(i)] = rows[i].back();
  }
  data.validate();
  return data;
}

void write_dataset_csv(const std::string& path, const Dataset& data) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("csv: cannot write " + path);
  for (Eigen::Index j = 0; j < data.d(); ++j) out << 'x' << (j + 1) << ',';
  out << "y\n";
  char buffer[64];
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    for (Eigen::Index j = 0; j < data.d(); ++j) {
      std::snprintf(buffer, sizeof(buffer), "%.17g", data.xs(i, j));
      out << buffer << ',';
    }
    std::snprintf(buffer, sizeof(buffer), "%.17g", data.ys[i]);
    out << buffer << '\n';
  }
}

std::string noise_label(const NoiseSpec& noise) {
  switch (noise.kind) {
    case NoiseKind::kGaussian: return "gauss";
    case NoiseKind::kHeavyTailed: return "heavy";
    case NoiseKind::kAsymHeavyTailed: return "asym";
    case NoiseKind::kDiracGaussianMixture: return "mixture";
  }
  return "unknown";
}

namespace {

std::string design_label(DesignKind kind) {
  switch (kind) {
    case DesignKind::kInc: return "inc";
    case DesignKind::kHcc: return "hcc";
    case DesignKind::kTs: return "ts";
  }
  return "unknown";
}

std::string params_label(const ScenarioConfig& config) {
  std::ostringstream out;
  switch (config.noise.kind) {
    case NoiseKind::kGaussian:
      break;
    case NoiseKind::kHeavyTailed:
    case NoiseKind::kAsymHeavyTailed:
      out << "q=" << config.noise.q << ';';
      break;
    case NoiseKind::kDiracGaussianMixture:
      out << "p=" << config.noise.p << ";rho=" << config.noise.rho << ';';
      break;
  }
  out << "sigma=" << config.noise_sigma;
  return out.str();
}

}  // namespace

std::string summary_csv_header() {
  return "design,n,d,noise,params,reps,n_differ,n_better,"
         "mean_excess_ols,ci_ols,mean_excess_trunc,ci_trunc,"
         "cond_ols,cond_ci_ols,cond_trunc,cond_ci_trunc,mean_removed";
}

namespace {

// "mean,half_width" with both cells empty when the interval has no samples.
std::string ci_cells(const CiValue& ci) {
  if (ci.count == 0) return ",";
  return format_number(ci.mean) + ',' + format_number(ci.half_width);
}

}  // namespace

std::string summary_csv_row(const ScenarioConfig& config,
                            const ScenarioSummary& summary) {
  std::ostringstream out;
  out << design_label(config.design) << ',' << config.n << ',' << config.d
      << ',' << noise_label(config.noise) << ',' << params_label(config) << ','
      << summary.replications << ',' << summary.n_differ << ','
      << summary.n_better << ',' << ci_cells(summary.excess_ols) << ','
      << ci_cells(summary.excess_trunc) << ','
      << ci_cells(summary.cond_excess_ols) << ','
      << ci_cells(summary.cond_excess_trunc) << ','
      << format_number(summary.mean_removed);
  return out.str();
}

void append_summary_csv(const std::string& path, const std::string& row) {
  namespace fs = std::filesystem;
  const bool fresh = !fs::exists(path) || fs::file_size(path) == 0;
  std::ofstream out(path, std::ios::app);
  if (!out) throw std::runtime_error("csv: cannot write " + path);
  if (fresh) out << summary_csv_header() << '\n';
  out << row << '\n';
}

}  // namespace truncls
