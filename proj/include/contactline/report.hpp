#pragma once

#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "contactline/nonlinear.hpp"

namespace contactline {

inline constexpr int report_schema_version = 1;

struct RunMetadata {
  std::string command;
  double h = 0.0, dt = 0.0, eps = 0.0, sigma_small = 0.0;
  std::string config_hash;
  nlohmann::json config = nlohmann::json::object();
};

/// Everything one run writes. `results` holds command-specific scalars and tables.
struct RunReport {
  RunMetadata meta;
  EnergyReport energy;
  std::vector<IterationRecord> iterations;
  nlohmann::json results = nlohmann::json::object();
};

/// Column names of energy.csv, in order.
std::vector<std::string> energy_columns();
/// Column names of iterations.csv, in order.
std::vector<std::string> iteration_columns();

std::string energy_csv(const EnergyReport& rep);
std::string iterations_csv(const std::vector<IterationRecord>& log);
/// Generic CSV with %.17g cells; throws NonFinite on NaN or infinity.
std::string csv_table(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows);

nlohmann::json residuals_json(const NonlinearResiduals& r);
nlohmann::json energy_summary_json(const EnergyReport& rep);
/// summary.json content: schema version, metadata, energy summary, iteration log and results.
nlohmann::json summary_json(const RunReport& rep);

struct PlotSeries {
  std::string label;
  std::vector<double> x, y;
};
/// Static SVG line plot; non-positive values are dropped on a log axis.
std::string line_plot_svg(const std::string& title, const std::string& xlabel, const std::vector<PlotSeries>& series,
                          bool log_y = false);

enum class ReportFormat { Csv, Json, Svg };

/// Writes energy.csv, iterations.csv, summary.json and plots/{energy,dissipation,ratios}.svg
/// into `dir` (created if missing). Returns the written paths.
std::vector<std::filesystem::path> emit_report(const RunReport& rep, const std::filesystem::path& dir,
                                               const std::set<ReportFormat>& formats = {ReportFormat::Csv,
                                                                                        ReportFormat::Json,
                                                                                        ReportFormat::Svg});

/// Creates parent directories and writes `text`; throws IoFailure.
void write_text_file(const std::filesystem::path& path, const std::string& text);

} // namespace contactline
