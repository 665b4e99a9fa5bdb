#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hwsnkey/baselines.hpp"
#include "hwsnkey/deployment.hpp"
#include "hwsnkey/protocol.hpp"

namespace hwsnkey {

enum class ExperimentKind : std::uint8_t { Connectivity, Resilience, HeadCapture };

std::string_view to_string(ExperimentKind kind);

struct Sweep {
  std::string parameter;  // n_i, m, m_prime (connectivity) or c (attacks)
  std::vector<double> values;
};

struct ExperimentConfig {
  std::string name = "experiment";
  ExperimentKind kind = ExperimentKind::Connectivity;
  DeploymentConfig deployment;
  SchemeParams scheme;
  // Schemes compared in attack experiments: "proposed", any baseline name,
  // and the curve-level models "lekm" and "ikdm".
  std::vector<std::string> schemes{"proposed"};
  std::vector<BaselineParams> baselines;  // parameters for listed baselines
  Sweep sweep;
  std::optional<Sweep> series;  // optional outer loop (connectivity only)
  std::size_t trials = 1;
  std::uint64_t seed = 1;
  double misdeploy_fraction = 0.0;
  std::string output_dir = "results";

  // Throws ConfigError naming the offending field.
  void validate() const;
  // Baseline parameters for a listed baseline, defaults if not configured.
  BaselineParams baseline(BaselineScheme scheme) const;
};

// Parses a config document. A run manifest is accepted too: its embedded
// "config" object is used. Throws ConfigError with the JSON path of the
// offending field.
ExperimentConfig parse_experiment_config(std::string_view json_text);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);
// Canonical JSON with every field spelled out.
std::string to_json(const ExperimentConfig& cfg);

std::vector<std::string> preset_names();
// Desk scale uses 9 groups; full scale uses 100 groups on a 1000 m field.
ExperimentConfig preset_config(std::string_view name, bool full_scale = false);

struct ResultRow {
  std::string scheme;
  std::string metric;
  std::string x_name;
  double x = 0.0;
  std::string params;  // key=value pairs joined by ';'
  double analytical = 0.0;  // NaN when undefined
  double simulated = 0.0;   // NaN when not simulated
  double std_error = 0.0;   // NaN when not simulated
  std::size_t trials = 0;
};

inline constexpr std::string_view kResultCsvHeader =
    "scheme,metric,x_name,x,params,analytical,simulated,stderr,trials";

std::string rows_to_csv(const std::vector<ResultRow>& rows);

struct ExperimentResult {
  std::vector<ResultRow> rows;
  std::filesystem::path csv_path;
  std::filesystem::path manifest_path;
  std::vector<std::filesystem::path> plot_paths;
  double wall_seconds = 0.0;
};

// Computes every row without touching the filesystem.
std::vector<ResultRow> compute_experiment(const ExperimentConfig& cfg);

// Writes <output_dir>/<name>.csv, <output_dir>/manifest.json and one plot
// data file per series under <output_dir>/plot/. Throws std::runtime_error
// when the directory cannot be written.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

struct PlotSeries {
  std::string scheme;
  std::string metric;
  std::string params;
  std::string text;  // "#" header line, then one whitespace-separated row per point
};

// Splits a result CSV into per-(scheme, metric, params) columnar series in first
// appearance order. Throws FormatError on a malformed CSV. A header-only CSV
// yields a single header-only series.
std::vector<PlotSeries> emit_plotdata(std::string_view csv);

}  // namespace hwsnkey
