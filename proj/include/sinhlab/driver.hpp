#pragma once

#include "sinhlab/asymptotics.hpp"

#include <json.hpp>

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

namespace sinhlab {

/// One JSON experiment file. Unknown keys are rejected.
struct ExperimentConfig {
  Domain domain = Domain::unit_disc();
  std::vector<Vec2> seeds;
  std::vector<int> signs;
  std::vector<double> rho_schedule;
  double h = 1.0 / 128;
  int eigen_count = 5;
  double newton_tol = 1e-8;
  double critical_tol = 1e-10;
  double eigen_tol = 1e-13;
  BoundaryScheme scheme = BoundaryScheme::CutCell;
  FitOptions fit;
  RescaleOptions rescale;
  ProbeOptions probes;
  std::string output_dir = "out";
  bool write_fields = true;

  int m() const { return static_cast<int>(seeds.size()); }
  SignedConfig signed_config() const;
  /// Throws ConfigInvalid: schedule descending, K >= 4m + 1, tolerances positive.
  void validate() const;
};

ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& path);
nlohmann::json to_json(const ExperimentConfig& c);

nlohmann::json to_json(const Domain& d);
Domain domain_from_json(const nlohmann::json& j);
nlohmann::json to_json(const CriticalPointResult& r);
nlohmann::json to_json(const SpectrumResult& r, const MorseCount& morse);

nlohmann::json to_json(const AsymptoticReport& r);
AsymptoticReport report_from_json(const nlohmann::json& j);

/// Writes report.json and report.csv into `dir`; both are byte-stable for equal reports.
void export_report(const AsymptoticReport& r, const std::filesystem::path& dir);
std::string report_csv(const AsymptoticReport& r);
std::string report_json_text(const AsymptoticReport& r);

/// Little-endian "SPFIELD1" file: u32 domain kind, f64 h, u64 node count, node coordinates
/// (x, y pairs), values. A JSON sidecar carries the same header plus free-form metadata.
struct FieldFile {
  DomainKind kind = DomainKind::Disc;
  double h = 0.0;
  std::vector<Vec2> nodes;
  Eigen::VectorXd values;
};

/// Writes <stem>.bin and <stem>.json, and <stem>.csv with (x, y, value) rows when `csv` is set.
void write_field(const GridField& f, const std::filesystem::path& stem, const nlohmann::json& meta, bool csv = false);
FieldFile read_field(const std::filesystem::path& bin);

struct PipelineResult {
  CriticalPointResult crit;
  std::vector<double> taus;
  AsymptoticReport report;
};

/// Stops after the given stage; later stages are skipped and the report stays empty.
enum class PipelineStage { Critical, Solve, Spectrum, Full };

/// critical point -> taus -> continuation -> eigenpairs per rho -> rescale and fit -> report.
/// Artifacts go to `out_dir` as they are produced; a failing stage is rethrown with its name
/// and everything written before it stays on disk.
PipelineResult run_pipeline(const ExperimentConfig& config, const std::filesystem::path& out_dir,
                            PipelineStage until = PipelineStage::Full);

}  // namespace sinhlab
