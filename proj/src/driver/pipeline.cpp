#include "sinhlab/driver.hpp"

#include "sinhlab/errors.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cstdio>
#include <fstream>

namespace sinhlab {

using nlohmann::json;

namespace {

/// Reraises with the stage name, keeping the error code.
template <class F>
auto stage(const char* name, F&& body) -> decltype(body()) {
  try {
    return body();
  } catch (const Error& e) {
    std::string msg = e.what();
    const auto colon = msg.find(": ");
    if (colon != std::string::npos) msg = msg.substr(colon + 2);
    throw Error(e.code(), std::string(name) + " stage: " + msg);
  }
}

std::string rho_tag(double rho) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "rho%.6g", rho);
  return buf;
}

void write_json(const std::filesystem::path& p, const json& j) {
  std::ofstream out(p);
  if (!out) throw Error(Errc::Io, "cannot write " + p.string());
  out << j.dump(2) << "\n";
}

}  // namespace

PipelineResult run_pipeline(const ExperimentConfig& config, const std::filesystem::path& out_dir, PipelineStage until) {
  config.validate();
  std::filesystem::create_directories(out_dir);
  write_json(out_dir / "config.json", to_json(config));
  PipelineResult res;
  const int m = config.m();

  res.crit = stage("critical point", [&] {
    return find_critical_point(config.signed_config(), config.critical_tol);
  });
  res.taus = tau_values(res.crit.config);
  {
    json j = to_json(res.crit);
    j["taus"] = res.taus;
    write_json(out_dir / "critical.json", j);
  }
  spdlog::info("critical point: |grad F| = {:.3e}, {} negative Hessian eigenvalue(s)", res.crit.grad_norm,
               res.crit.negative_count);
  if (until == PipelineStage::Critical) return res;

  const MeshPtr mesh = stage("mesh", [&] { return build_mesh(config.domain, config.h); });
  SolverOptions sopts;
  sopts.scheme = config.scheme;
  std::vector<ContinuationStep> steps;
  try {
    stage("solve", [&] { continuation_solve(res.crit.config, config.rho_schedule, mesh, config.newton_tol, steps, sopts); });
  } catch (...) {
    json partial = json::array();
    for (const auto& s : steps) partial.push_back({{"rho", s.rho}, {"iterations", s.report.iterations}});
    write_json(out_dir / "solve_partial.json", partial);
    throw;
  }
  json solve_log = json::array();
  for (const ContinuationStep& s : steps) {
    json peaks = json::array();
    for (const Vec2& p : s.report.peak_locations) peaks.push_back({p.x(), p.y()});
    solve_log.push_back({{"rho", s.rho},
                         {"iterations", s.report.iterations},
                         {"residual", s.report.final_residual},
                         {"correction_h1", s.report.correction_h1},
                         {"peaks", peaks}});
    if (config.write_fields)
      write_field(s.u, out_dir / ("u_" + rho_tag(s.rho)), {{"rho", s.rho}, {"field", "solution"}});
    spdlog::info("rho = {}: {} Newton iterations, residual {:.3e}", s.rho, s.report.iterations, s.report.final_residual);
  }
  write_json(out_dir / "solve.json", solve_log);
  if (until == PipelineStage::Solve) return res;

  const SparseMatrix A = assemble_laplacian(*mesh, config.scheme);
  EigenOptions eopts;
  eopts.tol = config.eigen_tol;
  std::vector<SpectrumResult> spectra;
  std::vector<MorseCount> morse;
  for (const ContinuationStep& s : steps) {
    SpectrumResult sr = stage("spectrum", [&] {
      return eigenpairs(A, assemble_weight(s.u, s.rho), config.eigen_count, mesh, eopts);
    });
    sr.rho = s.rho;
    const MorseCount mc = morse_index(sr);
    write_json(out_dir / ("spectrum_" + rho_tag(s.rho) + ".json"), to_json(sr, mc));
    if (config.write_fields)
      for (int j = 0; j < std::min<int>(4 * m, static_cast<int>(sr.eigenfields.size())); ++j)
        write_field(sr.eigenfields[j], out_dir / ("v" + std::to_string(j + 1) + "_" + rho_tag(s.rho)),
                    {{"rho", s.rho}, {"j", j + 1}, {"mu", sr.eigenvalues[j]}});
    spdlog::info("rho = {}: Morse index {}, {} eigenvalue(s) in the guard band", s.rho, mc.index, mc.ambiguous.size());
    spectra.push_back(std::move(sr));
    morse.push_back(mc);
  }
  if (until == PipelineStage::Spectrum) return res;

  std::vector<RunRecord> runs;
  for (size_t i = 0; i < steps.size(); ++i) {
    const ContinuationStep& s = steps[i];
    RunRecord run;
    run.rho = s.rho;
    run.newton_iterations = s.report.iterations;
    run.newton_residual = s.report.final_residual;
    run.correction_h1 = s.report.correction_h1;
    run.peaks = s.report.peak_locations;
    run.morse = morse[i];
    stage("profile", [&] {
      for (int j = 1; j <= 4 * m; ++j) {
        ModeRecord mode;
        mode.j = j;
        mode.mu = spectra[i].eigenvalues[j - 1];
        mode.regime = regime_for_index(j, m);
        const GridField& v = spectra[i].eigenfields[j - 1];
        std::vector<ProfileFit> own;
        for (int k = 0; k < m; ++k) {
          RescaleOptions ro = config.rescale;
          ro.radius = std::min(ro.radius, 0.99 * admissible_rescale_radius(config.domain, run.peaks[k], res.taus[k], s.rho));
          if (ro.radius < config.fit.window)
            throw Error(Errc::InsufficientSamples, "rescale disc around peak " + std::to_string(k + 1) +
                                                       " is smaller than the fit window");
          mode.fits.push_back(fit_all_models(rescale_eigenfunction(v, run.peaks, res.taus, s.rho, k, ro), config.fit));
          own.push_back(mode.fits.back()[mode.regime == Regime::Translation ? 1 : (mode.regime == Regime::Dilation ? 2 : 0)]);
        }
        try {
          mode.far_field = far_field_check(v, mode.mu, s.rho, own, res.crit.config, res.taus, mode.regime, config.probes);
        } catch (const Error& e) {
          spdlog::warn("rho = {}, j = {}: far field skipped ({})", s.rho, j, e.what());
        }
        run.modes.push_back(std::move(mode));
      }
    });
    runs.push_back(std::move(run));
  }
  res.report = stage("report", [&] { return build_report(res.crit.config, res.crit, runs); });
  export_report(res.report, out_dir);
  return res;
}

}  // namespace sinhlab
