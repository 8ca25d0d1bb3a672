// harness.hpp - Monte Carlo experiment runner: target matching, NMSE
// accumulation, SNR sweeps with the CRLB floor alongside
//
// Per-trial randomness is derived from the plan seed and the trial counter
// only, never from execution order, so trials can run on any number of
// workers and still reduce to identical results. The same per-trial frame
// and noise draws are reused across SNR points (common random numbers),
// which keeps the NMSE-vs-SNR curves monotone trial noise aside.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "afdm/crlb.hpp"
#include "afdm/estimators.hpp"

namespace afdm {

/// ||truth - est||^2 / ||truth||^2.
double nmse(const RVec& truth, const RVec& est);

/**
 * Minimum-cost assignment between truth targets and estimates; the cost of
 * a pair is the sum over (theta, phi, tau, f_d) of squared differences,
 * each normalized by the truth mean square of that parameter. Returns
 * perm with perm[r] = index of the estimate assigned to truth target r.
 */
std::vector<int> match_targets(const std::vector<Target>& truth,
                               const std::vector<TargetEstimate>& est);

struct ExperimentPlan {
  std::string scene_file;
  std::vector<double> snr_grid_db;  // +inf entries mean noise-free
  int trials = 500;
  std::uint64_t seed = 1;
  int rank = 0;     // 0 = model order from MDL
  int t_outer = 3;
  int qam_order = 16;
  int jobs = 1;
  std::string out_prefix;  // when set, sweep writes <prefix>.csv / .json
  enum class Format { kCsv, kJson, kBoth };
  Format format = Format::kCsv;
};

struct SweepRow {
  double snr_db = 0.0;  // +inf for the noise-free point
  std::string param;    // theta | phi | tau | f_d
  double nmse_mean = 0.0;
  double nmse_stderr = 0.0;
  double crlb = 0.0;    // CRLB-derived NMSE floor; 0 when noise-free
  int trials_ok = 0;
  int trials_failed = 0;
};

/// Full sweep on an already-loaded scene.
std::vector<SweepRow> run_sweep(const ExperimentPlan& plan, const AfdmConfig& cfg,
                                const SceneConfig& scene);

/// Loads plan.scene_file, runs the sweep, writes result files if requested.
std::vector<SweepRow> run_sweep(const ExperimentPlan& plan);

std::string sweep_to_csv(const std::vector<SweepRow>& rows);
std::string sweep_to_json(const std::vector<SweepRow>& rows);

/// Counter-derived per-trial seeds.
std::uint64_t trial_frame_seed(std::uint64_t master, int trial);
std::uint64_t trial_noise_seed(std::uint64_t master, int trial);

}  // namespace afdm
