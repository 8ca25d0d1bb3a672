#include "afdm/harness.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "afdm/io.hpp"

namespace afdm {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

constexpr std::array<const char*, 4> kParams = {"theta", "phi", "tau", "f_d"};

struct TrialResult {
  bool ok = false;
  std::array<double, 4> nmse{};  // theta, phi, tau, f_d
};

std::array<RVec, 4> truth_vectors(const SceneConfig& scene) {
  const int r = static_cast<int>(scene.targets.size());
  std::array<RVec, 4> t;
  for (auto& v : t) v = RVec(r);
  for (int i = 0; i < r; ++i) {
    t[0][i] = scene.targets[i].theta;
    t[1][i] = scene.targets[i].phi;
    t[2][i] = scene.targets[i].tau;
    t[3][i] = scene.targets[i].f_d;
  }
  return t;
}

std::array<RVec, 4> estimate_vectors(const std::vector<TargetEstimate>& est,
                                     const std::vector<int>& perm) {
  const int r = static_cast<int>(perm.size());
  std::array<RVec, 4> e;
  for (auto& v : e) v = RVec(r);
  for (int i = 0; i < r; ++i) {
    e[0][i] = est[perm[i]].theta;
    e[1][i] = est[perm[i]].phi;
    e[2][i] = est[perm[i]].tau;
    e[3][i] = est[perm[i]].f_d;
  }
  return e;
}

std::string fmt_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

}  // namespace

std::uint64_t trial_frame_seed(std::uint64_t master, int trial) {
  return splitmix64(master ^ splitmix64(0xF00DULL + 2ULL * trial));
}

std::uint64_t trial_noise_seed(std::uint64_t master, int trial) {
  return splitmix64(master ^ splitmix64(0xBEEFULL + 2ULL * trial + 1ULL));
}

double nmse(const RVec& truth, const RVec& est) {
  if (truth.size() != est.size())
    throw std::invalid_argument("nmse: length mismatch");
  const double denom = truth.squaredNorm();
  if (denom <= 0.0) throw std::invalid_argument("nmse: zero-norm truth");
  return (truth - est).squaredNorm() / denom;
}

std::vector<int> match_targets(const std::vector<Target>& truth,
                               const std::vector<TargetEstimate>& est) {
  const int r = static_cast<int>(truth.size());
  if (static_cast<int>(est.size()) != r)
    throw std::invalid_argument("match_targets: count mismatch");

  std::array<double, 4> scale{};
  for (const Target& t : truth) {
    scale[0] += t.theta * t.theta;
    scale[1] += t.phi * t.phi;
    scale[2] += t.tau * t.tau;
    scale[3] += t.f_d * t.f_d;
  }
  for (double& s : scale) s = std::max(s / r, 1e-30);

  RMat cost(r, r);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) {
      const Target& t = truth[i];
      const TargetEstimate& e = est[j];
      cost(i, j) = (t.theta - e.theta) * (t.theta - e.theta) / scale[0] +
                   (t.phi - e.phi) * (t.phi - e.phi) / scale[1] +
                   (t.tau - e.tau) * (t.tau - e.tau) / scale[2] +
                   (t.f_d - e.f_d) * (t.f_d - e.f_d) / scale[3];
    }

  // exact assignment by subset dynamic programming over estimate columns
  const int full = 1 << r;
  std::vector<double> best(full, std::numeric_limits<double>::infinity());
  std::vector<int> choice(full, -1);
  best[0] = 0.0;
  for (int mask = 0; mask < full - 1; ++mask) {
    if (!std::isfinite(best[mask])) continue;
    const int i = __builtin_popcount(static_cast<unsigned>(mask));
    for (int j = 0; j < r; ++j) {
      if (mask & (1 << j)) continue;
      const int next = mask | (1 << j);
      const double c = best[mask] + cost(i, j);
      if (c < best[next]) {
        best[next] = c;
        choice[next] = j;
      }
    }
  }
  std::vector<int> perm(r);
  int mask = full - 1;
  for (int i = r - 1; i >= 0; --i) {
    perm[i] = choice[mask];
    mask ^= 1 << perm[i];
  }
  return perm;
}

std::vector<SweepRow> run_sweep(const ExperimentPlan& plan, const AfdmConfig& cfg,
                                const SceneConfig& scene) {
  if (plan.trials < 1) throw std::invalid_argument("run_sweep: trials must be >= 1");
  if (plan.snr_grid_db.empty())
    throw std::invalid_argument("run_sweep: empty SNR grid");
  validate_scene(scene, cfg);

  const auto truth = truth_vectors(scene);

  // one fixed seeded frame defines the per-scene CRLB reference
  const DafFrame crlb_frame = gen_qam_frame(plan.qam_order, plan.seed, cfg.n_sub);
  const double clean_power =
      synthesize_tensor(scene, crlb_frame, cfg, std::nullopt, 0).clean.norm();
  const double cube_size = static_cast<double>(scene.g_rx()) * cfg.n_sub * scene.k_tx;

  std::vector<SweepRow> rows;
  for (const double snr_db : plan.snr_grid_db) {
    const bool noise_free = std::isinf(snr_db);

    std::array<double, 4> crlb_floor{};
    if (!noise_free) {
      FimInput fin;
      fin.scene = scene;
      fin.cfg = cfg;
      fin.frame = crlb_frame;
      fin.sigma2 = clean_power * clean_power * std::pow(10.0, -snr_db / 10.0) / cube_size;
      const CrlbReport rep = compute_crlb(fin);
      const std::array<const RVec*, 4> bounds = {&rep.crlb_theta, &rep.crlb_phi,
                                                 &rep.crlb_tau, &rep.crlb_fd};
      for (int p = 0; p < 4; ++p)
        crlb_floor[p] = bounds[p]->sum() / truth[p].squaredNorm();
    }

    std::vector<TrialResult> results(plan.trials);
    const auto run_trial = [&](int trial) {
      TrialResult out;
      try {
        const DafFrame frame =
            gen_qam_frame(plan.qam_order, trial_frame_seed(plan.seed, trial), cfg.n_sub);
        const SynthesisResult synth = synthesize_tensor(
            scene, frame, cfg,
            noise_free ? std::nullopt : std::optional<double>(snr_db),
            trial_noise_seed(plan.seed, trial));
        const EstimationReport rep =
            estimate_all(synth.noisy, frame, cfg, scene, plan.rank,
                         AoaSearchConfig{}, plan.t_outer);
        if (static_cast<int>(rep.targets.size()) !=
            static_cast<int>(scene.targets.size()))
          return out;  // wrong model order counts as a failed trial
        const auto perm = match_targets(scene.targets, rep.targets);
        const auto est = estimate_vectors(rep.targets, perm);
        for (int p = 0; p < 4; ++p) out.nmse[p] = nmse(truth[p], est[p]);
        out.ok = true;
      } catch (const DecompositionError&) {
        out.ok = false;
      }
      return out;
    };

    if (plan.jobs <= 1) {
      for (int t = 0; t < plan.trials; ++t) results[t] = run_trial(t);
    } else {
      std::vector<std::thread> pool;
      const int jobs = std::min(plan.jobs, plan.trials);
      for (int w = 0; w < jobs; ++w)
        pool.emplace_back([&, w]() {
          for (int t = w; t < plan.trials; t += jobs) results[t] = run_trial(t);
        });
      for (auto& th : pool) th.join();
    }

    for (int p = 0; p < 4; ++p) {
      SweepRow row;
      row.snr_db = snr_db;
      row.param = kParams[p];
      row.crlb = crlb_floor[p];
      double sum = 0.0, sum2 = 0.0;
      int ok = 0, failed = 0;
      for (const TrialResult& tr : results) {
        if (!tr.ok) {
          ++failed;
          continue;
        }
        ++ok;
        sum += tr.nmse[p];
        sum2 += tr.nmse[p] * tr.nmse[p];
      }
      row.trials_ok = ok;
      row.trials_failed = failed;
      if (ok > 0) {
        row.nmse_mean = sum / ok;
        const double var = std::max(0.0, sum2 / ok - row.nmse_mean * row.nmse_mean);
        row.nmse_stderr = ok > 1 ? std::sqrt(var / (ok - 1)) : 0.0;
      }
      rows.push_back(row);
    }
  }
  return rows;
}

std::vector<SweepRow> run_sweep(const ExperimentPlan& plan) {
  const SceneFile sf = load_scene(plan.scene_file);
  auto rows = run_sweep(plan, sf.cfg, sf.scene);
  if (!plan.out_prefix.empty()) {
    if (plan.format != ExperimentPlan::Format::kJson)
      write_text_file(plan.out_prefix + ".csv", sweep_to_csv(rows));
    if (plan.format != ExperimentPlan::Format::kCsv)
      write_text_file(plan.out_prefix + ".json", sweep_to_json(rows));
  }
  return rows;
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << "snr_db,param,nmse_mean,nmse_stderr,crlb,trials_ok,trials_failed\n";
  for (const SweepRow& r : rows) {
    os << fmt_double(r.snr_db) << ',' << r.param << ',' << fmt_double(r.nmse_mean)
       << ',' << fmt_double(r.nmse_stderr) << ',' << fmt_double(r.crlb) << ','
       << r.trials_ok << ',' << r.trials_failed << '\n';
  }
  return os.str();
}

std::string sweep_to_json(const std::vector<SweepRow>& rows) {
  nlohmann::json root;
  root["rows"] = nlohmann::json::array();
  for (const SweepRow& r : rows) {
    nlohmann::json row;
    if (std::isinf(r.snr_db))
      row["snr_db"] = "inf";
    else
      row["snr_db"] = r.snr_db;
    row["param"] = r.param;
    row["nmse_mean"] = r.nmse_mean;
    row["nmse_stderr"] = r.nmse_stderr;
    row["crlb"] = r.crlb;
    row["trials_ok"] = r.trials_ok;
    row["trials_failed"] = r.trials_failed;
    root["rows"].push_back(row);
  }
  return root.dump(2) + "\n";
}

}  // namespace afdm
