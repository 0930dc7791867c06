#include "tikreg/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>

#include "tikreg/error.hpp"
#include "tikreg/linalg.hpp"
#include "tikreg/rng.hpp"
#include "tikreg/select.hpp"

namespace tikreg {
namespace {

// Read-only state shared by every trial.
struct Setup {
  const ExperimentConfig& config;
  TestProblem problem;
  SvdFactorization factorization;
  Vector x_true_tilde;
  std::optional<OrthogonalBasis> fixed_basis;
};

struct TrialOutcome {
  bool excluded = false;
  std::vector<double> errors;
};

bool is_discrepancy_failure(ErrorCode code) {
  return code == ErrorCode::DiscrepancyUnattainable || code == ErrorCode::NoiseDominatesData;
}

Vector draw_noise(const Setup& s, double level, RngStream& rng) {
  const ExperimentConfig& c = s.config;
  if (c.noise == NoiseKind::White) return white_noise(s.problem.b_true, level, rng);
  if (s.fixed_basis) return colored_noise(*s.fixed_basis, c.alpha, level, s.problem.b_true, rng);
  const OrthogonalBasis fresh(random_orthogonal(static_cast<std::size_t>(s.problem.b_true.size()), rng));
  return colored_noise(fresh, c.alpha, level, s.problem.b_true, rng);
}

TrialOutcome run_trial(const Setup& s, std::size_t level_index, std::size_t trial) {
  const ExperimentConfig& c = s.config;
  RngStream rng(c.seed, trial_stream_id(level_index, trial));
  const Vector e = draw_noise(s, c.levels[level_index], rng);
  const Vector b = s.problem.b_true + e;
  const SpectralProblem sp = to_spectral(s.factorization, b);

  TrialOutcome out;
  out.errors.reserve(c.methods.size());
  if (c.mode == ExperimentMode::Optimal) {
    for (const MethodFamily& family : c.methods) {
      out.errors.push_back(optimal_params_spectral(sp, s.x_true_tilde, family).error);
    }
    return out;
  }

  SharedMuBundle bundle;
  try {
    bundle = shared_mu_pipeline(sp, DiscrepancySpec{e.norm(), c.eta}, c.methods);
  } catch (const Error& err) {
    if (!is_discrepancy_failure(err.code())) throw;
    out.excluded = true;
    return out;
  }
  for (const BoundMethod& bound : bundle.methods) {
    if (bound.family.uses_mu() && bound.method.mu != bundle.mu) {
      fail(ErrorCode::InvalidArgument, "mu-based methods received different parameters");
    }
    const Vector x_tilde = spectral_coefficients(sp, bound.method);
    out.errors.push_back((x_tilde - s.x_true_tilde).norm() / s.x_true_tilde.norm());
  }
  return out;
}

std::vector<TrialOutcome> run_level(const Setup& s, std::size_t level_index) {
  const std::size_t runs = s.config.runs;
  std::vector<TrialOutcome> outcomes(runs);
  std::size_t workers = s.config.threads == 0 ? std::thread::hardware_concurrency() : s.config.threads;
  workers = std::clamp<std::size_t>(workers, 1, runs);

  if (workers == 1) {
    for (std::size_t t = 0; t < runs; ++t) outcomes[t] = run_trial(s, level_index, t);
    return outcomes;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (std::size_t t = next++; t < runs; t = next++) {
      try {
        outcomes[t] = run_trial(s, level_index, t);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        next = runs;
      }
    }
  };
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  pool.clear();
  if (first_error) std::rethrow_exception(first_error);
  return outcomes;
}

}  // namespace

std::string_view to_string(ExperimentMode mode) noexcept {
  return mode == ExperimentMode::Optimal ? "optimal" : "discrepancy";
}

ExperimentMode parse_experiment_mode(std::string_view name) {
  if (name == "discrepancy") return ExperimentMode::Discrepancy;
  if (name == "optimal") return ExperimentMode::Optimal;
  fail(ErrorCode::InvalidArgument, "unknown mode '" + std::string(name) + "'");
}

std::vector<MethodFamily> default_method_families() {
  return {MethodFamily{MethodKind::FrMod}, MethodFamily{MethodKind::TikhonovIdentity},
          MethodFamily{MethodKind::ShiftK}, MethodFamily{MethodKind::Tsvd}};
}

void validate(const ExperimentConfig& config) {
  require(config.n >= 4, "n must be at least 4");
  require(config.runs >= 1, "runs must be at least 1");
  require(!config.levels.empty(), "at least one noise level is required");
  for (const double level : config.levels) {
    require(level > 0.0 && level < 1.0, "noise levels must lie in (0, 1)");
  }
  require(std::isfinite(config.alpha) && config.alpha >= 0.0, "alpha must be finite and >= 0");
  validate(DiscrepancySpec{1.0, config.eta});
  for (const MethodFamily& family : config.methods) {
    if (family.kind == MethodKind::Theta) {
      require(family.theta >= 0.0 && family.theta <= 1.0, "theta must lie in [0, 1]");
    }
  }
}

const ReportCell& ExperimentReport::cell(std::size_t level_index, std::size_t method_index) const {
  require(level_index < levels.size() && method_index < methods.size(), "cell index out of range");
  return cells[level_index * methods.size() + method_index];
}

const ReportCell& ExperimentReport::find(double level, std::string_view method) const {
  for (const ReportCell& c : cells) {
    if (c.level == level && c.method == method) return c;
  }
  fail(ErrorCode::InvalidArgument, "no report cell for method '" + std::string(method) + "'");
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
  validate(config);
  ExperimentReport report;
  report.levels = config.levels;
  for (const MethodFamily& family : config.methods) report.methods.push_back(family.name());
  if (config.methods.empty()) return report;

  Setup setup{config, make_problem(config.problem, config.n), {}, {}, std::nullopt};
  setup.factorization = svd(setup.problem.A);
  setup.x_true_tilde = setup.factorization.V.transpose() * setup.problem.x_true;
  if (config.noise == NoiseKind::Colored) {
    if (config.basis == NoiseBasis::LeftSingular) setup.fixed_basis.emplace(setup.factorization.U);
    if (config.basis == NoiseBasis::Dct) {
      setup.fixed_basis.emplace(dct_matrix(static_cast<std::size_t>(setup.problem.A.rows())));
    }
  }

  for (std::size_t li = 0; li < config.levels.size(); ++li) {
    const std::vector<TrialOutcome> outcomes = run_level(setup, li);
    const auto excluded = static_cast<std::size_t>(std::count_if(
        outcomes.begin(), outcomes.end(), [](const TrialOutcome& o) { return o.excluded; }));
    if (static_cast<double>(excluded) > 0.01 * static_cast<double>(config.runs)) {
      fail(ErrorCode::TooManyExclusions,
           std::to_string(excluded) + " of " + std::to_string(config.runs) +
               " trials had no discrepancy solution at noise level " +
               std::to_string(config.levels[li]));
    }

    for (std::size_t mi = 0; mi < config.methods.size(); ++mi) {
      ReportCell cell;
      cell.level = config.levels[li];
      cell.method = report.methods[mi];
      cell.excluded = excluded;
      for (const TrialOutcome& o : outcomes) {
        if (!o.excluded) cell.errors.push_back(o.errors[mi]);
      }
      cell.runs = cell.errors.size();
      double sum = 0.0;
      for (const double v : cell.errors) sum += v;
      cell.mean = cell.runs > 0 ? sum / static_cast<double>(cell.runs) : 0.0;
      if (cell.runs > 1) {
        double ss = 0.0;
        for (const double v : cell.errors) ss += (v - cell.mean) * (v - cell.mean);
        cell.std_dev = std::sqrt(ss / static_cast<double>(cell.runs - 1));
      }
      report.cells.push_back(std::move(cell));
    }
  }
  return report;
}

}  // namespace tikreg
