#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "tikreg/filters.hpp"
#include "tikreg/noise.hpp"
#include "tikreg/problems.hpp"

namespace tikreg {

enum class ExperimentMode { Discrepancy, Optimal };

std::string_view to_string(ExperimentMode mode) noexcept;
ExperimentMode parse_experiment_mode(std::string_view name);

std::vector<MethodFamily> default_method_families();

struct ExperimentConfig {
  ProblemKind problem = ProblemKind::Phillips;
  std::size_t n = 200;
  std::vector<double> levels{0.10, 0.01, 0.005, 0.001};
  NoiseKind noise = NoiseKind::White;
  double alpha = 1.0;
  NoiseBasis basis = NoiseBasis::LeftSingular;
  std::vector<MethodFamily> methods = default_method_families();
  std::size_t runs = 1000;
  double eta = 1.0;
  std::uint64_t seed = 0;
  ExperimentMode mode = ExperimentMode::Discrepancy;
  std::size_t threads = 1;  // 0 picks the hardware concurrency
};

void validate(const ExperimentConfig& config);

struct ReportCell {
  double level = 0.0;
  std::string method;
  double mean = 0.0;
  double std_dev = 0.0;
  std::size_t runs = 0;      // trials that entered the mean
  std::size_t excluded = 0;  // trials dropped because the discrepancy rule had no solution
  // Per-trial errors of the included trials, in trial order. Exclusions are
  // per trial, so index i refers to the same trial in every cell of a level.
  std::vector<double> errors;
};

struct ExperimentReport {
  std::vector<double> levels;
  std::vector<std::string> methods;
  std::vector<ReportCell> cells;  // level-major, methods in config order

  const ReportCell& cell(std::size_t level_index, std::size_t method_index) const;
  const ReportCell& find(double level, std::string_view method) const;
};

ExperimentReport run_experiment(const ExperimentConfig& config);

}  // namespace tikreg
