#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "tikreg/filters.hpp"

namespace tikreg {

/// kappa_2(A^T A + L^T L): ratio of the largest to the smallest positive
/// entry of sigma_j^2 + dsq_j. Exact zeros (truncated directions) are
/// excluded. Throws InvalidArgument if every entry is zero.
double kappa_normal(const Vector& sigma, const Vector& dsq);

/// ||L||_F = sqrt(sum |dsq_j|) for L = D V^T.
double frob_norm_reg(const Vector& dsq);

/// ||x - x_true|| / ||x_true||.
double relative_error(const Vector& x, const Vector& x_true);

struct MethodDiagnostics {
  double kappa = 1.0;
  double frob_norm_L = 0.0;
  std::size_t k_effective = 0;
  double mu = 0.0;
};

MethodDiagnostics diagnose(const RegMethod& method, const Vector& sigma);

enum class Verdict { Pass, Fail, NotApplicable };

std::string_view to_string(Verdict v) noexcept;

struct ClaimResult {
  std::string id;
  double lhs = 0.0;
  double rhs = 0.0;
  Verdict verdict = Verdict::NotApplicable;
};

struct PropositionReport {
  std::vector<ClaimResult> claims;

  std::size_t count(Verdict v) const;
  bool all_passed() const { return count(Verdict::Fail) == 0; }
};

/// Evaluates every condition-number and norm relation between the
/// regularization matrices on one spectrum. Inequalities get 1e-12
/// relative slack; strict ones need a margin above it. Equivalences are
/// checked at mu and by probing mu at threshold * (1 +- 1e-6). Claims whose
/// regime does not hold are reported NotApplicable, never Fail.
PropositionReport verify_propositions(const Vector& sigma, double mu, double theta);

/// One `claim lhs rhs verdict` line per claim, tab separated, with header.
void write_report(std::ostream& out, const PropositionReport& report);

struct ClaimTally {
  std::size_t pass = 0;
  std::size_t fail = 0;
  std::size_t not_applicable = 0;
};

struct PropositionSuiteResult {
  std::map<std::string, ClaimTally> tally;
  std::vector<ClaimResult> failures;
  std::size_t trials = 0;

  bool all_passed() const { return failures.empty(); }
};

/// Runs verify_propositions on `trials` random spectra of length n with
/// sigma log-uniform in [1e-3, 1], mu log-uniform in [sigma_n, sigma_1],
/// for each theta in {0, 0.25, 0.5, 1}.
PropositionSuiteResult verify_random_spectra(std::uint64_t seed, std::size_t trials,
                                             std::size_t n);

void write_suite_summary(std::ostream& out, const PropositionSuiteResult& result);

}  // namespace tikreg
