#include "tikreg/analysis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <ostream>

#include "tikreg/error.hpp"
#include "tikreg/matrix_io.hpp"
#include "tikreg/rng.hpp"

namespace tikreg {
namespace {

constexpr double kSlack = 1e-12;
constexpr double kProbe = 1e-6;

double scale_of(double a, double b) { return std::max(std::abs(a), std::abs(b)); }
bool le(double a, double b) { return a <= b + kSlack * scale_of(a, b); }
bool lt(double a, double b) { return b - a > kSlack * scale_of(a, b); }
bool eq(double a, double b) { return std::abs(a - b) <= kSlack * scale_of(a, b); }

double sq(double v) { return v * v; }

class Recorder {
public:
  void add(std::string id, double lhs, double rhs, bool ok) {
    claims_.push_back({std::move(id), lhs, rhs, ok ? Verdict::Pass : Verdict::Fail});
  }
  void skip(std::string id) { claims_.push_back({std::move(id), 0.0, 0.0, Verdict::NotApplicable}); }
  void push(ClaimResult c) { claims_.push_back(std::move(c)); }

  std::vector<ClaimResult>& claims() { return claims_; }

private:
  std::vector<ClaimResult> claims_;
};

// Folds repeated evaluations of one claim (one per index k) into a single
// result: the first failure wins, else the first pass, else N/A.
class Merger {
public:
  void add(std::string id, double lhs, double rhs, bool ok) {
    merge({std::move(id), lhs, rhs, ok ? Verdict::Pass : Verdict::Fail});
  }
  void skip(std::string id) { merge({std::move(id), 0.0, 0.0, Verdict::NotApplicable}); }

  void flush_into(Recorder& rec) {
    for (ClaimResult& c : merged_) rec.push(std::move(c));
    merged_.clear();
  }

private:
  void merge(ClaimResult c) {
    auto it = std::find_if(merged_.begin(), merged_.end(),
                           [&](const ClaimResult& m) { return m.id == c.id; });
    if (it == merged_.end()) {
      merged_.push_back(std::move(c));
      return;
    }
    if (it->verdict == Verdict::Fail) return;
    if (c.verdict == Verdict::Fail ||
        (c.verdict == Verdict::Pass && it->verdict == Verdict::NotApplicable)) {
      *it = std::move(c);
    }
  }

  std::vector<ClaimResult> merged_;
};

double kappa_of(const RegMethod& m, const Vector& sigma) {
  return kappa_normal(sigma, build_modification(m, sigma).dsq);
}

double norm_of(const RegMethod& m, const Vector& sigma) {
  return frob_norm_reg(build_modification(m, sigma).dsq);
}

bool diagonal_nonincreasing(const Vector& sigma, const Vector& dsq) {
  for (Eigen::Index j = 0; j + 1 < sigma.size(); ++j) {
    if (!le(sq(sigma(j + 1)) + dsq(j + 1), sq(sigma(j)) + dsq(j))) return false;
  }
  return true;
}

// kappa_cut <= other(mu) must hold exactly when mu <= threshold. `other_at`
// evaluates the competing condition number at any mu and returns a negative
// value when that mu is outside its regime.
template <class OtherAt>
void check_threshold(Merger& out, const std::string& id, double kappa_cut, double mu,
                     double threshold, OtherAt&& other_at) {
  const double other = other_at(mu);
  if (other < 0.0) {
    out.skip(id);
  } else {
    const bool ok = eq(mu, threshold) ||
                    (mu <= threshold ? le(kappa_cut, other) : lt(other, kappa_cut));
    out.add(id, kappa_cut, other, ok);
  }
  const double above = other_at(threshold * (1.0 + kProbe));
  if (above < 0.0) {
    out.skip(id + "/probe_above");
  } else {
    out.add(id + "/probe_above", kappa_cut, above, lt(above, kappa_cut));
  }
  const double below = other_at(threshold * (1.0 - kProbe));
  if (below < 0.0) {
    out.skip(id + "/probe_below");
  } else {
    out.add(id + "/probe_below", kappa_cut, below, le(kappa_cut, below));
  }
}

}  // namespace

double kappa_normal(const Vector& sigma, const Vector& dsq) {
  require(sigma.size() == dsq.size(), "kappa_normal: length mismatch");
  double largest = 0.0;
  double smallest = std::numeric_limits<double>::infinity();
  for (Eigen::Index j = 0; j < sigma.size(); ++j) {
    const double lambda = sq(sigma(j)) + dsq(j);
    if (lambda > 0.0) {
      largest = std::max(largest, lambda);
      smallest = std::min(smallest, lambda);
    }
  }
  require(largest > 0.0, "kappa_normal: every eigenvalue is zero");
  return largest / smallest;
}

double frob_norm_reg(const Vector& dsq) { return std::sqrt(dsq.cwiseAbs().sum()); }

double relative_error(const Vector& x, const Vector& x_true) {
  require(x.size() == x_true.size(), "relative_error: length mismatch");
  const double denom = x_true.norm();
  require(denom > 0.0, "relative_error: x_true is zero");
  return (x - x_true).norm() / denom;
}

MethodDiagnostics diagnose(const RegMethod& method, const Vector& sigma) {
  const DiagonalModification mod = build_modification(method, sigma);
  return MethodDiagnostics{kappa_normal(sigma, mod.dsq), frob_norm_reg(mod.dsq), mod.k_effective,
                           method.mu};
}

std::string_view to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::Pass: return "PASS";
    case Verdict::Fail: return "FAIL";
    case Verdict::NotApplicable: return "N/A";
  }
  return "?";
}

std::size_t PropositionReport::count(Verdict v) const {
  return static_cast<std::size_t>(std::count_if(
      claims.begin(), claims.end(), [v](const ClaimResult& c) { return c.verdict == v; }));
}

PropositionReport verify_propositions(const Vector& sigma, double mu, double theta) {
  const Eigen::Index n = sigma.size();
  require(n >= 1, "verify_propositions needs a nonempty spectrum");
  require(mu >= 0.0 && std::isfinite(mu), "mu must be finite and >= 0");
  require(theta >= 0.0 && theta <= 1.0, "theta must lie in [0, 1]");
  for (Eigen::Index j = 0; j + 1 < n; ++j) {
    require(sigma(j) >= sigma(j + 1), "sigma must be nonincreasing");
  }
  require(sigma(n - 1) >= 0.0 && sigma(0) > 0.0, "sigma must be nonnegative with sigma_1 > 0");

  Recorder rec;
  const double s1 = sigma(0);
  const double sn = sigma(n - 1);
  const double mu2 = sq(mu);
  const double nd = static_cast<double>(n);
  const bool full_rank = sn > 0.0;
  const bool frmod_regime = sn <= mu && mu < s1;
  const double norm_mu_identity = std::sqrt(nd) * mu;

  const double k_tik = kappa_of(RegMethod::tikhonov(mu), sigma);
  const double k_fr = kappa_of(RegMethod::frmod(mu), sigma);
  const DiagonalModification shift = build_modification(RegMethod::shift_k(mu), sigma);
  const double k_shift = kappa_normal(sigma, shift.dsq);
  const std::size_t ks = shift.k_effective;
  const DiagonalModification scaled = build_modification(RegMethod::scaled(mu), sigma);
  const DiagonalModification scaledk = build_modification(RegMethod::scaled_k(mu), sigma);
  const double k_scaledk = kappa_normal(sigma, scaledk.dsq);
  const std::size_t ksk = scaledk.k_effective;
  const DiagonalModification blend = build_modification(RegMethod::theta_blend(mu, theta), sigma);
  const std::size_t kth = blend.k_effective;

  // --- FrMod and mu I against the unregularized normal equations.
  if (full_rank && sn <= mu && mu <= s1) {
    const double worst = std::max(k_fr, k_tik);
    const double unreg = sq(s1) / sq(sn);
    rec.add("frmod_and_tikhonov_not_worse_than_unregularized", worst, unreg, le(worst, unreg));
  } else {
    rec.skip("frmod_and_tikhonov_not_worse_than_unregularized");
  }

  // kappa(FrMod) <= kappa(mu I)  <=>  mu^2 >= sigma_1 sigma_n.
  {
    const std::string id = "frmod_beats_tikhonov_iff_mu2_ge_s1sn";
    const double threshold = s1 * sn;
    if (full_rank && sn <= mu && mu <= s1) {
      const bool ok = eq(mu2, threshold) ||
                      (mu2 >= threshold ? le(k_fr, k_tik) : lt(k_tik, k_fr));
      rec.add(id, k_fr, k_tik, ok);
    } else {
      rec.skip(id);
    }
    const double pivot = std::sqrt(threshold);
    for (const bool above : {true, false}) {
      const double probe = pivot * (above ? 1.0 + kProbe : 1.0 - kProbe);
      const std::string pid = id + (above ? "/probe_above" : "/probe_below");
      if (!full_rank || probe < sn || probe > s1) {
        rec.skip(pid);
        continue;
      }
      const double fr = kappa_of(RegMethod::frmod(probe), sigma);
      const double tik = kappa_of(RegMethod::tikhonov(probe), sigma);
      rec.add(pid, fr, tik, above ? le(fr, tik) : lt(tik, fr));
    }
  }

  // --- ShiftK: leaves the leading k eigenvalues, shifts the rest by mu^2.
  rec.add("shiftk_diagonal_nonincreasing", 0.0, 0.0, diagonal_nonincreasing(sigma, shift.dsq));
  if (ks >= 1) {
    const double formula = sq(s1) / (sq(sn) + mu2);
    rec.add("shiftk_condition_number_formula", k_shift, formula, eq(k_shift, formula));
    const bool strictness = mu > 0.0 ? lt(k_shift, k_tik) : eq(k_shift, k_tik);
    rec.add("shiftk_not_worse_than_tikhonov_strict_iff_mu_nonzero", k_shift, k_tik,
            le(k_shift, k_tik) && strictness);
  } else {
    rec.skip("shiftk_condition_number_formula");
    rec.skip("shiftk_not_worse_than_tikhonov_strict_iff_mu_nonzero");
  }
  if (full_rank && n >= 2) {
    const double shift0 = kappa_of(RegMethod::shift_k(0.0), sigma);
    const double tik0 = kappa_of(RegMethod::tikhonov(0.0), sigma);
    rec.add("shiftk_equals_tikhonov_at_mu_zero", shift0, tik0, eq(shift0, tik0));
  } else {
    rec.skip("shiftk_equals_tikhonov_at_mu_zero");
  }
  if (ks >= 1 && frmod_regime) {
    rec.add("shiftk_not_worse_than_frmod_strict_iff_full_rank", k_shift, k_fr,
            full_rank ? lt(k_shift, k_fr) : eq(k_shift, k_fr));
  } else {
    rec.skip("shiftk_not_worse_than_frmod_strict_iff_full_rank");
  }
  {
    // The same spectrum with sigma_n forced to zero turns the inequality
    // into an equality.
    Vector deficient = sigma;
    deficient(n - 1) = 0.0;
    const DiagonalModification d_shift = build_modification(RegMethod::shift_k(mu), deficient);
    if (n >= 2 && mu > 0.0 && mu < s1 && d_shift.k_effective >= 1) {
      const double a = kappa_normal(deficient, d_shift.dsq);
      const double b = kappa_of(RegMethod::frmod(mu), deficient);
      rec.add("shiftk_equals_frmod_when_rank_deficient", a, b, eq(a, b));
    } else {
      rec.skip("shiftk_equals_frmod_when_rank_deficient");
    }
  }
  const double norm_shift = frob_norm_reg(shift.dsq);
  if (ks >= 1 && mu > 0.0) {
    const double expected = (nd - static_cast<double>(ks)) * mu2;
    rec.add("shiftk_norm_identity", sq(norm_shift), expected, eq(sq(norm_shift), expected));
    rec.add("shiftk_norm_below_mu_identity", norm_shift, norm_mu_identity,
            lt(norm_shift, norm_mu_identity));
  } else {
    rec.skip("shiftk_norm_identity");
    rec.skip("shiftk_norm_below_mu_identity");
  }

  // --- CutK for every index k = 1..rank.
  {
    std::size_t rank = 0;
    while (rank < static_cast<std::size_t>(n) && sigma(static_cast<Eigen::Index>(rank)) > 0.0) ++rank;
    Merger per_k;
    for (std::size_t k = 1; k <= rank; ++k) {
      const double sk = sigma(static_cast<Eigen::Index>(k - 1));
      const double kc = kappa_of(RegMethod::cut_k_index(k), sigma);
      per_k.add("cutk_condition_number_formula", kc, sq(s1) / sq(sk), eq(kc, sq(s1) / sq(sk)));
      check_threshold(per_k, "cutk_beats_frmod_iff_mu_le_sigma_k", kc, mu, sk, [&](double m) {
        if (!(sn <= m && m < s1)) return -1.0;
        return kappa_of(RegMethod::frmod(m), sigma);
      });
      if (sk > sn) {
        check_threshold(per_k, "cutk_beats_shiftk_iff_mu_le_sqrt_sk2_minus_sn2", kc, mu,
                        std::sqrt(sq(sk) - sq(sn)), [&](double m) {
                          const DiagonalModification d =
                              build_modification(RegMethod::shift_k(m), sigma);
                          if (d.k_effective < 1) return -1.0;
                          return kappa_normal(sigma, d.dsq);
                        });
      }
    }
    per_k.flush_into(rec);

    // With sigma_{k+1} <= mu < sigma_k, ||L_k||_F <= ||L_{mu,k}||_F.
    const std::size_t kc = cut_index(sigma, mu);
    if (kc >= 1 && mu > 0.0) {
      const double cut_norm = norm_of(RegMethod::cut_k_index(kc), sigma);
      const double shift_norm = frob_norm_reg(shifted_tail_dsq(sigma, mu, kc));
      rec.add("cutk_norm_not_above_shiftk_same_index", cut_norm, shift_norm,
              le(cut_norm, shift_norm));
    } else {
      rec.skip("cutk_norm_not_above_shiftk_same_index");
    }
  }

  // --- Scaled: same conditioning as mu I with a smaller norm.
  {
    const double k_scaled = kappa_normal(sigma, scaled.dsq);
    rec.add("scaled_condition_equals_tikhonov", k_scaled, k_tik, eq(k_scaled, k_tik));
    if (mu > 0.0) {
      const double norm = frob_norm_reg(scaled.dsq);
      rec.add("scaled_norm_below_mu_identity", norm, norm_mu_identity, lt(norm, norm_mu_identity));
    } else {
      rec.skip("scaled_norm_below_mu_identity");
    }
  }

  // --- ScaledK.
  const double norm_scaledk = frob_norm_reg(scaledk.dsq);
  rec.add("scaledk_diagonal_nonincreasing", 0.0, 0.0, diagonal_nonincreasing(sigma, scaledk.dsq));
  if (ksk >= 1) {
    rec.add("scaledk_condition_equals_tikhonov", k_scaledk, k_tik, eq(k_scaledk, k_tik));
  } else {
    rec.skip("scaledk_condition_equals_tikhonov");
  }
  if (ksk >= 1 && mu > 0.0) {
    const double tail = (nd - static_cast<double>(ksk)) * mu2;
    rec.add("scaledk_norm_below_tail_shift", sq(norm_scaledk), tail, lt(sq(norm_scaledk), tail));
    rec.add("scaledk_tail_shift_below_mu_identity", tail, nd * mu2, lt(tail, nd * mu2));
  } else {
    rec.skip("scaledk_norm_below_tail_shift");
    rec.skip("scaledk_tail_shift_below_mu_identity");
  }

  // ScaledK with sigma_k > mu^2 / sigma_1 >= sigma_{k+1} is no larger than FrMod.
  if (mu > 0.0 && mu < s1) {
    const std::size_t k = cut_index(sigma, mu2 / s1);
    const double lhs = frob_norm_reg(blended_tail_dsq(sigma, mu, 1.0, k));
    const double rhs = norm_of(RegMethod::frmod(mu), sigma);
    rec.add("scaledk_norm_not_above_frmod", lhs, rhs, le(lhs, rhs));
    rec.add("scaledk_frmod_index_not_below_cut_index", static_cast<double>(k),
            static_cast<double>(cut_index(sigma, mu)), k >= cut_index(sigma, mu));
  } else {
    rec.skip("scaledk_norm_not_above_frmod");
    rec.skip("scaledk_frmod_index_not_below_cut_index");
  }

  // ScaledK against ShiftK and Scaled.
  if (ksk >= 1 && mu > 0.0) {
    const double same_index = frob_norm_reg(shifted_tail_dsq(sigma, mu, ksk));
    rec.add("scaledk_norm_below_shiftk_same_index", norm_scaledk, same_index,
            lt(norm_scaledk, same_index));
    rec.add("scaledk_norm_below_shiftk", norm_scaledk, norm_shift, lt(norm_scaledk, norm_shift));
    const double norm_scaled = frob_norm_reg(scaled.dsq);
    const double sk = sigma(static_cast<Eigen::Index>(ksk) - 1);
    const bool ok = s1 > sk ? lt(norm_scaledk, norm_scaled) : le(norm_scaledk, norm_scaled);
    rec.add("scaledk_norm_not_above_scaled_strict_if_s1_gt_sk", norm_scaledk, norm_scaled, ok);
  } else {
    rec.skip("scaledk_norm_below_shiftk_same_index");
    rec.skip("scaledk_norm_below_shiftk");
    rec.skip("scaledk_norm_not_above_scaled_strict_if_s1_gt_sk");
  }

  // --- Theta family.
  rec.add("theta_diagonal_nonincreasing", 0.0, 0.0, diagonal_nonincreasing(sigma, blend.dsq));
  if (kth >= 1) {
    const double k_theta = kappa_normal(sigma, blend.dsq);
    const double formula = (sq(s1) + theta * mu2) / (sq(sn) + mu2);
    rec.add("theta_condition_number_formula", k_theta, formula, eq(k_theta, formula));
    if (ks >= 1 && ksk >= 1) {
      const double affine = (1.0 - theta) * k_shift + theta * k_scaledk;
      rec.add("theta_condition_affine_in_theta", k_theta, affine, eq(k_theta, affine));
    } else {
      rec.skip("theta_condition_affine_in_theta");
    }
  } else {
    rec.skip("theta_condition_number_formula");
    rec.skip("theta_condition_affine_in_theta");
  }
  {
    constexpr int kSteps = 20;
    bool norm_ok = true;
    bool kappa_ok = true;
    bool kappa_applicable = true;
    double prev_norm = 0.0;
    double prev_kappa = 0.0;
    double bad_lhs = 0.0;
    double bad_rhs = 0.0;
    for (int i = 0; i <= kSteps; ++i) {
      const double th = static_cast<double>(i) / kSteps;
      const DiagonalModification d = build_modification(RegMethod::theta_blend(mu, th), sigma);
      const double norm = frob_norm_reg(d.dsq);
      const double kappa = kappa_normal(sigma, d.dsq);
      if (d.k_effective < 1) kappa_applicable = false;
      if (i > 0) {
        if (!le(norm, prev_norm) && norm_ok) {
          norm_ok = false;
          bad_lhs = norm;
          bad_rhs = prev_norm;
        }
        if (!lt(prev_kappa, kappa)) kappa_ok = false;
      }
      prev_norm = norm;
      prev_kappa = kappa;
    }
    if (mu > 0.0) {
      rec.add("theta_norm_nonincreasing_in_theta", bad_lhs, bad_rhs, norm_ok);
    } else {
      rec.skip("theta_norm_nonincreasing_in_theta");
    }
    if (mu > 0.0 && kappa_applicable) {
      rec.add("theta_condition_increasing_in_theta", 0.0, 0.0, kappa_ok);
    } else {
      rec.skip("theta_condition_increasing_in_theta");
    }
  }

  return PropositionReport{std::move(rec.claims())};
}

void write_report(std::ostream& out, const PropositionReport& report) {
  out << "claim\tlhs\trhs\tverdict\n";
  for (const ClaimResult& c : report.claims) {
    out << c.id << '\t' << format_double(c.lhs) << '\t' << format_double(c.rhs) << '\t'
        << to_string(c.verdict) << '\n';
  }
}

PropositionSuiteResult verify_random_spectra(std::uint64_t seed, std::size_t trials, std::size_t n) {
  require(n >= 2, "random spectra need n >= 2");
  PropositionSuiteResult result;
  result.trials = trials;
  constexpr std::array<double, 4> kThetas{0.0, 0.25, 0.5, 1.0};
  for (std::size_t t = 0; t < trials; ++t) {
    RngStream rng(seed, t);
    Vector sigma(static_cast<Eigen::Index>(n));
    for (Eigen::Index j = 0; j < sigma.size(); ++j) sigma(j) = std::pow(10.0, -3.0 * rng.uniform());
    std::sort(sigma.begin(), sigma.end(), std::greater<>());
    const double s1 = sigma(0);
    const double sn = sigma(sigma.size() - 1);
    const double mu = std::exp(std::log(sn) + (std::log(s1) - std::log(sn)) * rng.uniform());
    for (const double theta : kThetas) {
      for (const ClaimResult& c : verify_propositions(sigma, mu, theta).claims) {
        ClaimTally& tally = result.tally[c.id];
        switch (c.verdict) {
          case Verdict::Pass: ++tally.pass; break;
          case Verdict::Fail:
            ++tally.fail;
            result.failures.push_back(c);
            break;
          case Verdict::NotApplicable: ++tally.not_applicable; break;
        }
      }
    }
  }
  return result;
}

void write_suite_summary(std::ostream& out, const PropositionSuiteResult& result) {
  out << "claim\tpass\tfail\tnot_applicable\n";
  for (const auto& [id, t] : result.tally) {
    out << id << '\t' << t.pass << '\t' << t.fail << '\t' << t.not_applicable << '\n';
  }
  for (const ClaimResult& c : result.failures) {
    out << "FAILED\t" << c.id << '\t' << format_double(c.lhs) << '\t' << format_double(c.rhs) << '\n';
  }
}

}  // namespace tikreg
