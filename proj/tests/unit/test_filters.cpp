#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "oracles.hpp"
#include "tikreg/error.hpp"
#include "tikreg/filters.hpp"

namespace tikreg {
namespace {

SpectralProblem diagonal_problem(const Vector& sigma, const Vector& b_tilde) {
  return SpectralProblem{sigma, b_tilde, Matrix::Identity(sigma.size(), sigma.size()),
                         numerical_rank(sigma)};
}

std::vector<RegMethod> all_mu_methods(double mu) {
  return {RegMethod::tikhonov(mu), RegMethod::frmod(mu),  RegMethod::shift_k(mu),
          RegMethod::cut_k(mu),    RegMethod::scaled(mu), RegMethod::scaled_k(mu),
          RegMethod::theta_blend(mu, 0.3)};
}

TEST(ToSpectral, IdentityAndOrthogonalInvariance) {
  const Vector b{{1.0, -2.0, 3.0}};
  SvdFactorization f{Matrix::Identity(3, 3), Vector{{3.0, 2.0, 1.0}}, Matrix::Identity(3, 3)};
  EXPECT_EQ(to_spectral(f, b).b_tilde, b);

  std::mt19937_64 gen(4);
  const Matrix a = oracle::gaussian_matrix(9, 6, gen);
  const Vector rhs = oracle::gaussian_vector(9, gen);
  const SvdFactorization g = svd(a);
  const SpectralProblem sp = to_spectral(g, rhs);
  EXPECT_NEAR(sp.b_tilde.norm(), rhs.norm(), 1e-12 * rhs.norm());
  EXPECT_LE((g.U * sp.b_tilde - rhs).norm(), 1e-12 * rhs.norm());
  EXPECT_EQ(sp.rank, 6u);
}

TEST(BuildModification, FrModExample) {
  const DiagonalModification d = build_modification(RegMethod::frmod(1.0), Vector{{2.0, 1.0, 0.5}});
  EXPECT_EQ(d.dsq, (Vector{{0.0, 0.0, 0.75}}));
}

TEST(BuildModification, ShiftKExample) {
  const Vector sigma{{2.0, 1.0, 0.5}};
  const DiagonalModification d = build_modification(RegMethod::shift_k(1.0), sigma);
  EXPECT_EQ(d.k_effective, 1u);
  EXPECT_EQ(d.dsq, (Vector{{0.0, 1.0, 1.0}}));
  const Vector diag = sigma.cwiseAbs2() + d.dsq;
  EXPECT_EQ(diag, (Vector{{4.0, 2.0, 1.25}}));
}

TEST(BuildModification, ShiftKPicksLargestFeasibleIndex) {
  // k = 1 and k = 3 both keep the diagonal nonincreasing; k = 2 does not.
  const Vector sigma{{10.0, 2.0, 1.9, 0.1}};
  const double mu = 1.0;
  EXPECT_EQ(build_modification(RegMethod::shift_k(mu), sigma).k_effective, 3u);
}

TEST(BuildModification, ScaledExample) {
  const DiagonalModification d = build_modification(RegMethod::scaled(1.0), Vector{{2.0, 1.0}});
  EXPECT_EQ(d.dsq(0), 0.0);
  EXPECT_NEAR(d.dsq(1), 0.6, 1e-15);
}

TEST(BuildModification, CutKByMuAndByIndex) {
  const Vector sigma{{3.0, 2.0, 1.0}};
  EXPECT_EQ(build_modification(RegMethod::cut_k(1.5), sigma).k_effective, 2u);
  EXPECT_EQ(build_modification(RegMethod::cut_k(3.0), sigma).k_effective, 0u);
  EXPECT_EQ(build_modification(RegMethod::cut_k(0.5), sigma).k_effective, 3u);
  const DiagonalModification d = build_modification(RegMethod::cut_k_index(1), sigma);
  EXPECT_EQ(d.dsq, (Vector{{0.0, -4.0, -1.0}}));
}

TEST(BuildModification, ThetaEndpointsCollapse) {
  std::mt19937_64 gen(12);
  for (int trial = 0; trial < 20; ++trial) {
    const Vector sigma = oracle::jittered_spectrum(25, 1.0, 1e-3, gen);
    const double mu = std::sqrt(sigma(5) * sigma(20));
    const DiagonalModification t0 = build_modification(RegMethod::theta_blend(mu, 0.0), sigma);
    const DiagonalModification shift = build_modification(RegMethod::shift_k(mu), sigma);
    EXPECT_EQ(t0.k_effective, shift.k_effective);
    EXPECT_TRUE(t0.dsq.isApprox(shift.dsq, 1e-14));
    const DiagonalModification t1 = build_modification(RegMethod::theta_blend(mu, 1.0), sigma);
    const DiagonalModification sk = build_modification(RegMethod::scaled_k(mu), sigma);
    EXPECT_EQ(t1.k_effective, sk.k_effective);
    EXPECT_EQ(t1.dsq, sk.dsq);
  }
}

TEST(BuildModification, MonotoneDiagonalAndNonNegativity) {
  std::mt19937_64 gen(13);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const Vector sigma = oracle::jittered_spectrum(30, 1.0, 1e-4, gen);
    const double mu = std::exp(std::log(1e-5) + u(gen) * std::log(1e6));
    for (const RegMethod& m : all_mu_methods(mu)) {
      const DiagonalModification d = build_modification(m, sigma);
      const Vector diag = sigma.cwiseAbs2() + d.dsq;
      EXPECT_GE(diag.minCoeff(), 0.0);
      if (m.kind != MethodKind::CutK) EXPECT_GE(d.dsq.minCoeff(), 0.0);
      if (m.kind == MethodKind::ShiftK || m.kind == MethodKind::ScaledK || m.kind == MethodKind::Theta) {
        for (Eigen::Index j = 0; j + 1 < 30; ++j) EXPECT_GE(diag(j), diag(j + 1));
      }
    }
  }
}

TEST(BuildModification, RejectsInvalidParameters) {
  const Vector sigma{{2.0, 1.0}};
  EXPECT_THROW(build_modification(RegMethod::tikhonov(-1.0), sigma), Error);
  EXPECT_THROW(build_modification(RegMethod::theta_blend(1.0, 1.5), sigma), Error);
  EXPECT_THROW(build_modification(RegMethod::tsvd(3), sigma), Error);
}

TEST(SolveSpectral, HandSolvedTikhonov) {
  const SpectralProblem sp = diagonal_problem(Vector{{2.0, 1.0}}, Vector{{2.0, 1.0}});
  const Vector x = solve_spectral(sp, RegMethod::tikhonov(1.0));
  EXPECT_NEAR(x(0), 0.8, 1e-15);
  EXPECT_NEAR(x(1), 0.5, 1e-15);
  Matrix a(2, 2);
  a << 2, 0, 0, 1;
  EXPECT_TRUE(x.isApprox(solve_normal_equations_oracle(a, Vector::Ones(2), Matrix::Identity(2, 2),
                                                       Vector{{2.0, 1.0}}),
                         1e-14));
}

TEST(SolveSpectral, TsvdZeroIsZero) {
  const SpectralProblem sp = diagonal_problem(Vector{{2.0, 1.0}}, Vector{{2.0, 1.0}});
  EXPECT_EQ(solve_spectral(sp, RegMethod::tsvd(0)), Vector::Zero(2));
  EXPECT_THROW(solve_spectral(sp, RegMethod::tsvd(3)), Error);
}

TEST(SolveSpectral, CutKEqualsTsvd) {
  std::mt19937_64 gen(14);
  const Vector sigma = oracle::jittered_spectrum(20, 1.0, 1e-3, gen);
  const oracle::KnownSvdProblem p = oracle::known_svd_problem(24, sigma, 15);
  const SpectralProblem sp = to_spectral(svd(p.A), p.b);
  for (std::size_t k = 1; k < 20; ++k) {
    const double mu = 0.5 * (sigma(static_cast<Eigen::Index>(k) - 1) + sigma(static_cast<Eigen::Index>(k)));
    EXPECT_EQ(solve_spectral(sp, RegMethod::cut_k(mu)), solve_spectral(sp, RegMethod::tsvd(k)));
  }
}

TEST(SolveSpectral, MatchesDenseOracles) {
  std::mt19937_64 gen(16);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const Vector sigma = oracle::jittered_spectrum(20, 1.0, 1e-2, gen);
    const oracle::KnownSvdProblem p = oracle::known_svd_problem(26, sigma, 200 + trial);
    const SvdFactorization f = svd(p.A);
    const SpectralProblem sp = to_spectral(f, p.b);
    const double mu = sigma(19) * std::pow(sigma(0) / sigma(19), u(gen));
    for (const RegMethod& m : all_mu_methods(mu)) {
      const Vector x = solve_spectral(sp, m);
      Vector expected;
      if (m.kind == MethodKind::CutK) {
        expected = oracle::truncated_min_norm(p, static_cast<Eigen::Index>(cut_index(sigma, mu)));
      } else {
        expected = solve_normal_equations_oracle(p.A, build_modification(m, f.sigma).dsq, f.V, p.b);
      }
      EXPECT_LE((x - expected).norm(), 1e-8 * expected.norm()) << static_cast<int>(m.kind);
    }
  }
}

TEST(SolveSpectral, SmallMuApproachesLeastSquares) {
  std::mt19937_64 gen(17);
  const Vector sigma = oracle::jittered_spectrum(10, 1.0, 0.1, gen);
  const oracle::KnownSvdProblem p = oracle::known_svd_problem(12, sigma, 18);
  const SpectralProblem sp = to_spectral(svd(p.A), p.b);
  const Vector ls = p.A.colPivHouseholderQr().solve(p.b);
  for (const RegMethod& m :
       {RegMethod::tikhonov(1e-7), RegMethod::frmod(1e-7), RegMethod::scaled(1e-7)}) {
    EXPECT_LE((solve_spectral(sp, m) - ls).norm(), 1e-10 * ls.norm());
  }
}

TEST(SolveSpectral, NullComponentsStrictAndLenient) {
  const SpectralProblem sp = diagonal_problem(Vector{{2.0, 1.0, 0.0}}, Vector{{2.0, 1.0, 0.5}});
  ASSERT_EQ(sp.rank, 2u);
  const SpectralSolution lenient = solve_spectral_detailed(sp, RegMethod::frmod(0.0));
  EXPECT_EQ(lenient.zeroed_null_components, 1u);
  EXPECT_EQ(lenient.x(2), 0.0);
  try {
    solve_spectral(sp, RegMethod::tikhonov(0.0), SolveOptions{true});
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnregularizedNullComponent);
  }
  // A positive mu regularizes the null direction, and the minimal-norm
  // convention still leaves it at zero.
  const SpectralSolution reg = solve_spectral_detailed(sp, RegMethod::tikhonov(0.5), SolveOptions{true});
  EXPECT_EQ(reg.zeroed_null_components, 0u);
  EXPECT_EQ(reg.x(2), 0.0);
  EXPECT_NO_THROW(solve_spectral(sp, RegMethod::tsvd(2), SolveOptions{true}));
}

TEST(FilterFactors, Examples) {
  const Vector tik = filter_factors(Vector{{2.0, 1.0}}, 2, RegMethod::tikhonov(1.0));
  EXPECT_NEAR(tik(0), 0.8, 1e-15);
  EXPECT_NEAR(tik(1), 0.5, 1e-15);
  const Vector fr = filter_factors(Vector{{2.0, 1.0, 0.5}}, 3, RegMethod::frmod(1.0));
  EXPECT_EQ(fr, (Vector{{1.0, 1.0, 0.25}}));
}

TEST(FilterFactors, ConsistentWithSolveAndDiagonal) {
  std::mt19937_64 gen(19);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    const Vector sigma = oracle::jittered_spectrum(25, 1.0, 1e-4, gen);
    const Vector bt = oracle::gaussian_vector(25, gen);
    const SpectralProblem sp = diagonal_problem(sigma, bt);
    const double mu = sigma(24) * std::pow(sigma(0) / sigma(24), u(gen));
    for (const RegMethod& m : all_mu_methods(mu)) {
      const Vector phi = filter_factors(sp, m);
      const Vector dsq = build_modification(m, sigma).dsq;
      const Vector xt = solve_spectral(sp, m);
      for (Eigen::Index j = 0; j < 25; ++j) {
        const double s2 = sigma(j) * sigma(j);
        const double from_diag = s2 + dsq(j) > 0.0 ? s2 / (s2 + dsq(j)) : 0.0;
        EXPECT_NEAR(phi(j), from_diag, 1e-12);
        EXPECT_NEAR(xt(j), phi(j) * bt(j) / sigma(j), 1e-12 * std::abs(bt(j) / sigma(j)));
        EXPECT_GE(phi(j), 0.0);
        EXPECT_LE(phi(j), 1.0);
      }
    }
  }
}

TEST(FilterFactors, ShiftKStructure) {
  const Vector sigma{{5.0, 3.0, 1.0, 0.5, 0.1}};
  const double mu = 0.9;
  const RegMethod m = RegMethod::shift_k(mu);
  const std::size_t k = build_modification(m, sigma).k_effective;
  const Vector phi = filter_factors(sigma, 5, m);
  for (Eigen::Index j = 0; j < 5; ++j) {
    const double s2 = sigma(j) * sigma(j);
    EXPECT_EQ(phi(j), j < static_cast<Eigen::Index>(k) ? 1.0 : s2 / (s2 + mu * mu));
  }
}

TEST(FilterFactors, TikhonovDecreasesInMu) {
  const Vector sigma{{1.0, 0.3, 0.01}};
  Vector prev = filter_factors(sigma, 3, RegMethod::tikhonov(1e-3));
  for (double mu = 2e-3; mu < 10.0; mu *= 2.0) {
    const Vector phi = filter_factors(sigma, 3, RegMethod::tikhonov(mu));
    for (Eigen::Index j = 0; j < 3; ++j) EXPECT_LT(phi(j), prev(j));
    prev = phi;
  }
}

TEST(FilterFactors, ThetaIsAffineAtSharedIndex) {
  std::mt19937_64 gen(20);
  for (int trial = 0; trial < 20; ++trial) {
    const Vector sigma = oracle::jittered_spectrum(30, 1.0, 1e-3, gen);
    const double mu = std::sqrt(sigma(3) * sigma(25));
    for (double theta : {0.1, 0.5, 0.9}) {
      const std::size_t k = monotone_split_index(sigma, mu, theta);
      auto phi_at = [&](double th) {
        const Vector dsq = blended_tail_dsq(sigma, mu, th, k);
        return Vector(sigma.cwiseAbs2().cwiseQuotient(sigma.cwiseAbs2() + dsq));
      };
      const Vector blend = phi_at(theta);
      EXPECT_LE((blend - ((1 - theta) * phi_at(0.0) + theta * phi_at(1.0))).cwiseAbs().maxCoeff(), 1e-12);
      EXPECT_LE((blend - filter_factors(sigma, 30, RegMethod::theta_blend(mu, theta))).cwiseAbs().maxCoeff(),
                1e-12);
    }
  }
}

TEST(MethodFamily, ParsingAndNames) {
  const std::vector<MethodFamily> list = parse_method_list("frmod, mui,shiftk,tsvd,theta:0.5");
  ASSERT_EQ(list.size(), 5u);
  EXPECT_EQ(list[1].kind, MethodKind::TikhonovIdentity);
  EXPECT_EQ(list[4].kind, MethodKind::Theta);
  EXPECT_EQ(list[4].theta, 0.5);
  const RegMethod bound = list[4].with_mu(0.2);
  EXPECT_EQ(bound.kind, MethodKind::Theta);
  EXPECT_EQ(bound.mu, 0.2);
  EXPECT_EQ(bound.theta, 0.5);
  EXPECT_EQ(list[4].name(), "theta:0.5");
  for (const char* name : {"tsvd", "tikhonov", "frmod", "shiftk", "cutk", "scaled", "scaledk"}) {
    EXPECT_EQ(parse_method_family(name).name(), name);
  }
  EXPECT_THROW(parse_method_family("theta:2"), Error);
  EXPECT_THROW(parse_method_family("theta:abc"), Error);
  EXPECT_THROW(parse_method_family("ridge"), Error);
  EXPECT_TRUE(parse_method_list("").empty());
  EXPECT_THROW(list[3].with_mu(1.0), Error);
}

TEST(FilterFactorCsv, Layout) {
  std::ostringstream out;
  write_filter_factor_csv(out, Vector{{2.0, 1.0}}, 2,
                          {RegMethod::tikhonov(1.0), RegMethod::tsvd(1)}, {"tikhonov", "tsvd"});
  EXPECT_EQ(out.str(), "j,sigma,tikhonov,tsvd\n1,2,0.8,1\n2,1,0.5,0\n");
}

}  // namespace
}  // namespace tikreg
