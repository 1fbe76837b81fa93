#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "schlicht/constructions.hpp"
#include "schlicht/estimator.hpp"
#include "schlicht/function_classes.hpp"

using namespace schlicht;

namespace {

MetricConfig half_cfg(std::size_t J = 60, std::size_t M = 4096) { return {0.5, 1.0, J, M}; }

} // namespace

TEST(Packing, MemberFormula) {
  EXPECT_EQ(packing_member(2, 1, {1}), (TaylorPoly{1.0, 0.25}));
  const TaylorPoly p = packing_member(3, 4, {4, 4});
  EXPECT_NEAR(p.coeff(2).real(), 1.0 / 6.0, 1e-16);
  EXPECT_NEAR(p.coeff(3).real(), 1.0 / 9.0, 1e-16);
  EXPECT_THROW(packing_member(3, 4, {5, 1}), std::invalid_argument);
  EXPECT_THROW(packing_member(3, 4, {0, 1}), std::invalid_argument);
  EXPECT_THROW(packing_member(3, 4, {1}), std::invalid_argument);
  EXPECT_THROW(packing_member(1, 4, {}), std::invalid_argument);
}

TEST(Packing, IndexDecoding) {
  EXPECT_EQ(packing_index(3, 4, 0), (std::vector<std::size_t>{1, 1}));
  EXPECT_EQ(packing_index(3, 4, 1), (std::vector<std::size_t>{2, 1}));
  EXPECT_EQ(packing_index(3, 4, 15), (std::vector<std::size_t>{4, 4}));
  EXPECT_THROW(packing_index(3, 4, 16), std::invalid_argument);
  EXPECT_EQ(packing_count(3, 4), 16u);
  EXPECT_FALSE(packing_count(100, 50).has_value());
}

TEST(Packing, MembersInClassA) {
  for (std::size_t n = 2; n <= 5; ++n) {
    for (std::size_t K = 1; K <= 4; ++K) {
      for (std::uint64_t i = 0; i < *packing_count(n, K); ++i) {
        EXPECT_TRUE(is_member(packing_member(n, K, packing_index(n, K, i)), ClassId::class_a));
        EXPECT_TRUE(is_member(packing_member(n, K, packing_index(n, K, i), PackingFamily::convex),
                              ClassId::convex_sufficient));
      }
    }
  }
}

TEST(Packing, CertificateExample) {
  const PackingCertificate c = packing_certificate(3, 4, half_cfg());
  // min{(1/4)(2/3)^2/2, (1/8)(3/4)^3/2} / 36 = (27/1024) / 36
  EXPECT_NEAR(c.separation_lo, 0.000732421875, 1e-18);
  EXPECT_EQ(c.count, 16u);
  EXPECT_DOUBLE_EQ(c.delta, c.separation_lo / 3.0);
  EXPECT_NEAR(c.log_count, 2.0 * std::log(4.0), 1e-15);
  EXPECT_THROW(packing_certificate(1, 4, half_cfg()), std::invalid_argument);
  EXPECT_THROW(packing_certificate(3, 0, half_cfg()), std::invalid_argument);
}

TEST(Packing, BruteForceSmall) {
  const MetricConfig cfg = half_cfg();
  for (PackingFamily fam : {PackingFamily::schlicht, PackingFamily::convex}) {
    for (std::size_t n = 2; n <= 3; ++n) {
      for (std::size_t K = 1; K <= 4; ++K) {
        const PackingCertificate cert = packing_certificate(n, K, cfg, fam);
        for (std::uint64_t a = 0; a < *cert.count; ++a) {
          for (std::uint64_t b = a + 1; b < *cert.count; ++b) {
            const double lower = coeff_distance_lower(packing_member(n, K, packing_index(n, K, a), fam),
                                                      packing_member(n, K, packing_index(n, K, b), fam), cfg);
            EXPECT_GE(lower, cert.separation_lo - 1e-12);
          }
        }
      }
    }
  }
}

TEST(Packing, SampledMetricSeparation) {
  const MetricConfig cfg = half_cfg();
  const PackingCertificate cert = packing_certificate(3, 3, cfg);
  EXPECT_EQ(cert.count, 9u);
  const MetricTerms terms(cfg);
  const UnitRoots roots(cfg.circle_samples);
  for (std::uint64_t a = 0; a < 9; ++a) {
    for (std::uint64_t b = a + 1; b < 9; ++b) {
      const BoundInterval d =
          metric_d(packing_member(3, 3, packing_index(3, 3, a)), packing_member(3, 3, packing_index(3, 3, b)), terms, roots);
      EXPECT_GE(d.hi, cert.separation_lo);
      EXPECT_GE(d.lo, cert.separation_lo - 1e-9);
    }
  }
}

TEST(Rho, DefaultConfig) {
  for (std::size_t n_max : {10u, 50u, 200u}) {
    const Rho r = compute_rho(half_cfg(), n_max);
    EXPECT_EQ(r.denominator, 15u);
    EXPECT_DOUBLE_EQ(r.rho, 1.0 / 15.0);
    EXPECT_EQ(r.binding_n, 2u);
    EXPECT_EQ(r.n_verified, n_max);
    EXPECT_TRUE(r.tail_certified);
    EXPECT_LT(r.rho, 0.5);
  }
  EXPECT_THROW(compute_rho(half_cfg(), 1), std::invalid_argument);
}

TEST(Rho, BindingArithmetic) {
  // n = 2: (1/4)(4/9)/6/4 = 1/216 sits between 15^-2 and 14^-2.
  EXPECT_GE(1.0 / 216.0, 1.0 / 225.0);
  EXPECT_LT(1.0 / 216.0, 1.0 / 196.0);
}

TEST(Rho, MatchesGridOracle) {
  for (double lambda : {0.3, 0.5, 0.7, 0.9}) {
    for (double alpha : {0.5, 1.0, 2.0}) {
      const MetricConfig cfg{lambda, alpha, 60, 64};
      const Rho r = compute_rho(cfg, 30);
      EXPECT_EQ(r.denominator, oracle::rho_denominator_grid(lambda, alpha, 30)) << lambda << " " << alpha;
      EXPECT_LT(r.rho, lambda);
    }
  }
}

TEST(LowerCurve, Examples) {
  const auto pts = lower_bound_curve(half_cfg(), 2, 40);
  ASSERT_EQ(pts.size(), 39u);
  EXPECT_DOUBLE_EQ(pts[0].delta, std::pow(15.0, -4.0));
  EXPECT_DOUBLE_EQ(pts[0].log_count, 2.0 * std::log(15.0));
  EXPECT_NEAR(pts[1].delta / 8.779e-8, 1.0, 1e-3);
  EXPECT_NEAR(pts[1].log_count, 6.0 * std::log(15.0), 1e-12);
  for (std::size_t i = 1; i < pts.size(); ++i) {
    EXPECT_LT(pts[i].delta, pts[i - 1].delta);
    EXPECT_GT(pts[i].log_count, pts[i - 1].log_count);
  }
  EXPECT_THROW(lower_bound_curve(half_cfg(), 1, 4), std::invalid_argument);
}

TEST(LowerCurve, QuadraticRatio) {
  const double limit = 1.0 / (4.0 * std::log(15.0));
  for (const CurvePoint &p : lower_bound_curve(half_cfg(), 10, 40)) {
    const double l = std::log(1.0 / p.delta);
    EXPECT_NEAR(p.log_count / (l * l), limit, 0.2 * limit) << p.n;
  }
}

TEST(Truncate, Examples) {
  EXPECT_EQ(truncate(koebe(10), 10), koebe(10));
  EXPECT_EQ(truncate(koebe(10), 3), (TaylorPoly{1.0, 2.0, 3.0}));
  EXPECT_EQ(truncate(koebe(3), 10), koebe(3));
  EXPECT_THROW(truncate(koebe(3), 0), std::invalid_argument);
}

TEST(Truncate, KoebeWithinTail) {
  const MetricConfig cfg = half_cfg();
  const BoundInterval d = metric_d(koebe(60), truncate(koebe(60), 10), cfg);
  EXPECT_LE(d.hi, truncation_tail_bound(10, cfg, TailMode::exact) + 1e-9);
}

TEST(Quantize, GridPointIsFixed) {
  const NetQuantization q = quantize_to_net(TaylorPoly{1.0}, 1, 5);
  EXPECT_EQ(q.center, TaylorPoly{1.0});
  EXPECT_EQ(q.per_coeff_err, std::vector<double>{0.0});
}

TEST(Quantize, RoundingExample) {
  const NetQuantization q = quantize_to_net(TaylorPoly{0.9, Complex(-1.3, 0.6)}, 2, 4);
  EXPECT_EQ(q.center, (TaylorPoly{1.0, Complex(-1.5, 0.5)}));
  EXPECT_NEAR(q.per_coeff_err[0], 0.1, 1e-15);
  EXPECT_NEAR(q.per_coeff_err[1], std::hypot(0.2, 0.1), 1e-15);
  EXPECT_LE(q.per_coeff_err[0], 1.0 / (std::sqrt(2.0) * 4.0));
  EXPECT_LE(q.per_coeff_err[1], 2.0 / (std::sqrt(2.0) * 4.0));
}

TEST(Quantize, Errors) {
  EXPECT_THROW(quantize_to_net(TaylorPoly{1.0, 3.0}, 2, 4), std::invalid_argument);
  EXPECT_THROW(quantize_to_net(koebe(3), 2, 4), std::invalid_argument);
  EXPECT_THROW(quantize_to_net(koebe(2), 2, 0), std::invalid_argument);
}

TEST(Quantize, RandomErrorBounds) {
  const auto pts = sample_class({ClassId::class_b_debranges, 5, 300, 12});
  for (const auto &p : pts) {
    const NetQuantization q = quantize_to_net(p, 5, 7);
    for (std::size_t k = 1; k <= 5; ++k) {
      EXPECT_LE(q.per_coeff_err[k - 1], k / (std::sqrt(2.0) * 7.0) + 1e-15);
      EXPECT_LE(std::abs(q.center.coeff(k)), std::sqrt(2.0) * k + 1e-15);
      EXPECT_LE(std::abs(q.s[k - 1]), 7);
    }
  }
}

TEST(Net, EdgeOfDiskIsCovered) {
  // Points with |p_k| = k along a diagonal: the inscribed-square grid would miss these.
  const double c = std::sqrt(0.5);
  const TaylorPoly p{Complex(c, c), Complex(2 * c, -2 * c)};
  const NetQuantization q = quantize_to_net(p, 2, 10);
  EXPECT_LE(q.per_coeff_err[0], 1.0 / (std::sqrt(2.0) * 10.0) + 1e-15);
  EXPECT_LE(q.per_coeff_err[1], 2.0 / (std::sqrt(2.0) * 10.0) + 1e-15);
}

TEST(Net, QuantizationDistance) {
  const MetricConfig cfg = half_cfg(60, 1024);
  const MetricTerms terms(cfg);
  const UnitRoots roots(cfg.circle_samples);
  const double bound = 1.0 * 4.0 / 8.0 + terms.tail() + 1e-9;
  for (const auto &p : sample_class({ClassId::class_b_debranges, 2, 100, 5})) {
    EXPECT_LE(metric_d(p, quantize_to_net(p, 2, 8).center, terms, roots).hi, bound);
  }
}

TEST(Net, ReferencePointAtTen) {
  const NetCertificate c = net_upper_point(10, half_cfg());
  EXPECT_NEAR(c.tau, 0.368579319452912, 1e-13);
  EXPECT_EQ(c.K, 272.0);
  EXPECT_NEAR(c.radius_hi, 0.736226378276441, 1e-13);
  EXPECT_NEAR(c.log_count, 126.015715893264885, 1e-11);
  EXPECT_DOUBLE_EQ(c.C, 1.0);
  EXPECT_FALSE(c.internal);
  EXPECT_DOUBLE_EQ(c.internal_radius_hi(), 2.0 * c.radius_hi);
}

TEST(Net, RadiusAtMostTwiceTau) {
  for (std::size_t n = 1; n <= 400; n += 13) {
    const NetCertificate c = net_upper_point(n, half_cfg());
    EXPECT_LE(c.radius_hi, 2.0 * c.tau);
    EXPECT_NEAR(c.log_count, 2.0 * n * std::log(2.0 * c.K + 1.0), 1e-9 * c.log_count);
    EXPECT_EQ(c.K, std::floor(c.K));
  }
}

TEST(Net, UnderflowIsReported) {
  // The weight tail keeps tau positive unless it underflows itself.
  EXPECT_GE(net_upper_point(200000, half_cfg()).tau, metric_tail_bound(half_cfg()));
  const MetricConfig cfg{0.5, 1.0, 2000, 64};
  EXPECT_THROW(net_upper_point(10'000'000, cfg), std::runtime_error);
}

TEST(Net, CountGrowthBand) {
  // log_count / n^{3/2} over n in [20, 200]; reference run gives [3.41, 3.82].
  for (std::size_t n = 20; n <= 200; n += 10) {
    const double ratio = net_upper_point(n, half_cfg()).log_count / std::pow(double(n), 1.5);
    EXPECT_GE(ratio, 3.3) << n;
    EXPECT_LE(ratio, 3.9) << n;
  }
}

TEST(Net, TruncateThenQuantizeCovers) {
  const MetricConfig cfg = half_cfg(60, 1024);
  const MetricTerms terms(cfg);
  const UnitRoots roots(cfg.circle_samples);
  for (std::size_t n = 1; n <= 3; ++n) {
    const NetCertificate cert = net_upper_point(n, cfg);
    for (const auto &f : sample_class({ClassId::class_b_debranges, 2 * n + 1, 30, 40 + n})) {
      const NetQuantization q = quantize_to_net(truncate(f, n), n, static_cast<std::size_t>(cert.K));
      EXPECT_LE(metric_d(f, q.center, terms, roots).hi, cert.radius_hi + 1e-9);
    }
  }
}

TEST(UpperCurve, MonotoneAndCubicBound) {
  const auto mono = upper_bound_curve(half_cfg(), 5, 100);
  for (std::size_t i = 1; i < mono.size(); ++i) EXPECT_LT(mono[i].delta, mono[i - 1].delta);

  for (const CurvePoint &p : upper_bound_curve(half_cfg(), 20, 200)) {
    const double l = std::log(1.0 / p.delta);
    EXPECT_LE(p.log_count / (l * l * l), 250.0) << p.n;
  }
}

TEST(UpperCurve, AlphaTwoUsesQuarticPower) {
  // Below n ~ 400 the capped terms keep delta near 1; the reference ratio
  // log_count / log^4(1/delta) is 282.4 at n = 400 and falls after.
  const MetricConfig cfg{0.5, 2.0, 60, 64};
  const auto pts = upper_bound_curve(cfg, 400, 3200);
  for (std::size_t i = 1; i < pts.size(); ++i) EXPECT_LT(pts[i].delta, pts[i - 1].delta);
  for (const CurvePoint &p : pts) {
    EXPECT_LE(p.log_count / std::pow(std::log(1.0 / p.delta), 2.0 + cfg.alpha), 300.0) << p.n;
  }
}

TEST(Curves, LowerNeverExceedsUpper) {
  // e^L <= N_A(d_L) <= N_B(d_L / 4) <= N_B(d_U) <= e^U whenever the internal
  // radius d_U is at most d_L / 4.
  const auto lower = lower_bound_curve(half_cfg(), 2, 4);
  const auto upper = upper_bound_curve(half_cfg(), 1, 400);
  std::size_t compared = 0;
  for (const CurvePoint &lp : lower) {
    for (const CurvePoint &up : upper) {
      if (2.0 * up.delta > lp.delta / 4.0) continue;
      ++compared;
      EXPECT_GE(up.log_count, lp.log_count);
    }
  }
  EXPECT_GT(compared, 0u);
}

TEST(Sharpness, SingleRetainedTerm) {
  const MetricConfig cfg = half_cfg();
  const double single = 0.125 * std::pow(0.75, 10);
  EXPECT_NEAR(single, 7.04e-3, 1e-5);
  EXPECT_GE(koebe_sharpness_lower(9, cfg), single);
}

TEST(Sharpness, BelowUpperBound) {
  const MetricConfig cfg = half_cfg();
  for (std::size_t n = 1; n <= 400; ++n) {
    EXPECT_LE(koebe_sharpness_lower(n, cfg), truncation_tail_bound(n, cfg, TailMode::exact) + 1e-9);
  }
}

TEST(Sharpness, LowerRateBand) {
  // -log(lower)/sqrt(n) reference run: [1.2903, 1.5321].
  const MetricConfig cfg = half_cfg();
  for (std::size_t n : {25u, 50u, 100u, 200u, 400u}) {
    const double rate = -std::log(koebe_sharpness_lower(n, cfg)) / std::sqrt(double(n));
    EXPECT_GE(rate, 1.25);
    EXPECT_LE(rate, 1.55);
  }
}

TEST(Sharpness, Sandwich) {
  const MetricConfig cfg = half_cfg();
  for (std::size_t n : {5u, 25u, 50u}) {
    const KoebeSandwich s = koebe_sandwich(n, cfg);
    EXPECT_EQ(s.proxy_degree, 4 * n);
    EXPECT_TRUE(s.holds()) << n;
    EXPECT_LE(s.lower, s.upper);
  }
}
