#pragma once

// Named randomized property suites. Each suite reports how many checks ran
// and a message for every violated inequality.

#include <cstdint>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "schlicht/constructions.hpp"
#include "schlicht/estimator.hpp"
#include "schlicht/function_classes.hpp"
#include "schlicht/metric.hpp"

namespace schlicht {

struct SuiteResult {
  std::string name;
  std::size_t checks = 0;
  std::vector<std::string> violations;

  bool passed() const noexcept { return violations.empty(); }

  void expect(bool ok, const std::string &what) {
    ++checks;
    if (!ok) violations.push_back(what);
  }
};

namespace detail {

inline std::string describe(const char *what, std::size_t trial, double lhs, double rhs) {
  std::ostringstream ss;
  ss.precision(17);
  ss << what << " (trial " << trial << "): " << lhs << " vs " << rhs;
  return ss.str();
}

// Degree in [lo, hi] drawn from the seed stream.
inline std::size_t draw_degree(UniformSource &rng, std::size_t lo, std::size_t hi) {
  return lo + static_cast<std::size_t>(rng.next() * static_cast<double>(hi - lo + 1));
}

inline TaylorPoly draw(ClassId cls, std::size_t degree, UniformSource &rng) {
  return sample_class({cls, degree, 1, static_cast<std::uint64_t>(rng.next() * 0x1p53)}).front();
}

} // namespace detail

/// Symmetry, identity and the interval triangle inequality on random triples.
inline SuiteResult verify_metric_axioms(const MetricConfig &cfg, std::size_t trials, std::uint64_t seed) {
  SuiteResult res{"metric-axioms", 0, {}};
  detail::UniformSource rng(seed);
  const MetricTerms terms(cfg);
  const UnitRoots roots(cfg.circle_samples);
  for (std::size_t t = 0; t < trials; ++t) {
    const ClassId cls = rng.next() < 0.5 ? ClassId::class_a : ClassId::class_b_debranges;
    const TaylorPoly f = detail::draw(cls, detail::draw_degree(rng, 2, 8), rng);
    const TaylorPoly g = detail::draw(cls, detail::draw_degree(rng, 2, 8), rng);
    const TaylorPoly h = detail::draw(cls, detail::draw_degree(rng, 2, 8), rng);
    const BoundInterval fg = metric_d(f, g, terms, roots);
    const BoundInterval gf = metric_d(g, f, terms, roots);
    const BoundInterval gh = metric_d(g, h, terms, roots);
    const BoundInterval fh = metric_d(f, h, terms, roots);
    res.expect(fg == gf, detail::describe("symmetry", t, fg.lo, gf.lo));
    res.expect(fh.lo <= fg.hi + gh.hi + 1e-9, detail::describe("triangle", t, fh.lo, fg.hi + gh.hi));
    res.expect(metric_d(f, f, terms, roots).lo == 0.0, detail::describe("identity", t, 0.0, 0.0));
  }
  return res;
}

/// Coefficient lower bound against the certified metric on class A pairs.
inline SuiteResult verify_lemma_ca(const MetricConfig &cfg, std::size_t trials, std::uint64_t seed) {
  SuiteResult res{"lemma-ca", 0, {}};
  detail::UniformSource rng(seed);
  const MetricTerms terms(cfg);
  const UnitRoots roots(cfg.circle_samples);
  const bool sharp = cfg.metric_terms >= 60 && cfg.circle_samples >= 4096;
  for (std::size_t t = 0; t < trials; ++t) {
    const TaylorPoly f = detail::draw(ClassId::class_a, detail::draw_degree(rng, 2, 10), rng);
    const TaylorPoly g = detail::draw(ClassId::class_a, detail::draw_degree(rng, 2, 10), rng);
    const double lower = coeff_distance_lower(f, g, cfg);
    const BoundInterval d = metric_d(f, g, terms, roots);
    res.expect(lower <= d.hi, detail::describe("coefficient bound above metric hi", t, lower, d.hi));
    if (sharp) res.expect(lower <= d.lo + 1e-9, detail::describe("coefficient bound above metric lo", t, lower, d.lo));
  }
  return res;
}

/// Truncation error against the tail bound for random members of B.
inline SuiteResult verify_lemma_cb(const MetricConfig &cfg, std::size_t trials, std::uint64_t seed) {
  SuiteResult res{"lemma-cb", 0, {}};
  detail::UniformSource rng(seed);
  const MetricTerms terms(cfg);
  const UnitRoots roots(cfg.circle_samples);
  for (std::size_t t = 0; t < trials; ++t) {
    const std::size_t n = detail::draw_degree(rng, 1, 5);
    const TaylorPoly f = detail::draw(ClassId::class_b_debranges, std::max<std::size_t>(2, 2 * n), rng);
    const double exact = truncation_tail_bound(n, cfg, TailMode::exact);
    const double coarse = truncation_tail_bound(n, cfg, TailMode::paper);
    const BoundInterval d = metric_d(f, truncate(f, n), terms, roots);
    res.expect(d.lo <= exact + 1e-9, detail::describe("truncation distance above tail bound", t, d.lo, exact));
    res.expect(exact <= coarse, detail::describe("exact tail above (n+2) tail", t, exact, coarse));
  }
  return res;
}

/// Pairwise separation of small packings, plus random pairs from larger ones.
inline SuiteResult verify_packing(const MetricConfig &cfg, std::size_t trials, std::uint64_t seed) {
  SuiteResult res{"packing", 0, {}};
  for (std::size_t n = 2; n <= 3; ++n) {
    for (std::size_t K = 1; K <= 4; ++K) {
      const PackingCertificate cert = packing_certificate(n, K, cfg);
      const std::uint64_t count = *cert.count;
      for (std::uint64_t a = 0; a < count; ++a) {
        const TaylorPoly f = packing_member(n, K, packing_index(n, K, a));
        res.expect(is_member(f, ClassId::class_a), "packing member outside class A");
        for (std::uint64_t b = a + 1; b < count; ++b) {
          const TaylorPoly g = packing_member(n, K, packing_index(n, K, b));
          const double lower = coeff_distance_lower(f, g, cfg);
          res.expect(lower >= cert.separation_lo - kCertSlack,
                     detail::describe("pair below separation", static_cast<std::size_t>(a), lower, cert.separation_lo));
        }
      }
    }
  }
  {
    // Sampled metric for the 9-member packing n = 3, K = 3.
    const PackingCertificate cert = packing_certificate(3, 3, cfg);
    const MetricTerms terms(cfg);
    const UnitRoots roots(cfg.circle_samples);
    for (std::uint64_t a = 0; a < 9; ++a) {
      for (std::uint64_t b = a + 1; b < 9; ++b) {
        const BoundInterval d =
            metric_d(packing_member(3, 3, packing_index(3, 3, a)), packing_member(3, 3, packing_index(3, 3, b)), terms, roots);
        res.expect(d.lo >= cert.separation_lo - 1e-9,
                   detail::describe("sampled distance below separation", static_cast<std::size_t>(a), d.lo, cert.separation_lo));
      }
    }
  }
  detail::UniformSource rng(seed);
  for (std::size_t t = 0; t < trials; ++t) {
    const std::size_t n = detail::draw_degree(rng, 2, 8);
    const std::size_t K = detail::draw_degree(rng, 1, 50);
    const PackingCertificate cert = packing_certificate(n, K, cfg);
    std::vector<std::size_t> ta(n - 1), tb(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      ta[i] = detail::draw_degree(rng, 1, K);
      tb[i] = detail::draw_degree(rng, 1, K);
    }
    if (ta == tb) tb[0] = tb[0] == K ? 1 : tb[0] + 1;
    if (ta == tb) continue; // K = 1 has a single member
    const double lower = coeff_distance_lower(packing_member(n, K, ta), packing_member(n, K, tb), cfg);
    res.expect(lower >= cert.separation_lo - kCertSlack, detail::describe("random pair below separation", t, lower, cert.separation_lo));
  }
  return res;
}

/// Quantization error and truncate-then-quantize coverage.
inline SuiteResult verify_net(const MetricConfig &cfg, std::size_t trials, std::uint64_t seed) {
  SuiteResult res{"net", 0, {}};
  detail::UniformSource rng(seed);
  const MetricTerms terms(cfg);
  const UnitRoots roots(cfg.circle_samples);
  const double C = cfg.lambda / (1.0 - cfg.lambda);
  for (std::size_t t = 0; t < trials; ++t) {
    const TaylorPoly p = detail::draw(ClassId::class_b_debranges, 2, rng);
    const NetQuantization q = quantize_to_net(p, 2, 8);
    const double bound = C * 4.0 / 8.0 + terms.tail() + 1e-9;
    const BoundInterval d = metric_d(p, q.center, terms, roots);
    res.expect(d.hi <= bound, detail::describe("quantization distance above C n^2/K", t, d.hi, bound));

    const std::size_t n = detail::draw_degree(rng, 1, 3);
    const NetCertificate cert = net_upper_point(n, cfg);
    const TaylorPoly f = detail::draw(ClassId::class_b_debranges, std::max<std::size_t>(2, 2 * n), rng);
    const NetQuantization c = quantize_to_net(truncate(f, n), n, static_cast<std::size_t>(cert.K));
    const BoundInterval cover = metric_d(f, c.center, terms, roots);
    res.expect(cover.hi <= cert.radius_hi + 1e-9, detail::describe("net center beyond radius", t, cover.hi, cert.radius_hi));
  }
  return res;
}

/// Koebe sandwich lower <= proxy distance <= tail bound.
inline SuiteResult verify_sharpness(const MetricConfig &cfg, std::size_t trials, std::uint64_t seed) {
  SuiteResult res{"sharpness", 0, {}};
  (void)seed;
  const std::size_t count = std::max<std::size_t>(1, std::min<std::size_t>(trials, 8));
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t n = 5 * (i + 1);
    const KoebeSandwich s = koebe_sandwich(n, cfg);
    res.expect(s.holds(), detail::describe("sandwich", n, s.lower, s.upper));
    res.expect(s.lower <= s.upper + 1e-9, detail::describe("lower above upper", n, s.lower, s.upper));
  }
  return res;
}

using SuiteFn = std::function<SuiteResult(const MetricConfig &, std::size_t, std::uint64_t)>;

inline const std::vector<std::pair<std::string_view, SuiteFn>> &suite_registry() {
  static const std::vector<std::pair<std::string_view, SuiteFn>> suites{
      {"lemma-ca", verify_lemma_ca}, {"lemma-cb", verify_lemma_cb},   {"packing", verify_packing},
      {"net", verify_net},           {"sharpness", verify_sharpness}, {"metric-axioms", verify_metric_axioms},
  };
  return suites;
}

/// Runs one suite by name, or every suite for "all".
inline std::vector<SuiteResult> run_suites(std::string_view name, const MetricConfig &cfg, std::size_t trials,
                                           std::uint64_t seed) {
  cfg.validate();
  std::vector<SuiteResult> out;
  for (const auto &[suite, fn] : suite_registry()) {
    if (name == "all" || name == suite) out.push_back(fn(cfg, trials, seed));
  }
  if (out.empty()) throw std::invalid_argument("unknown suite '" + std::string(name) + "'");
  return out;
}

} // namespace schlicht
