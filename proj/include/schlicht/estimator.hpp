#pragma once

// Empirical packing and covering counts on sampled slices of the coefficient
// classes. Counts refer to the finite sample, never to the class itself.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <queue>
#include <random>
#include <stdexcept>
#include <thread>
#include <utility>
#include <vector>

#include "schlicht/function_classes.hpp"
#include "schlicht/metric.hpp"
#include "schlicht/series.hpp"

namespace schlicht {

struct SampleSpec {
  ClassId cls = ClassId::class_a;
  std::size_t degree = 2;
  std::size_t count = 1;
  std::uint64_t seed = 0;

  void validate() const {
    if (degree < 2) throw std::invalid_argument("SampleSpec: degree must be >= 2");
    if (count < 1) throw std::invalid_argument("SampleSpec: count must be >= 1");
  }
};

namespace detail {

/// Uniform doubles in [0,1) from the top 53 bits of a 64-bit Mersenne
/// Twister, so sequences are identical across standard libraries.
class UniformSource {
public:
  explicit UniformSource(std::uint64_t seed) : engine_(seed) {}
  double next() { return static_cast<double>(engine_() >> 11) * 0x1p-53; }
  double phase() { return 2.0 * std::numbers::pi * next(); }
  /// Point uniform (by area) on the disk of the given radius.
  Complex disk(double radius) { return std::polar(radius * std::sqrt(next()), phase()); }
  /// Standard exponential variate.
  double exponential() { return -std::log1p(-next()); }

private:
  std::mt19937_64 engine_;
};

} // namespace detail

/// Seeded samples of a class.
///   A / convex: weights uniform on {w >= 0, sum w <= 1}, |a_k| = w_k / k
///               (resp. w_k / k^2), uniform phases, a_1 = 1.
///   B / B-littlewood: a_k uniform on the disk of radius k (resp. e k).
inline std::vector<TaylorPoly> sample_class(const SampleSpec &spec) {
  spec.validate();
  detail::UniformSource rng(spec.seed);
  std::vector<TaylorPoly> out;
  out.reserve(spec.count);
  const std::size_t d = spec.degree;
  for (std::size_t s = 0; s < spec.count; ++s) {
    std::vector<Complex> c(d);
    switch (spec.cls) {
    case ClassId::class_a:
    case ClassId::convex_sufficient: {
      // d exponentials normalized give a flat Dirichlet on d parts; the
      // last part is the slack 1 - sum w_k.
      std::vector<double> e(d);
      double total = 0.0;
      for (auto &x : e) total += (x = rng.exponential());
      c[0] = 1.0;
      const int power = spec.cls == ClassId::class_a ? 1 : 2;
      for (std::size_t k = 2; k <= d; ++k) {
        const double w = e[k - 2] / total;
        c[k - 1] = std::polar(w / std::pow(static_cast<double>(k), power), rng.phase());
      }
      break;
    }
    case ClassId::class_b_debranges:
    case ClassId::class_b_littlewood: {
      const double factor = spec.cls == ClassId::class_b_debranges ? 1.0 : std::numbers::e;
      for (std::size_t k = 1; k <= d; ++k) c[k - 1] = rng.disk(factor * static_cast<double>(k));
      break;
    }
    default:
      throw std::invalid_argument("sample_class: unsupported class");
    }
    out.emplace_back(std::move(c));
  }
  return out;
}

/// Area-uniform samples z + a_2 z^2 with |a_2| <= radius.
inline std::vector<TaylorPoly> sample_a2_slice(std::size_t count, std::uint64_t seed, double radius = 0.5) {
  detail::UniformSource rng(seed);
  std::vector<TaylorPoly> out;
  out.reserve(count);
  for (std::size_t s = 0; s < count; ++s) out.push_back(TaylorPoly{1.0, rng.disk(radius)});
  return out;
}

/// Certified distance decisions. Each decision equals the one made from
/// metric_d_refined. Terms start at their analytic bracket and are refined
/// one at a time, in the same summation order, until the decision settles;
/// rounding is monotone in each summand, so the partial sums bound the full
/// refined sums exactly.
class DistanceOracle {
public:
  explicit DistanceOracle(const MetricConfig &cfg) : terms_(cfg), roots_(cfg.circle_samples) {}

  const MetricTerms &terms() const noexcept { return terms_; }

  /// metric_d_refined(f, g).lo >= delta
  bool separated(const TaylorPoly &f, const TaylorPoly &g, double delta) const {
    if (f == g) return 0.0 >= delta;
    if (prepare(f, g, delta)) return true;
    return decide(f, g, [delta](double lo_min, double lo_max, double, double) -> int {
      if (lo_min >= delta) return 1;
      if (lo_max < delta) return 0;
      return -1;
    });
  }

  /// metric_d_refined(f, g).hi <= delta
  bool within(const TaylorPoly &f, const TaylorPoly &g, double delta) const {
    if (f == g) return terms_.tail() <= delta;
    if (prepare(f, g, delta)) return false;
    const double tail = terms_.tail();
    return decide(f, g, [delta, tail](double, double, double hi_min, double hi_max) -> int {
      if (hi_max + tail <= delta) return 1;
      if (hi_min + tail > delta) return 0;
      return -1;
    });
  }

private:
  // Per-term analytic bounds w min{1, l2} and w min{1, max(l2, l1)}. Returns
  // true once the lower partial sum alone exceeds the threshold, which
  // settles both decisions.
  bool prepare(const TaylorPoly &f, const TaylorPoly &g, double threshold) const {
    const std::size_t n = std::max(f.degree(), g.degree());
    diff_.resize(n);
    for (std::size_t k = 1; k <= n; ++k) diff_[k - 1] = std::abs(f.coeff(k) - g.coeff(k));
    const std::size_t J = terms_.size();
    l2_.resize(J);
    l1_.resize(J);
    double lo = 0.0;
    for (std::size_t i = 0; i < J; ++i) {
      const double r = terms_.radius(i);
      double l2 = 0.0, l1 = 0.0, rk = 1.0;
      for (const double a : diff_) {
        rk *= r;
        l2 += a * a * rk * rk;
        l1 += a * rk;
      }
      l2 = std::sqrt(l2);
      l2_[i] = l2;
      l1_[i] = std::max(l2, l1);
      lo += terms_.weight(i) * std::min(1.0, l2);
      if (lo > threshold) return true;
    }
    return false;
  }

  // verdict(lo_min, lo_max, hi_min, hi_max) -> 1 / 0 / -1 (undecided); hi
  // bounds exclude the tail.
  template <class Verdict> bool decide(const TaylorPoly &f, const TaylorPoly &g, Verdict verdict) const {
    const std::size_t J = terms_.size();
    rlo_.resize(J);
    rhi_.resize(J);
    std::optional<TaylorPoly> diff;
    for (std::size_t m = 0;; ++m) {
      double lo_min = 0.0, lo_max = 0.0, hi_min = 0.0, hi_max = 0.0;
      for (std::size_t i = 0; i < J; ++i) {
        const double w = terms_.weight(i);
        if (i < m) {
          lo_min += rlo_[i];
          lo_max += rlo_[i];
          hi_min += rhi_[i];
          hi_max += rhi_[i];
        } else {
          const double a = w * std::min(1.0, l2_[i]);
          const double b = w * std::min(1.0, l1_[i]);
          lo_min += a;
          lo_max += b;
          hi_min += a;
          hi_max += b;
        }
      }
      const int v = verdict(lo_min, lo_max, hi_min, hi_max);
      if (v >= 0) return v == 1;
      if (m == J) throw std::logic_error("DistanceOracle: refined sums left the decision open");
      if (!diff) diff = difference(f, g);
      const BoundInterval term = max_modulus_interval(*diff, terms_.radius(m), roots_);
      const double w = terms_.weight(m);
      rlo_[m] = w * std::min(1.0, std::clamp(term.lo, l2_[m], l1_[m]));
      rhi_[m] = w * std::min(1.0, std::clamp(term.hi, l2_[m], l1_[m]));
    }
  }

  MetricTerms terms_;
  UnitRoots roots_;
  mutable std::vector<double> diff_; // |f_k - g_k|
  mutable std::vector<double> l2_, l1_, rlo_, rhi_;
};

namespace detail {

template <class Fn> void parallel_rows(std::size_t rows, std::size_t threads, Fn &&fn) {
  threads = std::max<std::size_t>(1, std::min(threads, rows));
  if (threads == 1) {
    for (std::size_t i = 0; i < rows; ++i) fn(i, 0);
    return;
  }
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      for (std::size_t i = t; i < rows; i += threads) fn(i, t);
    });
  }
  for (auto &th : pool) th.join();
}

} // namespace detail

/// Size of the maximal subset, built in input order, whose pairwise
/// certified distances are all >= delta.
inline std::size_t greedy_pack(const std::vector<TaylorPoly> &points, double delta, const MetricConfig &cfg) {
  if (!(delta > 0.0)) throw std::invalid_argument("greedy_pack: delta must be positive");
  const DistanceOracle oracle(cfg);
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < points.size(); ++i) {
    bool ok = true;
    for (std::size_t c : kept) {
      if (!oracle.separated(points[i], points[c], delta)) {
        ok = false;
        break;
      }
    }
    if (ok) kept.push_back(i);
  }
  return kept.size();
}

/// Greedy set cover: repeatedly take the point whose closed delta-ball
/// (certified: distance hi <= delta) holds the most uncovered points, ties
/// to the lowest index, until every point is covered.
inline std::size_t greedy_cover(const std::vector<TaylorPoly> &points, double delta, const MetricConfig &cfg,
                                std::size_t threads = 1) {
  if (!(delta > 0.0)) throw std::invalid_argument("greedy_cover: delta must be positive");
  const std::size_t n = points.size();
  if (n == 0) return 0;

  // Upper-triangle neighbour rows, one oracle per worker thread.
  std::vector<std::vector<std::size_t>> upper(n);
  std::vector<DistanceOracle> oracles(std::max<std::size_t>(1, std::min(threads, n)), DistanceOracle(cfg));
  detail::parallel_rows(n, threads, [&](std::size_t i, std::size_t t) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (oracles[t].within(points[i], points[j], delta)) upper[i].push_back(j);
    }
  });
  std::vector<std::vector<std::size_t>> ball(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (oracles[0].within(points[i], points[i], delta)) ball[i].push_back(i);
    for (std::size_t j : upper[i]) {
      ball[i].push_back(j);
      ball[j].push_back(i);
    }
  }

  std::vector<bool> covered(n, false);
  std::vector<std::size_t> gain(n);
  // Max-heap on (gain, -index); gains only decrease, so stale entries are
  // refreshed on pop.
  using Entry = std::pair<std::size_t, std::size_t>;
  auto cmp = [](const Entry &a, const Entry &b) { return a.first != b.first ? a.first < b.first : a.second > b.second; };
  std::priority_queue<Entry, std::vector<Entry>, decltype(cmp)> heap(cmp);
  for (std::size_t i = 0; i < n; ++i) {
    gain[i] = ball[i].size();
    heap.emplace(gain[i], i);
  }
  std::size_t remaining = n;
  std::size_t centers = 0;
  while (remaining > 0) {
    const auto [g, i] = heap.top();
    heap.pop();
    std::size_t actual = 0;
    for (std::size_t j : ball[i]) actual += covered[j] ? 0 : 1;
    if (actual != g) {
      heap.emplace(actual, i);
      continue;
    }
    if (actual == 0) throw std::logic_error("greedy_cover: uncovered point without a covering ball");
    for (std::size_t j : ball[i]) {
      if (!covered[j]) {
        covered[j] = true;
        --remaining;
      }
    }
    ++centers;
  }
  return centers;
}

struct EstimateReport {
  std::vector<double> deltas;
  std::vector<std::size_t> pack_counts;        // greedy_pack at delta
  std::vector<std::size_t> pack_counts_double; // greedy_pack at 2 delta
  std::vector<std::size_t> cover_counts;       // greedy_cover at delta

  /// pack(2 delta) <= cover(delta) <= pack(delta) at every ladder point.
  bool bracket_holds() const {
    for (std::size_t i = 0; i < deltas.size(); ++i) {
      if (pack_counts_double[i] > cover_counts[i] || cover_counts[i] > pack_counts[i]) return false;
    }
    return true;
  }

  /// Cover counts nonincreasing as delta grows.
  bool monotone() const {
    for (std::size_t i = 0; i < deltas.size(); ++i) {
      for (std::size_t j = 0; j < deltas.size(); ++j) {
        if (deltas[i] < deltas[j] && cover_counts[i] < cover_counts[j]) return false;
      }
    }
    return true;
  }
};

inline EstimateReport estimate(const std::vector<TaylorPoly> &points, const std::vector<double> &ladder,
                               const MetricConfig &cfg, std::size_t threads = 1) {
  EstimateReport rep;
  for (double delta : ladder) {
    rep.deltas.push_back(delta);
    rep.pack_counts.push_back(greedy_pack(points, delta, cfg));
    rep.pack_counts_double.push_back(greedy_pack(points, 2.0 * delta, cfg));
    rep.cover_counts.push_back(greedy_cover(points, delta, cfg, threads));
  }
  return rep;
}

namespace detail {

inline double ls_slope(const std::vector<double> &x, const std::vector<double> &y) {
  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("least squares: degenerate abscissae");
  return sxy / sxx;
}

// Slope of log log N against log log(1/delta) over points with N >= 2 and delta < 1.
inline double log_log_power(const std::vector<double> &deltas, const std::vector<std::size_t> &counts) {
  std::vector<double> x, y;
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    if (counts[i] < 2 || !(deltas[i] > 0.0 && deltas[i] < 1.0)) continue;
    const double ld = std::log(1.0 / deltas[i]);
    if (!(ld > 1e-300)) continue;
    x.push_back(std::log(ld));
    y.push_back(std::log(std::log(static_cast<double>(counts[i]))));
  }
  if (x.size() < 3) throw std::invalid_argument("exponent_fit: fewer than 3 usable ladder points");
  return ls_slope(x, y);
}

} // namespace detail

/// Fitted p in log N ~ log^p(1/delta), from the cover series and from the
/// pack series, next to the window [2, 2 + alpha] the asymptotics allow.
struct ExponentFit {
  double from_cover = 0.0;
  double from_pack = 0.0;
  double window_lo = 2.0;
  double window_hi = 0.0;
};

inline ExponentFit exponent_fit(const EstimateReport &report, double alpha) {
  ExponentFit fit;
  fit.from_cover = detail::log_log_power(report.deltas, report.cover_counts);
  fit.from_pack = detail::log_log_power(report.deltas, report.pack_counts);
  fit.window_hi = 2.0 + alpha;
  return fit;
}

/// Slope of log(cover count) against log(1/delta).
inline double box_dimension_fit(const EstimateReport &report) {
  std::vector<double> x, y;
  for (std::size_t i = 0; i < report.deltas.size(); ++i) {
    x.push_back(std::log(1.0 / report.deltas[i]));
    y.push_back(std::log(static_cast<double>(report.cover_counts[i])));
  }
  if (x.size() < 2) throw std::invalid_argument("box_dimension_fit: need at least 2 ladder points");
  return detail::ls_slope(x, y);
}

} // namespace schlicht
