#pragma once

// The Frechet metric d(f,g) = sum_j lambda_j min{1, max_{|z|<=r_j} |f-g|}
// with lambda_j = lambda^j and r_j = 1 - (j+1)^(-alpha), evaluated as a
// certified interval from the first J terms plus the geometric tail.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "schlicht/series.hpp"

namespace schlicht {

struct MetricConfig {
  double lambda = 0.5;
  double alpha = 1.0;
  std::size_t metric_terms = 60;    // J
  std::size_t circle_samples = 4096; // M

  void validate() const {
    if (!(lambda > 0.0 && lambda < 1.0)) throw std::invalid_argument("MetricConfig: lambda must lie in (0,1)");
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw std::invalid_argument("MetricConfig: alpha must be positive");
    if (metric_terms < 1) throw std::invalid_argument("MetricConfig: metric_terms must be >= 1");
    if (circle_samples < 8) throw std::invalid_argument("MetricConfig: circle_samples must be >= 8");
  }

  /// lambda_j = lambda^j.
  double weight(std::size_t j) const { return std::pow(lambda, static_cast<double>(j)); }

  /// r_j = 1 - (j+1)^(-alpha), strictly increasing in (0,1).
  double radius(std::size_t j) const { return 1.0 - std::pow(static_cast<double>(j + 1), -alpha); }

  bool operator==(const MetricConfig &) const = default;
};

/// sum_{j>J} lambda^j = lambda^(J+1) / (1 - lambda); bounds the omitted terms.
inline double metric_tail_bound(const MetricConfig &cfg) {
  cfg.validate();
  return std::pow(cfg.lambda, static_cast<double>(cfg.metric_terms + 1)) / (1.0 - cfg.lambda);
}

/// lambda_j and r_j for j = 1..J, computed once per configuration.
class MetricTerms {
public:
  explicit MetricTerms(const MetricConfig &cfg) : cfg_(cfg), tail_(metric_tail_bound(cfg)) {
    weights_.reserve(cfg.metric_terms);
    radii_.reserve(cfg.metric_terms);
    for (std::size_t j = 1; j <= cfg.metric_terms; ++j) {
      weights_.push_back(cfg.weight(j));
      radii_.push_back(cfg.radius(j));
    }
  }

  const MetricConfig &config() const noexcept { return cfg_; }
  std::size_t size() const noexcept { return weights_.size(); }
  /// Zero-based: index i holds term j = i + 1.
  double weight(std::size_t i) const noexcept { return weights_[i]; }
  double radius(std::size_t i) const noexcept { return radii_[i]; }
  double tail() const noexcept { return tail_; }

private:
  MetricConfig cfg_;
  double tail_;
  std::vector<double> weights_;
  std::vector<double> radii_;
};

/// Certified enclosure of d(f, g): per term the sampled max-modulus interval
/// of f - g, capped at 1, plus the tail bound on hi.
inline BoundInterval metric_d(const TaylorPoly &f, const TaylorPoly &g, const MetricTerms &terms,
                              const UnitRoots &roots) {
  if (f == g) return {0.0, terms.tail()};
  const TaylorPoly diff = difference(f, g);
  double lo = 0.0;
  double hi = 0.0;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const BoundInterval term = max_modulus_interval(diff, terms.radius(i), roots);
    lo += terms.weight(i) * std::min(1.0, term.lo);
    hi += terms.weight(i) * std::min(1.0, term.hi);
  }
  return {lo, hi + terms.tail()};
}

inline BoundInterval metric_d(const TaylorPoly &f, const TaylorPoly &g, const MetricConfig &cfg) {
  const MetricTerms terms(cfg);
  if (f == g) return {0.0, terms.tail()};
  return metric_d(f, g, terms, UnitRoots(cfg.circle_samples));
}

namespace detail {

// Analytic per-term bracket [l2, l1] for max |diff| on |z| = r.
inline std::pair<double, double> analytic_term(const TaylorPoly &diff, double r) {
  double l2 = 0.0;
  double l1 = 0.0;
  double rk = 1.0;
  for (const Complex &c : diff.coeffs()) {
    rk *= r;
    const double a = std::abs(c);
    l2 += a * a * rk * rk;
    l1 += a * rk;
  }
  l2 = std::sqrt(l2);
  return {l2, std::max(l2, l1)};
}

} // namespace detail

/// Cheap enclosure of d(f, g) without sampling: per term the mean-square
/// lower bound and the l1 upper bound.
inline BoundInterval metric_d_analytic(const TaylorPoly &f, const TaylorPoly &g, const MetricTerms &terms) {
  if (f == g) return {0.0, terms.tail()};
  const TaylorPoly diff = difference(f, g);
  double lo = 0.0;
  double hi = 0.0;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const auto [l2, l1] = detail::analytic_term(diff, terms.radius(i));
    lo += terms.weight(i) * std::min(1.0, l2);
    hi += terms.weight(i) * std::min(1.0, l1);
  }
  return {lo, hi + terms.tail()};
}

/// Sampled enclosure tightened per term by the analytic bracket. Contains
/// the true metric and is contained in both metric_d and metric_d_analytic.
inline BoundInterval metric_d_refined(const TaylorPoly &f, const TaylorPoly &g, const MetricTerms &terms,
                                      const UnitRoots &roots) {
  if (f == g) return {0.0, terms.tail()};
  const TaylorPoly diff = difference(f, g);
  double lo = 0.0;
  double hi = 0.0;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const double r = terms.radius(i);
    const BoundInterval term = max_modulus_interval(diff, r, roots);
    const auto [l2, l1] = detail::analytic_term(diff, r);
    // Clamped into the analytic bracket so lazy decisions agree exactly.
    lo += terms.weight(i) * std::min(1.0, std::clamp(term.lo, l2, l1));
    hi += terms.weight(i) * std::min(1.0, std::clamp(term.hi, l2, l1));
  }
  return {lo, hi + terms.tail()};
}

/// sum_{k>=2} (lambda_k r_k^k / 2) |a_k - b_k|, a lower bound for d(f,g)
/// when both functions lie in the class A (leading coefficient 1).
inline double coeff_distance_lower(const TaylorPoly &f, const TaylorPoly &g, const MetricConfig &cfg) {
  cfg.validate();
  if (std::abs(f.coeff(1) - 1.0) > kCertSlack || std::abs(g.coeff(1) - 1.0) > kCertSlack) {
    throw std::invalid_argument("coeff_distance_lower: leading coefficients must equal 1");
  }
  const std::size_t n = std::max(f.degree(), g.degree());
  double acc = 0.0;
  for (std::size_t k = 2; k <= n; ++k) {
    const double rk = std::pow(cfg.radius(k), static_cast<double>(k));
    acc += 0.5 * cfg.weight(k) * rk * std::abs(f.coeff(k) - g.coeff(k));
  }
  return acc;
}

enum class TailMode { paper, exact };

/// Bound for sum_{k>=n+1} k r^k.
///   paper: (n+2) r^(n+1) / (1-r)^2
///   exact: r^(n+1) (n+1 - n r) / (1-r)^2
inline double power_tail(std::size_t n, double r, TailMode mode) {
  const double nn = static_cast<double>(n);
  const double head = std::pow(r, nn + 1.0) / ((1.0 - r) * (1.0 - r));
  return mode == TailMode::paper ? (nn + 2.0) * head : head * (nn + 1.0 - nn * r);
}

/// Upper bound on d(f, truncate(f, n)) valid for every f with |a_k| <= k.
inline double truncation_tail_bound(std::size_t n, const MetricConfig &cfg, TailMode mode) {
  if (n < 1) throw std::invalid_argument("truncation_tail_bound: n must be >= 1");
  const double tail = metric_tail_bound(cfg);
  double acc = 0.0;
  for (std::size_t j = 1; j <= cfg.metric_terms; ++j) {
    acc += cfg.weight(j) * std::min(1.0, power_tail(n, cfg.radius(j), mode));
  }
  return acc + tail;
}

inline const char *to_string(TailMode mode) { return mode == TailMode::paper ? "paper" : "exact"; }

} // namespace schlicht
