#pragma once

// Coefficient-body predicates for the classes bracketing the schlicht class,
// the Koebe function, and a grid search for injectivity violations.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "schlicht/series.hpp"

namespace schlicht {

enum class ClassId {
  class_a,             // z + sum a_k z^k with sum k|a_k| <= 1
  class_b_debranges,   // |a_k| <= k
  class_b_littlewood,  // |a_k| <= e k
  convex_sufficient,   // z + sum a_k z^k with sum k^2 |a_k| <= 1
};

inline std::string_view class_name(ClassId c) {
  switch (c) {
  case ClassId::class_a: return "A";
  case ClassId::class_b_debranges: return "B";
  case ClassId::class_b_littlewood: return "B-littlewood";
  case ClassId::convex_sufficient: return "convex";
  }
  return "?";
}

inline ClassId parse_class(std::string_view name) {
  if (name == "A") return ClassId::class_a;
  if (name == "B") return ClassId::class_b_debranges;
  if (name == "B-littlewood") return ClassId::class_b_littlewood;
  if (name == "convex") return ClassId::convex_sufficient;
  throw std::invalid_argument("unknown class name '" + std::string(name) + "'");
}

namespace detail {

// sum_{k>=2} k^power |a_k|
inline double weighted_tail_sum(const TaylorPoly &p, int power) {
  double acc = 0.0;
  for (std::size_t k = 2; k <= p.degree(); ++k) {
    acc += std::pow(static_cast<double>(k), power) * std::abs(p.coeff(k));
  }
  return acc;
}

inline bool coeffs_bounded_by(const TaylorPoly &p, double factor, double tol) {
  for (std::size_t k = 1; k <= p.degree(); ++k) {
    if (std::abs(p.coeff(k)) > factor * static_cast<double>(k) + tol) return false;
  }
  return true;
}

} // namespace detail

inline bool is_member(const TaylorPoly &p, ClassId c, double tol = 0.0) {
  if (!(tol >= 0.0)) throw std::invalid_argument("is_member: tol must be >= 0");
  switch (c) {
  case ClassId::class_a:
    return std::abs(p.coeff(1) - 1.0) <= tol && detail::weighted_tail_sum(p, 1) <= 1.0 + tol;
  case ClassId::convex_sufficient:
    return std::abs(p.coeff(1) - 1.0) <= tol && detail::weighted_tail_sum(p, 2) <= 1.0 + tol;
  case ClassId::class_b_debranges:
    return detail::coeffs_bounded_by(p, 1.0, tol);
  case ClassId::class_b_littlewood:
    return detail::coeffs_bounded_by(p, std::numbers::e, tol);
  }
  return false;
}

/// Sufficient condition for univalence: a_1 = 1 and sum_{k>=2} k|a_k| <= 1.
/// A false result says nothing; the Koebe function fails it and is univalent.
inline bool schlicht_sufficient(const TaylorPoly &p, double tol = 0.0) {
  return is_member(p, ClassId::class_a, tol);
}

/// Partial sum of z/(1-z)^2: a_k = k, k = 1..n.
inline TaylorPoly koebe(std::size_t n) {
  if (n == 0) throw std::invalid_argument("koebe: degree must be >= 1");
  std::vector<Complex> c(n);
  for (std::size_t k = 1; k <= n; ++k) c[k - 1] = static_cast<double>(k);
  return TaylorPoly(std::move(c));
}

inline constexpr double kFalsifierRadius = 0.995;

struct InjectivityWitness {
  Complex z;
  Complex w;
  std::size_t z_index = 0; // grid index of z, below w_index
  std::size_t w_index = 0;
  double gap = 0.0;        // |p(z) - p(w)|
};

/// G x G polar grid: radii 0.995 (i+1)/G and angles 2 pi m / G, flattened as
/// i * G + m. For even G the second half-turn is the exact negation of the
/// first, so antipodal pairs are bitwise antipodal.
inline std::vector<Complex> falsifier_grid(std::size_t G) {
  if (G < 4) throw std::invalid_argument("falsifier_grid: G must be >= 4");
  std::vector<Complex> unit(G);
  const std::size_t half = (G % 2 == 0) ? G / 2 : G;
  for (std::size_t m = 0; m < half; ++m) {
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(m) / static_cast<double>(G);
    unit[m] = {std::cos(theta), std::sin(theta)};
  }
  for (std::size_t m = half; m < G; ++m) unit[m] = -unit[m - half];

  std::vector<Complex> pts;
  pts.reserve(G * G);
  for (std::size_t i = 0; i < G; ++i) {
    const double r = kFalsifierRadius * static_cast<double>(i + 1) / static_cast<double>(G);
    for (std::size_t m = 0; m < G; ++m) pts.emplace_back(r * unit[m].real(), r * unit[m].imag());
  }
  return pts;
}

/// Searches the polar grid for distinct z, w with |p(z) - p(w)| <= tol and
/// returns the lexicographically first such index pair. An empty result
/// proves nothing.
inline std::optional<InjectivityWitness> injectivity_falsifier(const TaylorPoly &p, std::size_t G, double tol) {
  if (!(tol >= 0.0)) throw std::invalid_argument("injectivity_falsifier: tol must be >= 0");
  const std::vector<Complex> pts = falsifier_grid(G);
  std::vector<Complex> vals(pts.size());
  double scale = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    vals[i] = eval(p, pts[i]);
    scale = std::max({scale, std::abs(vals[i].real()), std::abs(vals[i].imag())});
  }

  // Hash image values into square cells of side h >= tol: any pair within
  // tol lands in the same or an adjacent cell.
  const double h = std::max({tol, scale * 0x1p-40, 0x1p-1000});
  auto cell_of = [h](Complex v) {
    return std::pair<std::int64_t, std::int64_t>{static_cast<std::int64_t>(std::floor(v.real() / h)),
                                                 static_cast<std::int64_t>(std::floor(v.imag() / h))};
  };
  struct CellHash {
    std::size_t operator()(const std::pair<std::int64_t, std::int64_t> &c) const noexcept {
      return std::hash<std::int64_t>{}(c.first * 0x9E3779B97F4A7C15LL ^ c.second);
    }
  };
  std::unordered_map<std::pair<std::int64_t, std::int64_t>, std::vector<std::size_t>, CellHash> cells;
  for (std::size_t i = 0; i < vals.size(); ++i) cells[cell_of(vals[i])].push_back(i);

  std::optional<InjectivityWitness> best;
  for (std::size_t i = 0; i < vals.size(); ++i) {
    if (best && best->z_index < i) break;
    const auto [cx, cy] = cell_of(vals[i]);
    for (std::int64_t dx = -1; dx <= 1; ++dx) {
      for (std::int64_t dy = -1; dy <= 1; ++dy) {
        const auto it = cells.find({cx + dx, cy + dy});
        if (it == cells.end()) continue;
        for (std::size_t j : it->second) {
          if (j <= i) continue;
          const double gap = std::abs(vals[i] - vals[j]);
          if (gap > tol) continue;
          if (!best || j < best->w_index) best = InjectivityWitness{pts[i], pts[j], i, j, gap};
        }
      }
    }
  }
  return best;
}

} // namespace schlicht
