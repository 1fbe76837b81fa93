#pragma once

// Explicit packings of the class A, epsilon-nets over the class B, and the
// covering-number bound curves they produce.
//
// Lower side: the members z + sum_{k=2}^n t_k/(k n K) z^k, t_k in 1..K, are
// pairwise separated by min_k (lambda_k r_k^k / 2) / (n^2 K) through the
// coefficient lower bound, so N_A(separation / 3) >= K^(n-1). Choosing
// K = rho^-n turns this into N_A(rho^(2n)) >= rho^(-n(n-1)).
//
// Upper side: truncate to degree n, then round each coefficient to the grid
// k (s + i t) / K with s, t in -K..K. With tau the truncation tail bound and
// K = ceil(C n^2 / tau) every f in B is within C n^2 / K + tau <= 2 tau of
// one of (2K+1)^(2n) grid polynomials.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "schlicht/function_classes.hpp"
#include "schlicht/metric.hpp"
#include "schlicht/series.hpp"

namespace schlicht {

/// Which sufficient condition the packing family is scaled for. The convex
/// variant uses weights 1/(k^2 n K) so members satisfy sum k^2 |a_k| < 1.
enum class PackingFamily { schlicht, convex };

inline const char *to_string(PackingFamily f) { return f == PackingFamily::schlicht ? "A" : "convex"; }

namespace detail {

inline double packing_scale(std::size_t k, std::size_t n, std::size_t K, PackingFamily family) {
  const double kk = static_cast<double>(k);
  return 1.0 / ((family == PackingFamily::schlicht ? kk : kk * kk) * static_cast<double>(n) * static_cast<double>(K));
}

inline void check_packing_params(std::size_t n, std::size_t K) {
  if (n < 2) throw std::invalid_argument("packing: n must be >= 2");
  if (K < 1) throw std::invalid_argument("packing: K must be >= 1");
}

} // namespace detail

/// Member indexed by t = (t_2, ..., t_n), each in 1..K.
inline TaylorPoly packing_member(std::size_t n, std::size_t K, const std::vector<std::size_t> &t,
                                 PackingFamily family = PackingFamily::schlicht) {
  detail::check_packing_params(n, K);
  if (t.size() != n - 1) throw std::invalid_argument("packing_member: index vector must have length n-1");
  std::vector<Complex> c(n);
  c[0] = 1.0;
  for (std::size_t k = 2; k <= n; ++k) {
    const std::size_t tk = t[k - 2];
    if (tk < 1 || tk > K) throw std::invalid_argument("packing_member: t_k out of range 1..K");
    c[k - 1] = static_cast<double>(tk) * detail::packing_scale(k, n, K, family);
  }
  return TaylorPoly(std::move(c));
}

/// Mixed-radix decoding of a flat member index in [0, K^(n-1)); t_2 varies fastest.
inline std::vector<std::size_t> packing_index(std::size_t n, std::size_t K, std::uint64_t flat) {
  detail::check_packing_params(n, K);
  std::vector<std::size_t> t(n - 1);
  for (auto &tk : t) {
    tk = static_cast<std::size_t>(flat % K) + 1;
    flat /= K;
  }
  if (flat != 0) throw std::invalid_argument("packing_index: index out of range");
  return t;
}

/// K^(n-1) when it fits in 64 bits.
inline std::optional<std::uint64_t> packing_count(std::size_t n, std::size_t K) {
  detail::check_packing_params(n, K);
  std::uint64_t count = 1;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (count > std::numeric_limits<std::uint64_t>::max() / K) return std::nullopt;
    count *= K;
  }
  return count;
}

struct PackingCertificate {
  std::size_t n = 0;
  std::size_t K = 0;
  PackingFamily family = PackingFamily::schlicht;
  std::optional<std::uint64_t> count; // K^(n-1); empty on overflow
  double log_count = 0.0;             // (n-1) log K
  double separation_lo = 0.0;         // pairwise metric distance lower bound
  double delta = 0.0;                 // separation_lo / 3
  MetricConfig config;
};

inline PackingCertificate packing_certificate(std::size_t n, std::size_t K, const MetricConfig &cfg,
                                              PackingFamily family = PackingFamily::schlicht) {
  detail::check_packing_params(n, K);
  cfg.validate();
  // Distinct members differ in some a_k by at least 1/(k n K) (resp.
  // 1/(k^2 n K)) >= 1/(n^2 K) (resp. 1/(n^3 K)).
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t k = 2; k <= n; ++k) {
    m = std::min(m, 0.5 * cfg.weight(k) * std::pow(cfg.radius(k), static_cast<double>(k)));
  }
  const double nn = static_cast<double>(n);
  const double spread = family == PackingFamily::schlicht ? nn * nn : nn * nn * nn;
  const double sep = m / (spread * static_cast<double>(K));
  if (!(sep > 0.0)) throw std::runtime_error("packing_certificate: separation underflowed to zero");
  PackingCertificate cert;
  cert.n = n;
  cert.K = K;
  cert.family = family;
  cert.count = packing_count(n, K);
  cert.log_count = static_cast<double>(n - 1) * std::log(static_cast<double>(K));
  cert.separation_lo = sep;
  cert.delta = sep / 3.0;
  cert.config = cfg;
  return cert;
}

struct Rho {
  double rho = 0.0;
  std::uint64_t denominator = 0; // 1 / rho
  std::size_t n_verified = 0;
  bool tail_certified = false;
  std::size_t binding_n = 0;     // n with the smallest slack at the chosen rho
};

inline constexpr std::uint64_t kMaxRhoDenominator = 1'000'000;
inline constexpr std::size_t kDefaultRhoHorizon = 200;

/// Largest rho = 1/q < lambda (q <= 10^6) with
///   min_{2<=k<=n} (lambda_k r_k^k / 6) / n^2 >= rho^n   for 2 <= n <= n_max.
///
/// Beyond n_max: with S(n) the slack ratio of the inequality,
/// S(n+1)/S(n) >= (lambda r_{n+1} / rho) (n/(n+1))^2, which increases in n.
/// If that bound is >= 1 at n_max, S never decreases afterwards and the
/// inequality holds for every n.
inline Rho compute_rho(const MetricConfig &cfg, std::size_t n_max) {
  cfg.validate();
  if (n_max < 2) throw std::invalid_argument("compute_rho: n_max must be >= 2");

  // lhs[n] = log(min_{k<=n} lambda_k r_k^k / (6 n^2)), n = 2..n_max
  std::vector<double> lhs(n_max + 1, 0.0);
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t n = 2; n <= n_max; ++n) {
    m = std::min(m, cfg.weight(n) * std::pow(cfg.radius(n), static_cast<double>(n)));
    const double nn = static_cast<double>(n);
    lhs[n] = std::log(m / 6.0) - 2.0 * std::log(nn);
  }
  auto feasible = [&](std::uint64_t q) {
    const double lq = std::log(static_cast<double>(q));
    for (std::size_t n = 2; n <= n_max; ++n) {
      if (lhs[n] < -static_cast<double>(n) * lq) return false;
    }
    return true;
  };

  // rho < lambda means q > 1/lambda.
  std::uint64_t q = static_cast<std::uint64_t>(std::floor(1.0 / cfg.lambda)) + 1;
  while (!(1.0 / static_cast<double>(q) < cfg.lambda)) ++q;
  double need = 0.0;
  for (std::size_t n = 2; n <= n_max; ++n) need = std::max(need, -lhs[n] / static_cast<double>(n));
  if (need > std::log(static_cast<double>(kMaxRhoDenominator))) {
    throw std::runtime_error("compute_rho: no admissible rho with denominator <= 10^6");
  }
  const auto guess = static_cast<std::uint64_t>(std::floor(std::exp(need)));
  q = std::max(q, guess > 2 ? guess - 1 : q);
  while (q <= kMaxRhoDenominator && !feasible(q)) ++q;
  if (q > kMaxRhoDenominator) throw std::runtime_error("compute_rho: no admissible rho with denominator <= 10^6");

  Rho out;
  out.denominator = q;
  out.rho = 1.0 / static_cast<double>(q);
  out.n_verified = n_max;
  const double lq = std::log(static_cast<double>(q));
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t n = 2; n <= n_max; ++n) {
    const double slack = lhs[n] + static_cast<double>(n) * lq;
    if (slack < worst) {
      worst = slack;
      out.binding_n = n;
    }
  }
  const double nm = static_cast<double>(n_max);
  const double ratio_bound = cfg.lambda * cfg.radius(n_max + 1) * static_cast<double>(q) * (nm / (nm + 1.0)) *
                             (nm / (nm + 1.0));
  out.tail_certified = ratio_bound >= 1.0;
  return out;
}

struct CurvePoint {
  std::size_t n = 0;
  double delta = 0.0;
  double log_count = 0.0;
};

/// Points (rho^(2n), n(n-1) log(1/rho)) witnessing N_A(delta) >= count.
inline std::vector<CurvePoint> lower_bound_curve(const Rho &rho, std::size_t n_min, std::size_t n_max) {
  if (n_min < 2 || n_min > n_max) throw std::invalid_argument("lower_bound_curve: need 2 <= n_min <= n_max");
  const double log_q = std::log(static_cast<double>(rho.denominator));
  std::vector<CurvePoint> pts;
  for (std::size_t n = n_min; n <= n_max; ++n) {
    const double nn = static_cast<double>(n);
    pts.push_back({n, std::pow(rho.rho, 2.0 * nn), nn * (nn - 1.0) * log_q});
  }
  return pts;
}

inline std::vector<CurvePoint> lower_bound_curve(const MetricConfig &cfg, std::size_t n_min, std::size_t n_max) {
  return lower_bound_curve(compute_rho(cfg, std::max<std::size_t>(n_max, kDefaultRhoHorizon)), n_min, n_max);
}

/// Partial sum of degree min(n, deg f).
inline TaylorPoly truncate(const TaylorPoly &f, std::size_t n) {
  if (n < 1) throw std::invalid_argument("truncate: n must be >= 1");
  const auto c = f.coeffs();
  return TaylorPoly(std::vector<Complex>(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(std::min(n, c.size()))));
}

struct NetQuantization {
  TaylorPoly center;
  std::vector<double> per_coeff_err;       // |p_k - q_k|
  std::vector<std::int64_t> s, t;          // grid indices in -K..K
};

/// Rounds each coefficient to the grid k (s + i t) / K. Per axis the error
/// is at most k / (2K), so |p_k - q_k| <= k / (sqrt 2 K) <= n / K.
inline NetQuantization quantize_to_net(const TaylorPoly &p, std::size_t n, std::size_t K) {
  if (K < 1) throw std::invalid_argument("quantize_to_net: K must be >= 1");
  if (p.degree() > n) throw std::invalid_argument("quantize_to_net: degree exceeds n");
  if (!is_member(p, ClassId::class_b_debranges, kCertSlack)) {
    throw std::invalid_argument("quantize_to_net: input is not in class B");
  }
  const auto KK = static_cast<std::int64_t>(K);
  const double Kd = static_cast<double>(K);
  std::vector<Complex> q(p.degree());
  NetQuantization out{TaylorPoly::zero(1), {}, {}, {}};
  for (std::size_t k = 1; k <= p.degree(); ++k) {
    const double kd = static_cast<double>(k);
    const Complex a = p.coeff(k);
    const auto s = std::clamp(static_cast<std::int64_t>(std::llround(Kd * a.real() / kd)), -KK, KK);
    const auto t = std::clamp(static_cast<std::int64_t>(std::llround(Kd * a.imag() / kd)), -KK, KK);
    q[k - 1] = {kd * static_cast<double>(s) / Kd, kd * static_cast<double>(t) / Kd};
    out.s.push_back(s);
    out.t.push_back(t);
    out.per_coeff_err.push_back(std::abs(a - q[k - 1]));
  }
  out.center = TaylorPoly(std::move(q));
  return out;
}

struct NetCertificate {
  std::size_t n = 0;
  double K = 0.0;            // integer valued; may exceed 2^63
  double tau = 0.0;          // truncation tail bound (exact mode)
  double C = 0.0;            // lambda / (1 - lambda) = sum_j lambda_j
  double log_count = 0.0;    // 2n log(2K + 1)
  double radius_hi = 0.0;    // external covering radius C n^2 / K + tau
  bool internal = false;     // grid centers may leave B (|q_k| <= sqrt 2 k)
  MetricConfig config;

  /// Radius at which the same count bounds covers with centers inside B.
  double internal_radius_hi() const noexcept { return 2.0 * radius_hi; }
};

inline NetCertificate net_upper_point(std::size_t n, const MetricConfig &cfg) {
  if (n < 1) throw std::invalid_argument("net_upper_point: n must be >= 1");
  const double tau = truncation_tail_bound(n, cfg, TailMode::exact);
  const double C = cfg.lambda / (1.0 - cfg.lambda);
  const double nn = static_cast<double>(n);
  const double mass = C * nn * nn;
  double K = std::ceil(mass / tau);
  if (!(tau > 0.0) || !std::isfinite(K)) {
    throw std::runtime_error("net_upper_point: tail bound underflows at n = " + std::to_string(n));
  }
  while (mass / K > tau) K = K < 0x1p53 ? K + 1.0 : std::nextafter(K, std::numeric_limits<double>::infinity());
  NetCertificate cert;
  cert.n = n;
  cert.K = std::max(K, 1.0);
  cert.tau = tau;
  cert.C = C;
  cert.log_count = 2.0 * nn * std::log(2.0 * cert.K + 1.0);
  cert.radius_hi = mass / cert.K + tau;
  cert.config = cfg;
  return cert;
}

/// Points (radius_hi, log_count) witnessing N_B(delta) <= count (external centers).
inline std::vector<CurvePoint> upper_bound_curve(const MetricConfig &cfg, std::size_t n_min, std::size_t n_max) {
  if (n_min < 1 || n_min > n_max) throw std::invalid_argument("upper_bound_curve: need 1 <= n_min <= n_max");
  std::vector<CurvePoint> pts;
  for (std::size_t n = n_min; n <= n_max; ++n) {
    const NetCertificate c = net_upper_point(n, cfg);
    pts.push_back({n, c.radius_hi, c.log_count});
  }
  return pts;
}

/// sum_{j<=J} lambda_j r_j^(n+1): a lower bound for d(koebe, p) over every
/// polynomial p of degree <= n, from max |f - p|^2 >= sum_{k>n} k^2 r^(2k).
inline double koebe_sharpness_lower(std::size_t n, const MetricConfig &cfg) {
  if (n < 1) throw std::invalid_argument("koebe_sharpness_lower: n must be >= 1");
  cfg.validate();
  double acc = 0.0;
  for (std::size_t j = 1; j <= cfg.metric_terms; ++j) {
    acc += cfg.weight(j) * std::pow(cfg.radius(j), static_cast<double>(n + 1));
  }
  return acc;
}

/// Both sides of d(koebe, p_n) for the degree-n truncation p_n, with the
/// Koebe function replaced by koebe(proxy_degree) and the proxy error
/// d(koebe, koebe(m)) <= truncation_tail_bound(m) carried explicitly.
struct KoebeSandwich {
  std::size_t n = 0;
  std::size_t proxy_degree = 0;
  double lower = 0.0;        // koebe_sharpness_lower(n)
  BoundInterval proxy;       // metric_d(koebe(m), truncate(koebe(m), n))
  double proxy_error = 0.0;  // truncation_tail_bound(m, exact)
  double upper = 0.0;        // truncation_tail_bound(n, exact)

  bool holds(double slack = 1e-9) const noexcept {
    return lower <= proxy.hi + proxy_error + slack && proxy.lo - proxy_error <= upper + slack;
  }
};

inline KoebeSandwich koebe_sandwich(std::size_t n, const MetricConfig &cfg, std::size_t proxy_factor = 4) {
  KoebeSandwich s;
  s.n = n;
  s.proxy_degree = proxy_factor * n;
  const TaylorPoly proxy = koebe(s.proxy_degree);
  s.lower = koebe_sharpness_lower(n, cfg);
  s.proxy = metric_d(proxy, truncate(proxy, n), cfg);
  s.proxy_error = truncation_tail_bound(s.proxy_degree, cfg, TailMode::exact);
  s.upper = truncation_tail_bound(n, cfg, TailMode::exact);
  return s;
}

} // namespace schlicht
