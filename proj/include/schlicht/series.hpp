#pragma once

// Finite Taylor polynomials f(z) = a_1 z + ... + a_n z^n with certified
// bounds for their maximum modulus on a circle |z| = r.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace schlicht {

using Complex = std::complex<double>;

/// Default additive slack for certified floating-point inequalities.
inline constexpr double kCertSlack = 1e-12;

inline bool is_finite(Complex z) noexcept {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

/// Coefficients a_1..a_n of a polynomial with a_0 = 0. Immutable.
class TaylorPoly {
public:
  explicit TaylorPoly(std::vector<Complex> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) {
      throw std::invalid_argument("TaylorPoly: degree must be at least 1");
    }
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
      if (!is_finite(coeffs_[i])) {
        throw std::invalid_argument("TaylorPoly: coefficient a_" + std::to_string(i + 1) +
                                    " is not finite");
      }
    }
  }

  TaylorPoly(std::initializer_list<Complex> coeffs)
      : TaylorPoly(std::vector<Complex>(coeffs)) {}

  static TaylorPoly zero(std::size_t degree) {
    return TaylorPoly(std::vector<Complex>(std::max<std::size_t>(degree, 1)));
  }

  std::size_t degree() const noexcept { return coeffs_.size(); }

  /// a_k for k >= 1; zero beyond the stored degree and for k = 0.
  Complex coeff(std::size_t k) const noexcept {
    return (k == 0 || k > coeffs_.size()) ? Complex{} : coeffs_[k - 1];
  }

  std::span<const Complex> coeffs() const noexcept { return coeffs_; }

  bool operator==(const TaylorPoly &) const = default;

private:
  std::vector<Complex> coeffs_;
};

/// Certified enclosure lo <= value <= hi of a nonnegative quantity.
struct BoundInterval {
  double lo = 0.0;
  double hi = 0.0;

  BoundInterval() = default;
  BoundInterval(double lo_, double hi_) : lo(lo_), hi(hi_) {
    if (!std::isfinite(lo) || !std::isfinite(hi) || lo < 0.0 || lo > hi) {
      throw std::invalid_argument("BoundInterval: need finite 0 <= lo <= hi");
    }
  }

  bool contains(double x, double slack = 0.0) const noexcept {
    return x >= lo - slack && x <= hi + slack;
  }
  double width() const noexcept { return hi - lo; }

  bool operator==(const BoundInterval &) const = default;
};

/// p - q, zero-padding the shorter operand.
inline TaylorPoly difference(const TaylorPoly &p, const TaylorPoly &q) {
  const std::size_t n = std::max(p.degree(), q.degree());
  std::vector<Complex> out(n);
  for (std::size_t k = 1; k <= n; ++k) out[k - 1] = p.coeff(k) - q.coeff(k);
  return TaylorPoly(std::move(out));
}

namespace detail {

// Horner on finite inputs; plain products avoid the Annex G slow path.
inline Complex horner(std::span<const Complex> c, Complex z) noexcept {
  double re = 0.0, im = 0.0;
  const double zr = z.real(), zi = z.imag();
  for (std::size_t i = c.size(); i-- > 0;) {
    const double ar = re + c[i].real();
    const double ai = im + c[i].imag();
    re = ar * zr - ai * zi;
    im = ar * zi + ai * zr;
  }
  return {re, im};
}

} // namespace detail

/// Horner evaluation of sum a_k z^k.
inline Complex eval(const TaylorPoly &p, Complex z) {
  if (!is_finite(z)) throw std::invalid_argument("eval: z is not finite");
  if (std::abs(z) > 1.0) throw std::invalid_argument("eval: requires |z| <= 1");
  return detail::horner(p.coeffs(), z);
}

namespace detail {

inline void check_radius(double r, const char *who) {
  if (!(r > 0.0 && r < 1.0)) {
    throw std::invalid_argument(std::string(who) + ": radius must lie in (0,1)");
  }
}

/// sum k |a_k| r^(k-1), an upper bound for |p'| on |z| = r.
inline double derivative_bound(const TaylorPoly &p, double r) {
  double acc = 0.0;
  double rk = 1.0;
  const auto c = p.coeffs();
  for (std::size_t i = 0; i < c.size(); ++i) {
    acc += static_cast<double>(i + 1) * std::abs(c[i]) * rk;
    rk *= r;
  }
  return acc;
}

} // namespace detail

/// The M-th roots of unity exp(2 pi i m / M), m = 0..M-1.
class UnitRoots {
public:
  explicit UnitRoots(std::size_t M) : roots_(M) {
    if (M < 8) throw std::invalid_argument("UnitRoots: need at least 8 samples");
    for (std::size_t m = 0; m < M; ++m) {
      const double theta = 2.0 * std::numbers::pi * static_cast<double>(m) / static_cast<double>(M);
      roots_[m] = {std::cos(theta), std::sin(theta)};
    }
  }
  std::size_t size() const noexcept { return roots_.size(); }
  std::span<const Complex> roots() const noexcept { return roots_; }

private:
  std::vector<Complex> roots_;
};

/// The M sample points r * exp(2 pi i m / M), m = 0..M-1.
inline std::vector<Complex> circle_points(double r, std::size_t M) {
  const UnitRoots w(M);
  std::vector<Complex> pts;
  pts.reserve(M);
  for (const Complex &u : w.roots()) pts.emplace_back(r * u.real(), r * u.imag());
  return pts;
}

/// sum |a_k| r^k; never below the true maximum of |p| on |z| = r.
inline double coeff_sum_upper(const TaylorPoly &p, double r) {
  detail::check_radius(r, "coeff_sum_upper");
  double acc = 0.0;
  double rk = r;
  for (const Complex &a : p.coeffs()) {
    acc += std::abs(a) * rk;
    rk *= r;
  }
  return acc;
}

/// Largest |p| over the sample points r * w for w in the given roots.
inline double sampled_circle_max(const TaylorPoly &p, double r, const UnitRoots &w) {
  detail::check_radius(r, "sampled_circle_max");
  double best = 0.0;
  for (const Complex &u : w.roots()) {
    best = std::max(best, std::abs(detail::horner(p.coeffs(), {r * u.real(), r * u.imag()})));
  }
  return best;
}

inline double sampled_circle_max(const TaylorPoly &p, double r, std::size_t M) {
  return sampled_circle_max(p, r, UnitRoots(M));
}

/// Sample maximum plus the Lipschitz correction (pi r / M) * sum k|a_k| r^(k-1).
/// Every circle point lies within arc length pi r / M of a sample.
inline double lipschitz_circle_upper(const TaylorPoly &p, double r, std::size_t M, double sampled_max) {
  return sampled_max + (std::numbers::pi * r / static_cast<double>(M)) * detail::derivative_bound(p, r);
}

/// Certified enclosure of max_{|z|=r} |p(z)|.
///
/// lo is the sample maximum over M equispaced points. hi is the Lipschitz
/// corrected sample maximum, clamped by the l1 bound sum |a_k| r^k; both are
/// valid upper bounds, so the smaller one is kept.
inline BoundInterval max_modulus_interval(const TaylorPoly &p, double r, const UnitRoots &w) {
  const double lo = sampled_circle_max(p, r, w);
  const double hi = std::min(lipschitz_circle_upper(p, r, w.size(), lo), coeff_sum_upper(p, r));
  // The l1 bound can dip below lo only through rounding.
  return {lo, std::max(lo, hi)};
}

inline BoundInterval max_modulus_interval(const TaylorPoly &p, double r, std::size_t M) {
  return max_modulus_interval(p, r, UnitRoots(M));
}

/// Mean-square lower bound (sum |p_k - q_k|^2 r^(2k))^(1/2) for max |p - q| on |z| = r.
inline double l2_circle_lower(const TaylorPoly &p, const TaylorPoly &q, double r) {
  detail::check_radius(r, "l2_circle_lower");
  const std::size_t n = std::max(p.degree(), q.degree());
  double acc = 0.0;
  double r2k = 1.0;
  for (std::size_t k = 1; k <= n; ++k) {
    r2k *= r * r;
    acc += std::norm(p.coeff(k) - q.coeff(k)) * r2k;
  }
  return std::sqrt(acc);
}

} // namespace schlicht
