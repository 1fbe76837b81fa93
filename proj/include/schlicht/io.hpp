#pragma once

// File formats: coefficient and config JSON, certificate JSON, curve and
// estimate CSV. Numbers are written in the shortest form that parses back to
// the same binary64 value.

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <system_error>
#include <unistd.h>
#include <vector>

#include <json.hpp>

#include "schlicht/constructions.hpp"
#include "schlicht/estimator.hpp"
#include "schlicht/metric.hpp"
#include "schlicht/series.hpp"

namespace schlicht {

inline constexpr const char *kToolVersion = "0.1.0";

using json = nlohmann::ordered_json;

/// Shortest round-trip decimal form of x.
inline std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  if (res.ec != std::errc{}) throw std::runtime_error("format_double: conversion failed");
  return std::string(buf, res.ptr);
}

inline std::string read_text_file(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Writes through a temporary file in the same directory, then renames.
inline void write_file_atomic(const std::filesystem::path &path, const std::string &contents) {
  auto tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::invalid_argument("cannot write '" + path.string() + "'");
    out << contents;
    out.flush();
    if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw std::runtime_error("cannot rename into '" + path.string() + "': " + ec.message());
  }
}

inline json to_json(const MetricConfig &cfg) {
  return json{{"lambda", cfg.lambda},
              {"alpha", cfg.alpha},
              {"metric_terms", cfg.metric_terms},
              {"circle_samples", cfg.circle_samples}};
}

/// Overlays the keys present in j onto base. Unknown keys and out-of-range
/// values are rejected.
inline MetricConfig config_from_json(const json &j, MetricConfig base = {}) {
  if (!j.is_object()) throw std::invalid_argument("config: expected a JSON object");
  for (const auto &[key, value] : j.items()) {
    if (key == "lambda" || key == "alpha") {
      if (!value.is_number()) throw std::invalid_argument("config: '" + key + "' must be a number");
      (key == "lambda" ? base.lambda : base.alpha) = value.get<double>();
    } else if (key == "metric_terms" || key == "circle_samples") {
      if (!value.is_number_unsigned()) {
        throw std::invalid_argument("config: '" + key + "' must be a positive integer");
      }
      (key == "metric_terms" ? base.metric_terms : base.circle_samples) = value.get<std::size_t>();
    } else {
      throw std::invalid_argument("config: unknown key '" + key + "'");
    }
  }
  base.validate();
  return base;
}

inline MetricConfig read_config_file(const std::filesystem::path &path, MetricConfig base = {}) {
  json j;
  try {
    j = json::parse(read_text_file(path));
  } catch (const json::parse_error &e) {
    throw std::invalid_argument("config '" + path.string() + "': " + e.what());
  }
  return config_from_json(j, base);
}

inline json coeffs_to_json(const TaylorPoly &p) {
  json arr = json::array();
  for (const Complex &c : p.coeffs()) arr.push_back(json::array({c.real(), c.imag()}));
  return arr;
}

/// {"coeffs": [[re, im], ...]}, a_1 first.
inline TaylorPoly poly_from_json(const json &j) {
  if (!j.is_object() || !j.contains("coeffs")) throw std::invalid_argument("coefficients: expected {\"coeffs\": [...]}");
  const json &arr = j.at("coeffs");
  if (!arr.is_array() || arr.empty()) throw std::invalid_argument("coefficients: 'coeffs' must be a nonempty array");
  std::vector<Complex> c;
  for (const json &entry : arr) {
    if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number() || !entry[1].is_number()) {
      throw std::invalid_argument("coefficients: each entry must be [re, im] with numeric parts");
    }
    c.emplace_back(entry[0].get<double>(), entry[1].get<double>());
  }
  return TaylorPoly(std::move(c));
}

inline TaylorPoly read_poly_file(const std::filesystem::path &path) {
  try {
    return poly_from_json(json::parse(read_text_file(path)));
  } catch (const json::parse_error &e) {
    throw std::invalid_argument("coefficients '" + path.string() + "': " + e.what());
  }
}

inline std::string poly_file_text(const TaylorPoly &p) { return json{{"coeffs", coeffs_to_json(p)}}.dump(2) + "\n"; }

inline json to_json(const PackingCertificate &c) {
  json j{{"n", c.n}, {"K", c.K}, {"family", to_string(c.family)}};
  j["count"] = c.count ? json(*c.count) : json(nullptr);
  j["log_count"] = c.log_count;
  j["separation_lo"] = c.separation_lo;
  j["delta"] = c.delta;
  j["config"] = to_json(c.config);
  return j;
}

inline json to_json(const NetCertificate &c) {
  return json{{"n", c.n},
              {"K", c.K},
              {"tau", c.tau},
              {"C", c.C},
              {"log_count", c.log_count},
              {"radius_hi", c.radius_hi},
              {"internal", c.internal},
              {"internal_radius_hi", c.internal_radius_hi()},
              {"config", to_json(c.config)}};
}

inline json to_json(const Rho &r) {
  return json{{"rho", r.rho},
              {"denominator", r.denominator},
              {"n_verified", r.n_verified},
              {"tail_certified", r.tail_certified},
              {"binding_n", r.binding_n}};
}

/// Header n,delta_lower,log_count_lower,delta_upper,log_count_upper; lower
/// columns stay empty for n = 1 where no packing exists.
inline std::string curves_csv(const std::vector<CurvePoint> &lower, const std::vector<CurvePoint> &upper,
                              std::size_t n_min, std::size_t n_max) {
  std::string out = "n,delta_lower,log_count_lower,delta_upper,log_count_upper\n";
  for (std::size_t n = n_min; n <= n_max; ++n) {
    out += std::to_string(n);
    auto emit = [&](const std::vector<CurvePoint> &pts) {
      for (const CurvePoint &p : pts) {
        if (p.n == n) {
          out += "," + format_double(p.delta) + "," + format_double(p.log_count);
          return;
        }
      }
      out += ",,";
    };
    emit(lower);
    emit(upper);
    out += "\n";
  }
  return out;
}

inline std::string estimate_csv(const EstimateReport &rep) {
  std::string out = "delta,pack_count,cover_count\n";
  for (std::size_t i = 0; i < rep.deltas.size(); ++i) {
    out += format_double(rep.deltas[i]) + "," + std::to_string(rep.pack_counts[i]) + "," +
           std::to_string(rep.cover_counts[i]) + "\n";
  }
  return out;
}

} // namespace schlicht
