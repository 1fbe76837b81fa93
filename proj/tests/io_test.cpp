#include <cstdlib>
#include <filesystem>
#include <limits>

#include <gtest/gtest.h>

#include "schlicht/io.hpp"

using namespace schlicht;

namespace {

std::filesystem::path temp_path(const std::string &name) {
  return std::filesystem::temp_directory_path() / ("schlicht_io_" + std::to_string(::getpid()) + "_" + name);
}

} // namespace

TEST(FormatDouble, ShortestRoundTrip) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(0.5), "0.5");
  EXPECT_EQ(format_double(2.0), "2");
  for (double x : {1.0 / 3.0, 1e-300, 6.02214076e23, std::pow(15.0, -4.0), -0.7362263782764414}) {
    EXPECT_EQ(std::strtod(format_double(x).c_str(), nullptr), x);
  }
}

TEST(Config, DefaultsAndOverrides) {
  EXPECT_EQ(config_from_json(json::object()), MetricConfig{});
  const MetricConfig cfg = config_from_json(json::parse(R"({"lambda": 0.25, "metric_terms": 12})"));
  EXPECT_DOUBLE_EQ(cfg.lambda, 0.25);
  EXPECT_EQ(cfg.metric_terms, 12u);
  EXPECT_DOUBLE_EQ(cfg.alpha, 1.0);
  EXPECT_EQ(config_from_json(to_json(cfg)), cfg);
}

TEST(Config, Rejections) {
  EXPECT_THROW(config_from_json(json::parse(R"({"lambda": 1.5})")), std::invalid_argument);
  EXPECT_THROW(config_from_json(json::parse(R"({"alpha": -1})")), std::invalid_argument);
  EXPECT_THROW(config_from_json(json::parse(R"({"circle_samples": 4})")), std::invalid_argument);
  EXPECT_THROW(config_from_json(json::parse(R"({"metric_terms": 2.5})")), std::invalid_argument);
  EXPECT_THROW(config_from_json(json::parse(R"({"metric_terms": -3})")), std::invalid_argument);
  EXPECT_THROW(config_from_json(json::parse(R"({"lamda": 0.5})")), std::invalid_argument);
  EXPECT_THROW(config_from_json(json::parse(R"([1, 2])")), std::invalid_argument);
}

TEST(Config, FileRoundTrip) {
  const auto path = temp_path("cfg.json");
  write_file_atomic(path, R"({"lambda": 0.5, "alpha": 1.0, "metric_terms": 60, "circle_samples": 4096})");
  EXPECT_EQ(read_config_file(path), MetricConfig{});
  write_file_atomic(path, "{not json");
  EXPECT_THROW(read_config_file(path), std::invalid_argument);
  std::filesystem::remove(path);
  EXPECT_THROW(read_config_file(path), std::invalid_argument);
}

TEST(Poly, JsonRoundTrip) {
  const TaylorPoly p{Complex(1.0, 0.0), Complex(-0.25, 0.125), Complex(1.0 / 3.0, -2.0)};
  EXPECT_EQ(poly_from_json(json::parse(poly_file_text(p))), p);
  const auto path = temp_path("poly.json");
  write_file_atomic(path, poly_file_text(p));
  EXPECT_EQ(read_poly_file(path), p);
  std::filesystem::remove(path);
}

TEST(Poly, StrictParsing) {
  EXPECT_THROW(poly_from_json(json::parse(R"({"coeffs": []})")), std::invalid_argument);
  EXPECT_THROW(poly_from_json(json::parse(R"({"coeffs": [[1]]})")), std::invalid_argument);
  EXPECT_THROW(poly_from_json(json::parse(R"({"coeffs": [[1, "x"]]})")), std::invalid_argument);
  EXPECT_THROW(poly_from_json(json::parse(R"({"coef": [[1, 0]]})")), std::invalid_argument);
  EXPECT_THROW(poly_from_json(json::parse(R"([[1, 0]])")), std::invalid_argument);
}

TEST(AtomicWrite, ReplacesContents) {
  const auto path = temp_path("atomic.txt");
  write_file_atomic(path, "first\n");
  write_file_atomic(path, "second\n");
  EXPECT_EQ(read_text_file(path), "second\n");
  for (const auto &entry : std::filesystem::directory_iterator(path.parent_path())) {
    EXPECT_EQ(entry.path().string().find(path.filename().string() + ".tmp"), std::string::npos);
  }
  std::filesystem::remove(path);
  EXPECT_THROW(write_file_atomic("/nonexistent-dir/x/y.txt", "z"), std::invalid_argument);
}

TEST(Csv, CurvesLayout) {
  const MetricConfig cfg{};
  const auto lower = lower_bound_curve(cfg, 2, 3);
  const auto upper = upper_bound_curve(cfg, 1, 3);
  const std::string csv = curves_csv(lower, upper, 1, 3);
  const std::string header = "n,delta_lower,log_count_lower,delta_upper,log_count_upper\n";
  ASSERT_EQ(csv.substr(0, header.size()), header);
  const std::string row1 = csv.substr(header.size(), csv.find('\n', header.size()) - header.size());
  EXPECT_EQ(row1, "1,,," + format_double(upper[0].delta) + "," + format_double(upper[0].log_count));
  EXPECT_NE(csv.find("\n2," + format_double(std::pow(1.0 / 15.0, 4.0)) + ","), std::string::npos);
  EXPECT_EQ(csv.back(), '\n');
  EXPECT_EQ(csv.find('\r'), std::string::npos);
}

TEST(Csv, EstimateLayout) {
  EstimateReport rep;
  rep.deltas = {0.05, 0.02};
  rep.pack_counts = {7, 30};
  rep.pack_counts_double = {2, 7};
  rep.cover_counts = {5, 21};
  EXPECT_EQ(estimate_csv(rep), "delta,pack_count,cover_count\n0.05,7,5\n0.02,30,21\n");
}

TEST(Json, CertificatesCarryConfig) {
  const MetricConfig cfg{0.4, 1.5, 20, 128};
  const json pack = to_json(packing_certificate(3, 4, cfg));
  EXPECT_EQ(pack.at("count"), 16);
  EXPECT_EQ(config_from_json(pack.at("config")), cfg);
  const json net = to_json(net_upper_point(4, cfg));
  EXPECT_EQ(config_from_json(net.at("config")), cfg);
  EXPECT_EQ(net.at("internal"), false);
  EXPECT_DOUBLE_EQ(net.at("internal_radius_hi").get<double>(), 2.0 * net.at("radius_hi").get<double>());
  const json rho = to_json(compute_rho(MetricConfig{}, 50));
  EXPECT_EQ(rho.at("denominator"), 15);
  EXPECT_EQ(rho.at("binding_n"), 2);
}
