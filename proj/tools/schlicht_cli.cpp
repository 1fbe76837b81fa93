// Command-line front end: metric, pack, net, bounds, estimate, verify, koebe.
//
// Exit status: 0 success, 1 property violation or computation failure,
// 2 usage or validation error.

#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "schlicht/constructions.hpp"
#include "schlicht/estimator.hpp"
#include "schlicht/function_classes.hpp"
#include "schlicht/io.hpp"
#include "schlicht/metric.hpp"
#include "schlicht/verify.hpp"

namespace {

using namespace schlicht;

struct ConfigFlags {
  std::string config_path;
  std::optional<double> lambda;
  std::optional<double> alpha;
  std::optional<std::size_t> metric_terms;
  std::optional<std::size_t> circle_samples;

  void attach(CLI::App *app) {
    app->add_option("--config", config_path, "metric config JSON");
    app->add_option("--lambda", lambda, "weight base lambda in (0,1)");
    app->add_option("--alpha", alpha, "radius exponent alpha > 0");
    app->add_option("--metric-terms", metric_terms, "number of metric terms J");
    app->add_option("--circle-samples", circle_samples, "circle samples M per term");
  }

  // flags > config file > defaults
  MetricConfig resolve() const {
    MetricConfig cfg;
    if (!config_path.empty()) cfg = read_config_file(config_path);
    if (lambda) cfg.lambda = *lambda;
    if (alpha) cfg.alpha = *alpha;
    if (metric_terms) cfg.metric_terms = *metric_terms;
    if (circle_samples) cfg.circle_samples = *circle_samples;
    cfg.validate();
    return cfg;
  }
};

void emit(const std::string &out_path, const std::string &text) {
  if (out_path.empty()) {
    std::cout << text;
  } else {
    write_file_atomic(out_path, text);
  }
}

json provenance(const MetricConfig &cfg) { return json{{"tool_version", kToolVersion}, {"config", to_json(cfg)}}; }

std::string dump(const json &j) { return j.dump(2) + "\n"; }

// Writes CSV to out (stdout when empty) and the metadata to out + ".json"
// (stderr when out is empty).
void emit_csv_with_meta(const std::string &out_path, const std::string &csv, const json &meta) {
  emit(out_path, csv);
  if (out_path.empty()) {
    std::cerr << dump(meta);
  } else {
    write_file_atomic(out_path + ".json", dump(meta));
  }
}

std::vector<double> parse_ladder(const std::string &text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception &) {
      throw std::invalid_argument("--deltas: cannot parse '" + item + "'");
    }
    if (used != item.size() || !(v > 0.0)) throw std::invalid_argument("--deltas: entries must be positive numbers");
    out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument("--deltas: empty ladder");
  return out;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Metric-entropy toolkit for coefficient classes of holomorphic functions"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  std::string out_path;

  // metric
  auto *metric = app.add_subcommand("metric", "certified interval for d(f, g)");
  ConfigFlags metric_cfg;
  std::string f_path, g_path;
  metric->add_option("f", f_path, "coefficient file for f")->required()->check(CLI::ExistingFile);
  metric->add_option("g", g_path, "coefficient file for g")->required()->check(CLI::ExistingFile);
  metric_cfg.attach(metric);
  metric->add_option("--out", out_path, "output path (default stdout)");

  // pack
  auto *pack = app.add_subcommand("pack", "packing certificate for the class A");
  ConfigFlags pack_cfg;
  std::size_t pack_n = 3, pack_K = 4;
  std::string family_name = "A";
  bool list_members = false;
  pack->add_option("--n", pack_n, "degree n >= 2");
  pack->add_option("--K", pack_K, "grid size K >= 1");
  pack->add_option("--family", family_name, "A or convex")->check(CLI::IsMember({"A", "convex"}));
  pack->add_flag("--members", list_members, "enumerate members (count <= 10^4)");
  pack_cfg.attach(pack);
  pack->add_option("--out", out_path, "output path (default stdout)");

  // net
  auto *net = app.add_subcommand("net", "net certificate, or quantize a polynomial onto the grid");
  ConfigFlags net_cfg;
  std::size_t net_n = 10;
  std::optional<std::size_t> net_K;
  std::string quantize_path;
  net->add_option("--n", net_n, "truncation degree n >= 1");
  net->add_option("--K", net_K, "grid size K (quantize mode)");
  net->add_option("--quantize", quantize_path, "coefficient file to quantize")->check(CLI::ExistingFile);
  net_cfg.attach(net);
  net->add_option("--out", out_path, "output path (default stdout)");

  // bounds
  auto *bounds = app.add_subcommand("bounds", "covering-number bound curves as CSV");
  ConfigFlags bounds_cfg;
  std::size_t n_min = 2, n_max = 20;
  bounds->add_option("--n-min", n_min, "first n");
  bounds->add_option("--n-max", n_max, "last n");
  bounds_cfg.attach(bounds);
  bounds->add_option("--out", out_path, "CSV output path (metadata goes to PATH.json)");

  // estimate
  auto *est = app.add_subcommand("estimate", "empirical packing/covering counts on a sample");
  ConfigFlags est_cfg;
  std::string class_name_flag = "A";
  std::size_t est_degree = 2, est_count = 1000, threads = 1;
  std::uint64_t seed = 1;
  std::string ladder_text = "0.05,0.02,0.01";
  bool a2_slice = false;
  est->add_option("--class", class_name_flag, "A, B, B-littlewood or convex")
      ->check(CLI::IsMember({"A", "B", "B-littlewood", "convex"}));
  est->add_option("--degree", est_degree, "sample degree >= 2");
  est->add_option("--count", est_count, "number of samples");
  est->add_option("--seed", seed, "RNG seed");
  est->add_option("--deltas", ladder_text, "comma-separated delta ladder");
  est->add_option("--threads", threads, "worker threads for distance evaluation");
  est->add_flag("--slice", a2_slice, "sample the slice z + a_2 z^2, |a_2| <= 1/2, ignoring --class/--degree");
  est_cfg.attach(est);
  est->add_option("--out", out_path, "CSV output path (summary goes to PATH.json)");

  // verify
  auto *verify = app.add_subcommand("verify", "run a property suite");
  ConfigFlags verify_cfg;
  std::string suite = "all";
  std::size_t trials = 100;
  std::uint64_t verify_seed = 7;
  verify->add_option("--suite", suite, "lemma-ca, lemma-cb, packing, net, sharpness, metric-axioms or all")
      ->check(CLI::IsMember({"lemma-ca", "lemma-cb", "packing", "net", "sharpness", "metric-axioms", "all"}));
  verify->add_option("--trials", trials, "random trials per suite");
  verify->add_option("--seed", verify_seed, "RNG seed");
  verify_cfg.attach(verify);
  verify->add_option("--out", out_path, "output path (default stdout)");

  // koebe
  auto *koebe_cmd = app.add_subcommand("koebe", "Koebe coefficients and the sharpness sandwich");
  ConfigFlags koebe_cfg;
  std::size_t koebe_n = 10, sw_min = 25, sw_max = 400;
  bool sharpness = false;
  koebe_cmd->add_option("--n", koebe_n, "degree");
  koebe_cmd->add_flag("--sharpness", sharpness, "append the sandwich table for n = n-min, 2 n-min, ..., <= n-max");
  koebe_cmd->add_option("--n-min", sw_min, "first sandwich n");
  koebe_cmd->add_option("--n-max", sw_max, "last sandwich n");
  koebe_cfg.attach(koebe_cmd);
  koebe_cmd->add_option("--out", out_path, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (metric->parsed()) {
      const MetricConfig cfg = metric_cfg.resolve();
      const BoundInterval d = metric_d(read_poly_file(f_path), read_poly_file(g_path), cfg);
      json j{{"lo", d.lo}, {"hi", d.hi}};
      j.update(provenance(cfg));
      emit(out_path, dump(j));
    } else if (pack->parsed()) {
      const MetricConfig cfg = pack_cfg.resolve();
      const PackingFamily family = family_name == "A" ? PackingFamily::schlicht : PackingFamily::convex;
      const PackingCertificate cert = packing_certificate(pack_n, pack_K, cfg, family);
      json j = to_json(cert);
      j["tool_version"] = kToolVersion;
      if (list_members) {
        if (!cert.count || *cert.count > 10'000) throw std::invalid_argument("--members needs count <= 10^4");
        json members = json::array();
        for (std::uint64_t i = 0; i < *cert.count; ++i) {
          const auto t = packing_index(pack_n, pack_K, i);
          members.push_back(json{{"t", t}, {"coeffs", coeffs_to_json(packing_member(pack_n, pack_K, t, family))}});
        }
        j["members"] = std::move(members);
      }
      emit(out_path, dump(j));
    } else if (net->parsed()) {
      const MetricConfig cfg = net_cfg.resolve();
      if (!quantize_path.empty()) {
        if (!net_K) throw std::invalid_argument("--quantize requires --K");
        const TaylorPoly p = read_poly_file(quantize_path);
        const NetQuantization q = quantize_to_net(p, net_n, *net_K);
        json j{{"n", net_n}, {"K", *net_K}, {"coeffs", coeffs_to_json(q.center)},
               {"s", q.s},   {"t", q.t},     {"per_coeff_err", q.per_coeff_err}};
        const BoundInterval d = metric_d(p, q.center, cfg);
        j["distance"] = json{{"lo", d.lo}, {"hi", d.hi}};
        j.update(provenance(cfg));
        emit(out_path, dump(j));
      } else {
        json j = to_json(net_upper_point(net_n, cfg));
        j["tool_version"] = kToolVersion;
        emit(out_path, dump(j));
      }
    } else if (bounds->parsed()) {
      const MetricConfig cfg = bounds_cfg.resolve();
      if (n_min < 1 || n_min > n_max) throw std::invalid_argument("need 1 <= n-min <= n-max");
      const Rho rho = compute_rho(cfg, std::max(n_max, kDefaultRhoHorizon));
      const std::vector<CurvePoint> lower =
          n_max >= 2 ? lower_bound_curve(rho, std::max<std::size_t>(n_min, 2), n_max) : std::vector<CurvePoint>{};
      const std::vector<CurvePoint> upper = upper_bound_curve(cfg, n_min, n_max);
      json meta = provenance(cfg);
      meta["rho"] = to_json(rho);
      meta["n_min"] = n_min;
      meta["n_max"] = n_max;
      emit_csv_with_meta(out_path, curves_csv(lower, upper, n_min, n_max), meta);
    } else if (est->parsed()) {
      const MetricConfig cfg = est_cfg.resolve();
      const std::vector<double> ladder = parse_ladder(ladder_text);
      const std::vector<TaylorPoly> points =
          a2_slice ? sample_a2_slice(est_count, seed)
                   : sample_class({parse_class(class_name_flag), est_degree, est_count, seed});
      const EstimateReport rep = estimate(points, ladder, cfg, threads);
      json meta = provenance(cfg);
      meta["label"] = "empirical";
      meta["sample"] = json{{"class", a2_slice ? std::string("a2-slice") : class_name_flag},
                            {"degree", a2_slice ? std::size_t{2} : est_degree},
                            {"count", est_count},
                            {"seed", seed}};
      meta["pack_counts_double_delta"] = rep.pack_counts_double;
      meta["bracket_holds"] = rep.bracket_holds();
      meta["box_dimension"] = rep.deltas.size() >= 2 ? json(box_dimension_fit(rep)) : json(nullptr);
      try {
        const ExponentFit fit = exponent_fit(rep, cfg.alpha);
        meta["exponent_fit"] = json{{"from_cover", fit.from_cover},
                                    {"from_pack", fit.from_pack},
                                    {"window", json::array({fit.window_lo, fit.window_hi})}};
      } catch (const std::invalid_argument &e) {
        meta["exponent_fit"] = json{{"error", e.what()}};
      }
      emit_csv_with_meta(out_path, estimate_csv(rep), meta);
    } else if (verify->parsed()) {
      const MetricConfig cfg = verify_cfg.resolve();
      const std::vector<SuiteResult> results = run_suites(suite, cfg, trials, verify_seed);
      json j{{"suite", suite}, {"trials", trials}, {"seed", verify_seed}};
      j.update(provenance(cfg));
      bool ok = true;
      json arr = json::array();
      for (const SuiteResult &r : results) {
        ok = ok && r.passed();
        arr.push_back(json{{"name", r.name}, {"checks", r.checks}, {"passed", r.passed()}, {"violations", r.violations}});
      }
      j["results"] = std::move(arr);
      j["passed"] = ok;
      emit(out_path, dump(j));
      for (const SuiteResult &r : results) {
        for (const std::string &v : r.violations) std::cerr << r.name << ": " << v << "\n";
      }
      return ok ? 0 : 1;
    } else if (koebe_cmd->parsed()) {
      const MetricConfig cfg = koebe_cfg.resolve();
      json j{{"coeffs", coeffs_to_json(koebe(koebe_n))}};
      if (sharpness) {
        if (sw_min < 1 || sw_min > sw_max) throw std::invalid_argument("need 1 <= n-min <= n-max");
        json rows = json::array();
        for (std::size_t n = sw_min; n <= sw_max; n *= 2) {
          const KoebeSandwich s = koebe_sandwich(n, cfg);
          rows.push_back(json{{"n", n},
                              {"lower", s.lower},
                              {"proxy_degree", s.proxy_degree},
                              {"proxy_lo", s.proxy.lo},
                              {"proxy_hi", s.proxy.hi},
                              {"proxy_error", s.proxy_error},
                              {"upper", s.upper},
                              {"holds", s.holds()}});
        }
        j["sandwich"] = std::move(rows);
      }
      j.update(provenance(cfg));
      emit(out_path, dump(j));
    }
  } catch (const std::invalid_argument &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
