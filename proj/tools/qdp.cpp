// qdp: exact computation, series expansion and Monte Carlo verification for
// counting independent sets on random subgraphs of the hypercube.
#include <CLI11.hpp>
#include <chrono>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>

#include "qdp/asymptotics.hpp"
#include "qdp/cluster.hpp"
#include "qdp/exact.hpp"
#include "qdp/mc.hpp"
#include "qdp/verify.hpp"

using namespace qdp;
using nlohmann::json;

namespace {

double now_ms() {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

u64 fnv1a(const std::string& s) {
  u64 h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

struct Output {
  std::string out_path;     // empty = stdout
  std::string ledger_path;  // empty = no ledger
  std::string config_repr;

  void emit(const std::string& text) const {
    if (out_path.empty()) {
      std::cout << text << "\n";
    } else {
      std::ofstream f(out_path);
      f << text << "\n";
    }
    if (!ledger_path.empty()) {
      json entry;
      entry["timestamp"] = (u64)std::chrono::duration_cast<std::chrono::seconds>(
                               std::chrono::system_clock::now().time_since_epoch())
                               .count();
      char buf[32];
      snprintf(buf, sizeof buf, "%016llx", (unsigned long long)fnv1a(config_repr));
      entry["config_hash"] = buf;
      snprintf(buf, sizeof buf, "%016llx", (unsigned long long)fnv1a(text));
      entry["result_digest"] = buf;
      std::ofstream f(ledger_path, std::ios::app);
      f << entry.dump() << "\n";
    }
  }
};

Graph load_graph(const std::string& spec, int d) {
  if (spec == "qd") return Graph::hypercube(d);
  if (spec.rfind("json:", 0) == 0) {
    std::ifstream f(spec.substr(5));
    if (!f) throw ConfigError("cannot open graph file " + spec.substr(5));
    std::string text((std::istreambuf_iterator<char>(f)),
                     std::istreambuf_iterator<char>());
    return Graph::from_json(text);
  }
  throw ConfigError("graph must be 'qd' or 'json:<path>'");
}

DefectVector parse_defects(const std::string& s, int k) {
  if (s.empty()) return DefectVector::all_even(k);
  DefectVector dv;
  for (char c : s) {
    if (c == 'E' || c == 'e')
      dv.sides.push_back(Side::even);
    else if (c == 'O' || c == 'o')
      dv.sides.push_back(Side::odd);
    else
      throw ConfigError("defects must be a string over {E,O}");
  }
  return dv;
}

json value_rational(const Rational& r) {
  return {{"kind", "rational"},
          {"value", qdp::to_string(r)},
          {"double", to_double(r)}};
}

json value_log2(double lg) { return {{"kind", "log2"}, {"log2", lg}}; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hard-core partition functions on random hypercube subgraphs"};
  app.require_subcommand(1);

  std::string out_path, ledger_path;
  int workers = 2;
  app.add_option("--out", out_path, "write the result to this file");
  app.add_option("--ledger", ledger_path, "append-only JSONL run ledger");
  app.add_option("--workers", workers, "worker threads for parallel kernels");

  // shared parameters
  int d = 3, k = 1, order = 2, K = 2, scenario = 1, sample_index = 0;
  std::string lambda_s = "1", p_s = "1", graph_spec = "qd", defects_s;
  u64 seed = 1, samples = 1000;

  auto add_params = [&](CLI::App* c) {
    c->add_option("--d", d, "hypercube dimension");
    c->add_option("--k", k, "number of interacting copies");
    c->add_option("--lambda", lambda_s, "fugacity, rational 'num/den'");
    c->add_option("--p", p_s, "edge retention probability, rational");
  };

  auto* cexact = app.add_subcommand("exact", "exact partition functions");
  cexact->fallthrough();
  std::string exact_op = "count";
  cexact->add_option("--op", exact_op,
                     "count|hardcore|postemp|zk|logz|sample_logz|sample_exact");
  std::string zk_algorithm = "auto";
  cexact->add_option("--algorithm", zk_algorithm,
                     "zk route: auto|tuples|bipartite|edge");
  cexact->add_option("--graph", graph_spec, "qd or json:<path>");
  cexact->add_option("--seed", seed, "sample seed");
  cexact->add_option("--sample-index", sample_index, "sample index");
  add_params(cexact);

  auto* cpoly = app.add_subcommand("polymer", "polymer enumeration and weights");
  cpoly->fallthrough();
  std::string poly_op = "enumerate";
  int max_size = 2;
  long long root = -1;
  cpoly->add_option("--op", poly_op, "enumerate|closed_form");
  cpoly->add_option("--defects", defects_s, "defect sides, e.g. EEO");
  cpoly->add_option("--max-size", max_size, "size cap");
  cpoly->add_option("--root", root, "restrict to supports with this minimum");
  cpoly->add_option("--scenario", scenario, "closed form 1..4");
  add_params(cpoly);

  auto* cclu = app.add_subcommand("cluster", "cluster expansion sums");
  cclu->fallthrough();
  std::string clu_op = "logxi", clu_mode = "direct";
  cclu->add_option("--op", clu_op, "logxi|a_same_diff|coeffs|central|report|tail");
  cclu->add_option("--mode", clu_mode, "direct|symmetric");
  cclu->add_option("--order", order, "truncation order");
  cclu->add_option("--defects", defects_s, "defect sides");
  add_params(cclu);

  auto* casym = app.add_subcommand("asym", "closed-form asymptotic evaluators");
  casym->fallthrough();
  std::string formula = "expectation";
  double nval = 1;
  casym->add_option("--formula", formula,
                    "expectation|moment_ratio|central_moment|ks_jp|"
                    "xd_normalizer|gtilde|x_star");
  casym->add_option("--order", order, "expectation order (1 or 2)");
  casym->add_option("--n", nval, "argument of gtilde");
  add_params(casym);

  auto* cmc = app.add_subcommand("mc", "seeded Monte Carlo estimation");
  cmc->fallthrough();
  std::string reference = "formula", probe = "moments";
  cmc->add_option("--probe", probe, "moments|warmup|normality");
  cmc->add_option("--samples", samples, "sample count");
  cmc->add_option("--seed", seed, "base seed");
  cmc->add_option("--reference", reference, "formula|exact");
  cmc->add_option("--K", K, "warmup subset-size cap");
  add_params(cmc);

  auto* cver = app.add_subcommand("verify", "cross-check matrices");
  cver->fallthrough();
  std::string suite = "identities";
  bool quick = false, corrupt = false;
  cver->add_option("--suite", suite,
                   "identities|polymers|clusters|formulas|mc|all");
  cver->add_flag("--quick", quick, "reduced matrix");
  cver->add_flag("--corrupt-polymer-weight", corrupt,
                 "negative-test fixture: break one polymer weight")
      ->group("");  // hidden
  add_params(cver);

  auto* ctab = app.add_subcommand("table", "formula table over a (d,p) grid");
  ctab->fallthrough();
  int dmin = 3, dmax = 8;
  std::string p_list = "1/2,3/4,9/10";
  ctab->add_option("--formula", formula, "formula id as in asym");
  ctab->add_option("--order", order, "expectation order (1 or 2)");
  ctab->add_option("--d-min", dmin);
  ctab->add_option("--d-max", dmax);
  ctab->add_option("--p-list", p_list, "comma-separated rationals");
  add_params(ctab);

  CLI11_PARSE(app, argc, argv);

  std::string config_repr;
  for (int i = 1; i < argc; ++i) config_repr += std::string(argv[i]) + " ";
  Output out{out_path, ledger_path, config_repr};

  try {
    ModelParams mp;
    mp.d = d;
    mp.k = k;
    mp.lambda = parse_rational(lambda_s);
    mp.p = parse_rational(p_s);

    double t0 = now_ms();
    auto finish = [&](json j) {
      j["runtime_ms"] = now_ms() - t0;
      j["params"] = {{"d", d},
                     {"k", k},
                     {"lambda", lambda_s},
                     {"p", p_s},
                     {"workers", workers}};
      out.emit(j.dump());
    };

    if (*cexact) {
      Graph g = load_graph(graph_spec, d);
      json j;
      j["op"] = exact_op;
      if (exact_op == "count") {
        j["value"] = {{"kind", "integer"},
                      {"value", count_independent_sets(g, workers).get_str()}};
      } else if (exact_op == "hardcore") {
        j["value"] = value_rational(hardcore_partition(g, mp.lambda));
      } else if (exact_op == "postemp") {
        j["value"] = value_rational(postemp_partition(g, mp));
      } else if (exact_op == "zk") {
        Rational z;
        if (zk_algorithm == "tuples")
          z = ksystem_partition_tuples(g, mp);
        else if (zk_algorithm == "bipartite")
          z = ksystem_partition_bipartite(g, mp);
        else if (zk_algorithm == "edge")
          z = ksystem_partition_edge_expectation(g, mp);
        else
          z = ksystem_partition(g, mp);
        j["algorithm"] = zk_algorithm;
        j["value"] = value_rational(z);
      } else if (exact_op == "logz") {
        j["value"] = value_log2(hypercube_postemp_logZ(mp, workers).log2_value());
      } else if (exact_op == "sample_logz" || exact_op == "sample_exact") {
        auto s = sample_subgraph(g, mp.p, seed, sample_index);
        j["seed"] = seed;
        j["sample_index"] = sample_index;
        j["retained_edges"] = s.retained_count();
        if (exact_op == "sample_logz")
          j["value"] =
              value_log2(hardcore_on_sample_logZ(s, mp.lambda, workers).log2_value());
        else
          j["value"] = value_rational(hardcore_on_sample_exact(s, mp.lambda));
      } else {
        throw ConfigError("unknown exact op: " + exact_op);
      }
      finish(j);
    } else if (*cpoly) {
      json j;
      j["op"] = poly_op;
      if (poly_op == "enumerate") {
        auto dv = parse_defects(defects_s, k);
        std::optional<u64> r;
        if (root >= 0) r = (u64)root;
        auto polys = enumerate_polymers(d, dv, max_size, r);
        j["count"] = polys.size();
        auto& arr = j["polymers"] = json::array();
        for (const auto& g : polys) {
          arr.push_back(json::parse(g.to_json()));
          arr.back()["weight"] =
              qdp::to_string(polymer_weight_factorized(g, mp));
        }
      } else if (poly_op == "closed_form") {
        Scenario sc = static_cast<Scenario>(scenario - 1);
        if (scenario < 1 || scenario > 4)
          throw ConfigError("scenario must be 1..4");
        j["value"] = value_rational(closed_form_weight(sc, mp));
      } else {
        throw ConfigError("unknown polymer op: " + poly_op);
      }
      finish(j);
    } else if (*cclu) {
      auto dv = parse_defects(defects_s, k);
      json j;
      j["op"] = clu_op;
      if (clu_op == "logxi") {
        Rational v = clu_mode == "symmetric"
                         ? truncated_log_Xi_symmetric(mp, dv, order)
                         : truncated_log_Xi_direct(mp, dv, order);
        j["mode"] = clu_mode;
        j["order"] = order;
        j["value"] = value_rational(v);
      } else if (clu_op == "a_same_diff") {
        auto closed = a_same_a_diff_closed(mp);
        j["closed"] = {{"a_same", qdp::to_string(closed.a_same)},
                       {"a_diff", qdp::to_string(closed.a_diff)}};
        if (mp.d <= 4) {
          auto enumd = a_same_a_diff_enumerated(mp);
          j["enumerated"] = {{"a_same", qdp::to_string(enumd.a_same)},
                             {"a_diff", qdp::to_string(enumd.a_diff)}};
          j["match"] = closed.a_same == enumd.a_same &&
                       closed.a_diff == enumd.a_diff;
        }
      } else if (clu_op == "coeffs") {
        auto fs = coefficient_polynomials(mp.lambda, mp.p, order);
        auto& arr = j["polynomials"] = json::array();
        for (const auto& f : fs) {
          json poly = json::array();
          for (const auto& c : f) poly.push_back(qdp::to_string(c));
          arr.push_back(poly);
        }
      } else if (clu_op == "central") {
        j["order"] = order;
        j["value"] = value_rational(central_moment_truncated(mp, order));
      } else if (clu_op == "report") {
        j = json::parse(cluster_report_json(mp, dv, order));
        j["op"] = "report";
      } else if (clu_op == "tail") {
        j["value"] = cluster_tail_diagnostic(mp, dv, order);
      } else {
        throw ConfigError("unknown cluster op: " + clu_op);
      }
      finish(j);
    } else if (*casym) {
      json j;
      j["op"] = formula;
      double lam = to_double(mp.lambda), pp = to_double(mp.p);
      if (formula == "expectation")
        j["report"] = json::parse(expectation_formula(d, lam, pp, order).to_json());
      else if (formula == "moment_ratio")
        j["report"] = json::parse(moment_ratio_formula(d, lam, pp, k).to_json());
      else if (formula == "central_moment")
        j["report"] = json::parse(central_moment_formula(d, lam, pp, k).to_json());
      else if (formula == "ks_jp")
        j["report"] = json::parse(ks_jp_values(d).to_json());
      else if (formula == "xd_normalizer") {
        auto [c, s] = xd_normalizer(d, pp);
        j["center_log2"] = c;
        j["scale_log2"] = s;
      } else if (formula == "gtilde") {
        j["gtilde"] = gtilde(nval, d, k, lam, pp);
        j["f"] = kp_f(nval, d);
        j["g"] = kp_g(nval, d, k, lam, pp);
      } else if (formula == "x_star") {
        auto xs = x_star(AlphaParams{lam, pp});
        if (xs)
          j["x_star"] = *xs;
        else
          j["x_star"] = nullptr;
      } else {
        throw ConfigError("unknown formula: " + formula);
      }
      finish(j);
    } else if (*cmc) {
      json j;
      j["op"] = probe;
      if (probe == "moments") {
        auto est = run_mc(mp, samples, seed, reference, workers);
        j["estimates"] = json::parse(est.to_json());
      } else if (probe == "warmup") {
        auto est = warmup_statistic(mp, K, samples, seed, workers);
        j["estimates"] = json::parse(est.to_json());
      } else if (probe == "normality") {
        auto est = normality_probe(mp, samples, seed, workers);
        j["estimates"] = json::parse(est.to_json());
      } else {
        throw ConfigError("unknown mc probe: " + probe);
      }
      finish(j);
    } else if (*cver) {
      VerifyOptions vo;
      vo.quick = quick;
      vo.corrupt_polymer_weight = corrupt;
      vo.workers = workers;
      std::vector<std::string> suites;
      if (suite == "all")
        suites = {"identities", "polymers", "clusters", "formulas", "mc"};
      else
        suites = {suite};
      bool all_pass = true;
      json j;
      auto& arr = j["suites"] = json::array();
      for (const auto& s : suites) {
        auto res = verify_suite(s, vo);
        for (const auto& c : res.checks)
          std::cerr << (c.pass ? "[PASS] " : "[FAIL] ") << res.suite << ": "
                    << c.name << " (" << c.anchor << ") expected=" << c.expected
                    << " actual=" << c.actual << "\n";
        all_pass = all_pass && res.all_pass();
        arr.push_back(json::parse(res.to_json()));
      }
      j["pass"] = all_pass;
      finish(j);
      return all_pass ? 0 : 1;
    } else if (*ctab) {
      // CSV table: one row per (d, p)
      std::vector<Rational> ps;
      {
        std::stringstream ss(p_list);
        std::string tok;
        while (std::getline(ss, tok, ',')) ps.push_back(parse_rational(tok));
      }
      std::ostringstream csv;
      csv << "formula,d,lambda,p,leading_log2,value_log2,corrections,"
             "error_term_magnitude\n";
      for (int dd = dmin; dd <= dmax; ++dd) {
        for (const auto& pr : ps) {
          double lam = to_double(mp.lambda), pp = to_double(pr);
          FormulaReport r;
          if (formula == "expectation")
            r = expectation_formula(dd, lam, pp, order);
          else if (formula == "moment_ratio")
            r = moment_ratio_formula(dd, lam, pp, k);
          else if (formula == "central_moment")
            r = central_moment_formula(dd, lam, pp, k);
          else if (formula == "ks_jp")
            r = ks_jp_values(dd);
          else
            throw ConfigError("table: unsupported formula " + formula);
          csv << formula << "," << dd << "," << lambda_s << ","
              << qdp::to_string(pr) << "," << r.leading_log2 << ","
              << r.value_log2() << ",\"";
          for (size_t i = 0; i < r.corrections.size(); ++i)
            csv << (i ? ";" : "") << r.corrections[i].first << "="
                << r.corrections[i].second;
          csv << "\"," << r.error_term_magnitude << "\n";
        }
      }
      out.emit(csv.str());
    }
  } catch (const BudgetError& e) {
    std::cerr << "budget error: " << e.what() << "\n";
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
