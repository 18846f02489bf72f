// Command-line front end: prediction tables, verification runs, raw
// counting, quotient inspection, identity suites.
//
// Exit codes: 0 all checks pass, 1 a mathematical check failed,
// 2 invalid input or budget exceeded.

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "hecurve/counting.hpp"
#include "hecurve/curve.hpp"
#include "hecurve/decomp.hpp"
#include "hecurve/field.hpp"
#include "hecurve/verifier.hpp"

namespace {

using namespace hecurve;

constexpr int kExitPass = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitInvalid = 2;

SubsetMask parse_subset(const std::string& s) {
  SubsetMask t = 0;
  if (s.empty() || s == "-") return t;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, ',')) {
    int i = std::stoi(part);
    if (i < 0 || i > 31) throw std::invalid_argument("subset index out of range: " + part);
    t |= SubsetMask{1} << i;
  }
  return t;
}

std::string subset_str(SubsetMask t) {
  if (t == 0) return "{}";
  std::string s = "{";
  for (int i = 0; t >> i; ++i)
    if (t & (SubsetMask{1} << i)) {
      if (s.size() > 1) s += ",";
      s += std::to_string(i);
    }
  return s + "}";
}

CountMethod parse_method(const std::string& m) {
  if (m == "naive") return CountMethod::naive;
  if (m == "charsum") return CountMethod::charsum;
  if (m == "auto") return CountMethod::auto_select;
  throw std::invalid_argument("method must be naive, charsum or auto");
}

CurveMatrix load_curve(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open curve file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return curve_from_text(ss.str());
}

void emit_structured(nlohmann::ordered_json j, bool deterministic) {
  if (!deterministic) {
    auto now = std::chrono::system_clock::now().time_since_epoch();
    j["timestamp"] = std::chrono::duration_cast<std::chrono::seconds>(now).count();
  }
  std::cout << j.dump(2) << "\n";
}

int cmd_predict(int n, const std::string& format, bool deterministic) {
  DecompositionReport rep = decompose(n);
  if (format == "structured") {
    emit_structured(nlohmann::ordered_json::parse(report_to_text(rep)), deterministic);
    return kExitPass;
  }
  std::cout << "Jacobian decomposition prediction, type n = " << n << "\n";
  std::cout << "  genus              " << rep.genus.get_str() << "\n";
  std::cout << "  total factor dim   " << rep.total_dim.get_str() << "\n";
  std::cout << "  PT exponent        " << rep.pt_exponent.get_str() << "\n";
  std::cout << "  kernel order       "
            << (rep.kernel_order != 0 ? rep.kernel_order.get_str() : std::string("(huge)"))
            << "  = 2^" << rep.kernel_exponent.get_str() << "\n";
  std::cout << "  factors by dimension:\n";
  for (const auto& [m, c] : rep.counts_by_dim)
    std::cout << "    dim " << m << "  x " << c.get_str() << "   (polarization type ("
              << rep.pt_exponent.get_str() << ",...))\n";
  return kExitPass;
}

int cmd_identities(int max_n) {
  auto results = identity_suite(max_n);
  bool all = true;
  for (const auto& r : results) {
    std::cout << "n=" << r.n << "  genus-sum " << (r.genus_sum_ok ? "ok" : "FAIL") << "  etale "
              << (r.etale_ok ? "ok" : "FAIL") << "  kernel " << (r.kernel_ok ? "ok" : "FAIL")
              << "\n";
    all = all && r.all_ok();
  }
  std::cout << (all ? "all identities pass" : "IDENTITY FAILURE") << "\n";
  return all ? kExitPass : kExitCheckFailed;
}

int cmd_quotient(const std::string& curve_path, const std::string& subset) {
  CurveMatrix a = load_curve(curve_path);
  Validation v = validate_curve(a);
  if (!v.ok) {
    std::cerr << "invalid curve: " << v.message << "\n";
    return kExitInvalid;
  }
  QuotientCurve q = quotient(a, parse_subset(subset));
  if (q.type < 2) {
    nlohmann::ordered_json j;
    j["n"] = 1;
    j["p"] = a.p;
    j["rows"] = nlohmann::ordered_json::array();
    j["genus"] = 0;
    std::cout << j.dump() << "\n";
  } else {
    std::cout << curve_to_text(*q.matrix) << "\n";
  }
  return kExitPass;
}

int cmd_count(const std::string& curve_path, const std::string& subset, int k,
              const std::string& method, const std::string& cache_path, int threads,
              bool stats) {
  CurveMatrix a = load_curve(curve_path);
  Validation v = validate_curve(a);
  if (!v.ok) {
    std::cerr << "invalid curve: " << v.message << "\n";
    return kExitInvalid;
  }
  CountCache cache(cache_path.empty() ? std::string() : cache_path);
  CountRecord rec = trace(a, parse_subset(subset), a.p, k, parse_method(method),
                          cache_path.empty() ? nullptr : &cache, CountBudget{}, threads);
  std::cout << "T=" << subset_str(rec.subset) << " p=" << rec.p << " k=" << rec.k
            << " N=" << rec.n_points << " a=" << rec.trace
            << (rec.weil_ok ? "" : "  [WEIL VIOLATION]") << "\n";
  if (stats)
    std::cout << "cache: " << cache.hits() << " hits, " << cache.misses() << " misses, "
              << cache.size() << " entries\n";
  return rec.weil_ok ? kExitPass : kExitCheckFailed;
}

int cmd_verify(int n, const std::vector<int64_t>& primes, int kmax, uint64_t seed,
               const std::string& curve_path, const std::string& method,
               const std::string& cache_path, int threads, const std::string& format,
               bool deterministic) {
  CountCache cache(cache_path.empty() ? std::string() : cache_path);
  CountCache* cp = cache_path.empty() ? nullptr : &cache;

  bool all_pass = true;
  std::vector<VerificationReport> reports;
  if (!curve_path.empty()) {
    CurveMatrix a = load_curve(curve_path);
    Validation v = validate_curve(a);
    if (!v.ok) {
      std::cerr << "invalid curve: " << v.message;
      if (!v.bad_columns.empty()) {
        std::cerr << " (columns";
        for (int c : v.bad_columns) std::cerr << " " << c;
        std::cerr << ")";
      }
      std::cerr << "\n";
      return kExitInvalid;
    }
    reports.push_back(full_verify(a, a.p, kmax, parse_method(method), cp, CountBudget{},
                                  threads, seed));
  } else {
    for (int64_t p : primes) {
      CurveMatrix a = random_smooth_curve(n, p, seed);
      reports.push_back(full_verify(a, p, kmax, parse_method(method), cp, CountBudget{},
                                    threads, seed));
    }
  }

  for (const auto& rep : reports) {
    all_pass = all_pass && rep.pass;
    if (format == "structured") {
      emit_structured(nlohmann::ordered_json::parse(verification_to_text(rep)), deterministic);
    } else {
      int nonzero = 0;
      for (const auto& r : rep.residuals)
        if (r.value != 0) ++nonzero;
      std::cout << "p=" << rep.p << " kmax=" << rep.kmax << "  residuals "
                << rep.residuals.size() << " (" << nonzero << " nonzero)  weil violations "
                << rep.weil_violations.size() << "  fixed-locus "
                << (rep.fixed_locus_ok ? "ok" : "FAIL") << "  verdict "
                << (rep.pass ? "pass" : "FAIL") << "\n";
      for (const auto& r : rep.residuals)
        if (r.value != 0)
          std::cout << "  residual T=" << subset_str(r.subset) << " k=" << r.k << " value "
                    << r.value << "\n";
    }
  }
  return all_pass ? kExitPass : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Humbert-Edge curve Jacobian decomposition: prediction and finite-field "
               "verification"};
  app.require_subcommand(1);

  int n = 4, kmax = 3, k = 1, max_n = 20, threads = 1;
  uint64_t seed = 0;
  std::vector<int64_t> primes;
  std::string curve_path, method = "auto", cache_path, format = "table", subset;
  bool deterministic = false, stats = false;

  auto* predict = app.add_subcommand("predict", "Predicted decomposition table for type n");
  predict->add_option("--n", n, "curve type")->required();
  predict->add_option("--format", format, "table|structured");
  predict->add_flag("--deterministic", deterministic, "suppress timestamp");

  auto* verify = app.add_subcommand("verify", "Count the quotient tower and check the "
                                              "trace identities");
  verify->add_option("--n", n, "curve type (with --seed)");
  verify->add_option("--p", primes, "base prime, repeatable for independent trials");
  verify->add_option("--kmax", kmax, "max extension degree");
  verify->add_option("--seed", seed, "seed for curve sampling and field construction");
  verify->add_option("--curve", curve_path, "curve file instead of seeded sampling");
  verify->add_option("--method", method, "naive|charsum|auto");
  verify->add_option("--cache", cache_path, "count cache file");
  verify->add_option("--threads", threads, "worker threads for counting");
  verify->add_option("--format", format, "table|structured");
  verify->add_flag("--deterministic", deterministic, "suppress timestamp");

  auto* count = app.add_subcommand("count", "Point count on one quotient");
  count->add_option("--curve", curve_path, "curve file")->required();
  count->add_option("--T", subset, "subset as comma-separated indices");
  count->add_option("--k", k, "extension degree");
  count->add_option("--method", method, "naive|charsum|auto");
  count->add_option("--cache", cache_path, "count cache file");
  count->add_option("--threads", threads, "worker threads");
  count->add_flag("--stats", stats, "print cache statistics");

  auto* quot = app.add_subcommand("quotient", "Write the canonical quotient curve");
  quot->add_option("--curve", curve_path, "curve file")->required();
  quot->add_option("--T", subset, "subset as comma-separated indices");

  auto* ident = app.add_subcommand("identities", "Exact combinatorial identity suite");
  ident->add_option("--max-n", max_n, "check 3 <= n <= max-n");

  CLI11_PARSE(app, argc, argv);

  try {
    if (predict->parsed()) return cmd_predict(n, format, deterministic);
    if (ident->parsed()) return cmd_identities(max_n);
    if (quot->parsed()) return cmd_quotient(curve_path, subset);
    if (count->parsed())
      return cmd_count(curve_path, subset, k, method, cache_path, threads, stats);
    if (verify->parsed()) {
      if (curve_path.empty() && primes.empty()) {
        std::cerr << "verify: need --curve or at least one --p\n";
        return kExitInvalid;
      }
      return cmd_verify(n, primes, kmax, seed, curve_path, method, cache_path, threads, format,
                        deterministic);
    }
  } catch (const budget_error& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  return kExitInvalid;
}
