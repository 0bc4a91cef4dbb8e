// Command-line front end.  Talks to the engine exclusively through the
// extern-C interface in latperm.h; all exact values cross as strings.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "latperm.h"

using nlohmann::json;

namespace {

constexpr const char* kSchemaVersion = "1";

int g_exit = 0;

void emit(const json& j, const std::string& out_path) {
  std::string s = j.dump(2) + "\n";
  if (out_path.empty()) {
    std::fputs(s.c_str(), stdout);
  } else {
    std::ofstream f(out_path, std::ios::binary);
    f << s;
  }
}

void emit_text(const std::string& s, const std::string& out_path) {
  if (out_path.empty()) {
    std::fputs(s.c_str(), stdout);
  } else {
    std::ofstream f(out_path, std::ios::binary);
    f << s;
  }
}

// Converts an engine status into a process exit code and reports errors.
bool check_rc(int rc, const std::string& what) {
  if (rc == LP_OK) return true;
  json j{{"schema", kSchemaVersion}, {"op", what}, {"error", lp_last_error()}};
  std::fputs((j.dump(2) + "\n").c_str(), stderr);
  g_exit = rc == LP_EINVAL ? 2 : 1;
  return false;
}

struct TorusHandle {
  lp_torus* t = nullptr;
  ~TorusHandle() { lp_torus_destroy(t); }
  bool create(int d, long L) { return check_rc(lp_torus_create(d, L, &t), "torus"); }
};

struct CStr {
  char* p = nullptr;
  ~CStr() { lp_free(p); }
  std::string str() const { return p ? p : ""; }
};

// One named verification, shared by `verify all` and the verify subcommands.
bool run_pathweb(int d, long L, int N, const std::string& param,
                 const std::string& check, std::uint64_t seed, long count,
                 json& results) {
  int ok = 0;
  CStr detail;
  int rc = lp_pathweb_verify(d, L, N, param.c_str(), check.c_str(), seed,
                             count, &ok, &detail.p);
  json r{{"check", "pathweb/" + check}, {"d", d}, {"L", L}, {"N", N},
         {"param", param}, {"ok", ok == 1}};
  if (ok != 1) r["detail"] = detail.str();
  results.push_back(r);
  if (rc == LP_EINVAL) return check_rc(rc, "pathweb " + check);
  if (ok != 1) g_exit = std::max(g_exit, 1);
  return ok == 1;
}

bool run_spectral(int d, long L, int N, const std::string& rho,
                  const std::string& check, double tol, json& results) {
  TorusHandle t;
  if (!t.create(d, L)) return false;
  int ok = 0;
  CStr detail;
  int rc = lp_spectral_check(t.t, N, rho.c_str(), check.c_str(), tol, &ok,
                             &detail.p);
  json r{{"check", "spectral/" + check}, {"d", d}, {"L", L}, {"N", N},
         {"rho", rho}, {"ok", ok == 1}};
  if (ok != 1) r["detail"] = detail.str();
  results.push_back(r);
  if (rc == LP_EINVAL) return check_rc(rc, "spectral " + check);
  if (ok != 1) g_exit = std::max(g_exit, 1);
  return ok == 1;
}

bool run_dimer_match(int d, long L, json& results) {
  // Backtracking vs transfer on the full torus.
  TorusHandle t;
  if (!t.create(d, L)) return false;
  CStr a, b;
  if (!check_rc(lp_dimer_count(t.t, nullptr, 0, d <= 2 ? 0 : 2, &a.p), "count") ||
      !check_rc(lp_dimer_count(t.t, nullptr, 0, 1, &b.p), "count"))
    return false;
  bool ok = a.str() == b.str();
  results.push_back(json{{"check", "dimer/agreement"}, {"d", d}, {"L", L},
                         {"count", a.str()}, {"ok", ok}});
  if (!ok) g_exit = std::max(g_exit, 1);
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dimer / lattice-permutation verification engine"};
  app.require_subcommand(1);
  std::string out_path;
  app.add_option("--out", out_path, "Write the report to this file");

  int d = 2;
  long L = 4;
  int N = 2;
  std::string rho = "0", lambda = "1", check, method = "quad", tier = "fast";
  std::uint64_t seed = 1;
  long count = 20, sweeps = 2000, therm = 200, trials = 100000,
       steps = 100000, grid = 256;
  int msum = 10;
  long site = -1;
  double tol = 1e-10;

  auto add_dl = [&](CLI::App* c) {
    c->add_option("--d", d)->required();
    c->add_option("--L", L)->required();
  };

  auto* dimer = app.add_subcommand("dimer", "Exact dimer counts and Xi");
  auto* dimer_count = dimer->add_subcommand("count", "Count perfect matchings");
  add_dl(dimer_count);
  dimer_count->add_option("--method", method, "bt|transfer|permanent");
  std::vector<long> removed;
  dimer_count->add_option("--remove", removed, "Removed site ids");
  auto* dimer_xi = dimer->add_subcommand("xi", "Monomer correlation table");
  add_dl(dimer_xi);

  auto* perm = app.add_subcommand("perm", "Lattice-permutation exact values");
  auto* perm_zf = perm->add_subcommand("zf", "Partition function Z^l");
  add_dl(perm_zf);
  perm_zf->add_option("--N", N);
  perm_zf->add_option("--rho", rho);
  auto* perm_g = perm->add_subcommand("g", "Two-point function");
  add_dl(perm_g);
  perm_g->add_option("--N", N);
  perm_g->add_option("--rho", rho);
  perm_g->add_option("--x", site, "Single displacement site id (else table)");
  auto* perm_t = perm->add_subcommand("target-law", "Walk target-point law");
  add_dl(perm_t);
  perm_t->add_option("--N", N);
  perm_t->add_option("--rho", rho);

  auto* pw = app.add_subcommand("pathweb", "Random-path model checks");
  auto* pw_v = pw->add_subcommand("verify", "Run one check");
  add_dl(pw_v);
  pw_v->add_option("--N", N);
  pw_v->add_option("--lambda", lambda);
  pw_v->add_option("--rho", rho);
  pw_v->add_option("--check", check, "components|expansion|chessboard|rp|key")
      ->required();
  pw_v->add_option("--seed", seed);
  pw_v->add_option("--count", count);

  auto* sp = app.add_subcommand("spec", "Spectral quantities and checks");
  auto* sp_il = sp->add_subcommand("il", "Lattice sum I_L(d)");
  add_dl(sp_il);
  auto* sp_up = sp->add_subcommand("upsilon", "Upsilon_L table");
  add_dl(sp_up);
  auto* sp_v = sp->add_subcommand("verify", "Run one check");
  add_dl(sp_v);
  sp_v->add_option("--N", N);
  sp_v->add_option("--rho", rho);
  sp_v->add_option("--check", check, "hf|parity|modediff|psi|infrared")
      ->required();
  sp_v->add_option("--tol", tol);

  auto* rw = app.add_subcommand("rwalk", "Expected returns r_d");
  auto* rw_r = rw->add_subcommand("r", "Estimate r_d");
  rw_r->add_option("--d", d)->required();
  rw_r->add_option("--method", method, "quad|mc");
  rw_r->add_option("--grid", grid);
  rw_r->add_option("--trials", trials);
  rw_r->add_option("--steps", steps);
  rw_r->add_option("--seed", seed);

  auto* wo = app.add_subcommand("worm", "Worm Monte Carlo");
  auto* wo_xi = wo->add_subcommand("xi", "Estimate the Xi table");
  add_dl(wo_xi);
  wo_xi->add_option("--sweeps", sweeps);
  wo_xi->add_option("--therm", therm);
  wo_xi->add_option("--seed", seed);

  auto* ver = app.add_subcommand("verify", "Verification suites");
  auto* ver_all = ver->add_subcommand("all", "Run a suite");
  ver_all->add_option("--tier", tier, "fast|full|mc");

  CLI11_PARSE(app, argc, argv);

  json out{{"schema", kSchemaVersion}};

  if (dimer_count->parsed()) {
    TorusHandle t;
    if (!t.create(d, L)) return g_exit;
    int m = method == "bt" || method == "quad" ? 0
            : method == "transfer"            ? 1
                                              : 2;
    CStr dec;
    if (!check_rc(lp_dimer_count(t.t, removed.data(), long(removed.size()), m,
                                 &dec.p), "dimer count"))
      return g_exit;
    out["op"] = "dimer count";
    out["d"] = d;
    out["L"] = L;
    out["count"] = dec.str();
    emit(out, out_path);
  } else if (dimer_xi->parsed()) {
    CStr csv;
    if (!check_rc(lp_dimer_xi_csv(d, L, &csv.p), "dimer xi")) return g_exit;
    emit_text(csv.str(), out_path);
  } else if (perm_zf->parsed()) {
    TorusHandle t;
    if (!t.create(d, L)) return g_exit;
    CStr z;
    if (!check_rc(lp_perm_partition(t.t, N, rho.c_str(), &z.p), "perm zf"))
      return g_exit;
    out["op"] = "perm zf";
    out["d"] = d;
    out["L"] = L;
    out["N"] = N;
    out["rho"] = rho;
    out["value"] = z.str();
    emit(out, out_path);
  } else if (perm_g->parsed()) {
    TorusHandle t;
    if (!t.create(d, L)) return g_exit;
    if (site >= 0) {
      long o = 0;
      if (!check_rc(lp_torus_origin(t.t, &o), "perm g")) return g_exit;
      CStr v;
      if (!check_rc(lp_perm_two_point(t.t, N, rho.c_str(), o, site, &v.p),
                    "perm g"))
        return g_exit;
      out["op"] = "perm g";
      out["value"] = v.str();
      emit(out, out_path);
    } else {
      CStr csv;
      if (!check_rc(lp_perm_g_csv(t.t, N, rho.c_str(), &csv.p), "perm g"))
        return g_exit;
      emit_text(csv.str(), out_path);
    }
  } else if (perm_t->parsed()) {
    TorusHandle t;
    if (!t.create(d, L)) return g_exit;
    CStr csv;
    if (!check_rc(lp_perm_target_law_csv(t.t, N, rho.c_str(), &csv.p),
                  "perm target-law"))
      return g_exit;
    emit_text(csv.str(), out_path);
  } else if (pw_v->parsed()) {
    json results = json::array();
    run_pathweb(d, L, N, check == "key" ? rho : lambda, check, seed, count,
                results);
    out["results"] = results;
    emit(out, out_path);
  } else if (sp_il->parsed()) {
    double il = 0, rq = 0, err = 0;
    if (!check_rc(lp_spectral_il(d, L, &il), "spec il")) return g_exit;
    json j{{"schema", kSchemaVersion}, {"op", "spec il"}, {"d", d}, {"L", L},
           {"I_L", il}};
    if (d >= 3 && lp_rwalk_quadrature(d, 256, &rq, &err) == LP_OK) {
      j["r_d_over_4d"] = rq / (4.0 * d);
      j["gap"] = il - rq / (4.0 * d);
    }
    emit(j, out_path);
  } else if (sp_up->parsed()) {
    CStr csv;
    if (!check_rc(lp_spectral_upsilon_csv(d, L, &csv.p), "spec upsilon"))
      return g_exit;
    emit_text(csv.str(), out_path);
  } else if (sp_v->parsed()) {
    json results = json::array();
    run_spectral(d, L, N, rho, check, tol, results);
    out["results"] = results;
    emit(out, out_path);
  } else if (rw_r->parsed()) {
    double v = 0, e = 0, bias = 0;
    if (method == "mc") {
      if (!check_rc(lp_rwalk_montecarlo(d, trials, steps, seed, &v, &e, &bias),
                    "rwalk mc"))
        return g_exit;
      out["method"] = "mc";
      out["tail_bias"] = bias;
    } else {
      if (!check_rc(lp_rwalk_quadrature(d, grid, &v, &e), "rwalk quad"))
        return g_exit;
      out["method"] = "quadrature";
    }
    out["op"] = "rwalk r";
    out["d"] = d;
    out["value"] = v;
    out["err"] = e;
    emit(out, out_path);
  } else if (wo_xi->parsed()) {
    CStr csv;
    if (!check_rc(lp_worm_xi_csv(d, L, sweeps, therm, seed, &csv.p), "worm xi"))
      return g_exit;
    emit_text(csv.str(), out_path);
  } else if (ver_all->parsed()) {
    json results = json::array();
    // fast: exact identities at the smallest sizes.
    run_pathweb(1, 4, 1, "1", "components", 1, 0, results);
    run_pathweb(1, 4, 2, "1/2", "components", 1, 0, results);
    run_pathweb(1, 4, 2, "1", "expansion", 2, 5, results);
    run_pathweb(1, 4, 1, "1", "chessboard", 3, 10, results);
    run_pathweb(1, 4, 1, "1", "rp", 4, 5, results);
    run_pathweb(2, 4, 2, "1/2", "key", 5, 5, results);
    for (const char* c : {"hf", "parity", "modediff", "infrared"}) {
      run_spectral(1, 4, 1, "0", c, std::string(c) == "infrared" ? 1e-9 : 1e-10,
                   results);
      run_spectral(2, 4, 2, "1", c, std::string(c) == "infrared" ? 1e-9 : 1e-10,
                   results);
    }
    run_spectral(2, 4, 2, "0", "psi", 1e-10, results);
    run_dimer_match(2, 4, results);
    {
      double lhs = 0, rhs = 0;
      int ok = 0;
      lp_rwalk_partial_sum(3, 1, 64, &lhs, &rhs, &ok);
      results.push_back(json{{"check", "rwalk/partial-sum"}, {"m", 1},
                             {"lhs", lhs}, {"rhs", rhs}, {"ok", ok == 1}});
      if (ok != 1) g_exit = std::max(g_exit, 1);
    }
    if (tier == "full" || tier == "mc") {
      run_spectral(2, 6, 2, "0", "hf", 1e-10, results);
      run_spectral(2, 6, 2, "0", "infrared", 1e-9, results);
      run_dimer_match(3, 4, results);
      double rq = 0, err = 0, il = 0;
      bool okq = lp_rwalk_quadrature(3, 256, &rq, &err) == LP_OK;
      lp_spectral_il(3, 64, &il);
      results.push_back(json{{"check", "rwalk/quadrature"},
                             {"value", rq}, {"err", err},
                             {"ok", okq && rq > 0.51 && rq < 0.52}});
      results.push_back(json{{"check", "spectral/il"}, {"L", 64}, {"I_L", il}});
      if (!(okq && rq > 0.51 && rq < 0.52)) g_exit = std::max(g_exit, 1);
    }
    if (tier == "mc") {
      double v = 0, e = 0, bias = 0;
      lp_rwalk_montecarlo(3, 20000, 20000, 7, &v, &e, &bias);
      double rq = 0, err = 0;
      lp_rwalk_quadrature(3, 256, &rq, &err);
      bool ok = std::abs(v - rq) <= 3 * e + bias + err;
      results.push_back(json{{"check", "rwalk/mc-vs-quad"}, {"mc", v},
                             {"stderr", e}, {"quad", rq}, {"ok", ok}});
      if (!ok) g_exit = std::max(g_exit, 1);
      double expo = 0, mn = 0, x1 = 0;
      if (check_rc(lp_worm_profile(2, 16, 4000, 400, 11, &expo, &mn, &x1),
                   "worm")) {
        results.push_back(json{{"check", "worm/profile"}, {"d", 2}, {"L", 16},
                               {"exponent", expo}});
      }
    }
    bool all_ok = true;
    for (const auto& r : results)
      if (r.contains("ok") && !r["ok"].get<bool>()) all_ok = false;
    out["tier"] = tier;
    out["results"] = results;
    out["ok"] = all_ok;
    emit(out, out_path);
  }
  return g_exit;
}
