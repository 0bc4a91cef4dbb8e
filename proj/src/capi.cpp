#include "latperm.h"

#include <cstdlib>
#include <cstring>
#include <random>
#include <string>
#include <vector>

#include "latperm/dimer.hpp"
#include "latperm/pathweb.hpp"
#include "latperm/perm.hpp"
#include "latperm/report.hpp"
#include "latperm/rwalk.hpp"
#include "latperm/spectral.hpp"
#include "latperm/torus.hpp"
#include "latperm/worm.hpp"

struct lp_torus {
  lp::TorusGeom g;
};

namespace {

thread_local std::string g_err;

char* dup_str(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

template <class F>
int guarded(F&& f) {
  try {
    return f();
  } catch (const lp::Unsupported& e) {
    g_err = e.what();
    return LP_EINVAL;
  } catch (const std::exception& e) {
    g_err = e.what();
    return LP_EINTERNAL;
  }
}

int finish_check(bool ok, const std::string& detail, int* out_ok,
                 char** out_detail) {
  if (out_ok) *out_ok = ok ? 1 : 0;
  if (out_detail) *out_detail = dup_str(detail);
  if (!ok) g_err = detail;
  return ok ? LP_OK : LP_ECHECKFAIL;
}

// Seeded random rational in [-bound, bound] with small denominators.
lp::Rat rand_rat(std::mt19937_64& rng, long bound) {
  long den = long(rng() % 4) + 1;
  long num = long(rng() % std::uint64_t(2 * bound * den + 1)) - bound * den;
  return lp::Rat(num, den);
}

}  // namespace

extern "C" {

const char* lp_last_error(void) { return g_err.c_str(); }

void lp_free(void* p) { std::free(p); }

int lp_torus_create(int d, long L, lp_torus** out) {
  return guarded([&] {
    if (!out) throw lp::Unsupported("lp_torus_create: null output");
    *out = new lp_torus{lp::TorusGeom(d, int(L))};
    return LP_OK;
  });
}

void lp_torus_destroy(lp_torus* t) { delete t; }

int lp_torus_sites(const lp_torus* t, long* out) {
  return guarded([&] {
    if (!t || !out) throw lp::Unsupported("lp_torus_sites: null argument");
    *out = t->g.n_sites();
    return LP_OK;
  });
}

int lp_torus_origin(const lp_torus* t, long* out) {
  return guarded([&] {
    if (!t || !out) throw lp::Unsupported("lp_torus_origin: null argument");
    *out = t->g.site_index(lp::Coords{});
    return LP_OK;
  });
}

int lp_dimer_count(const lp_torus* t, const long* removed, long n_removed,
                   int method, char** out_decimal) {
  return guarded([&] {
    if (!t || !out_decimal) throw lp::Unsupported("lp_dimer_count: null argument");
    std::vector<long> rem(removed, removed + n_removed);
    lp::Int c;
    switch (method) {
      case 0: c = lp::count_covers_backtracking(t->g, rem); break;
      case 1: c = lp::count_covers_transfer(t->g, rem); break;
      case 2: c = lp::count_covers_permanent(t->g, rem); break;
      default: throw lp::Unsupported("lp_dimer_count: unknown method");
    }
    *out_decimal = dup_str(c.str());
    return LP_OK;
  });
}

int lp_dimer_xi_csv(int d, long L, char** out_csv) {
  return guarded([&] {
    if (!out_csv) throw lp::Unsupported("lp_dimer_xi_csv: null output");
    lp::XiTable xi = lp::monomer_correlation(d, int(L));
    lp::TorusGeom g(d, int(L));
    *out_csv = dup_str(lp::table_csv(g, xi.xi));
    return LP_OK;
  });
}

int lp_perm_partition(const lp_torus* t, int N, const char* rho, char** out_rat) {
  return guarded([&] {
    if (!t || !rho || !out_rat) throw lp::Unsupported("lp_perm_partition: null argument");
    *out_rat = dup_str(lp::rat_str(lp::partition_ell(t->g, N, lp::parse_rat(rho))));
    return LP_OK;
  });
}

int lp_perm_two_point(const lp_torus* t, int N, const char* rho, long x,
                      long y, char** out_rat) {
  return guarded([&] {
    if (!t || !rho || !out_rat) throw lp::Unsupported("lp_perm_two_point: null argument");
    *out_rat = dup_str(lp::rat_str(lp::two_point(t->g, N, lp::parse_rat(rho), x, y)));
    return LP_OK;
  });
}

int lp_perm_g_csv(const lp_torus* t, int N, const char* rho, char** out_csv) {
  return guarded([&] {
    if (!t || !rho || !out_csv) throw lp::Unsupported("lp_perm_g_csv: null argument");
    *out_csv = dup_str(
        lp::table_csv(t->g, lp::two_point_table(t->g, N, lp::parse_rat(rho))));
    return LP_OK;
  });
}

int lp_perm_target_law_csv(const lp_torus* t, int N, const char* rho,
                           char** out_csv) {
  return guarded([&] {
    if (!t || !rho || !out_csv)
      throw lp::Unsupported("lp_perm_target_law_csv: null argument");
    *out_csv = dup_str(
        lp::table_csv(t->g, lp::target_law(t->g, N, lp::parse_rat(rho))));
    return LP_OK;
  });
}

int lp_pathweb_verify(int d, long L, int N, const char* param,
                      const char* check, uint64_t seed, long count,
                      int* out_ok, char** out_detail) {
  return guarded([&] {
    if (!param || !check) throw lp::Unsupported("lp_pathweb_verify: null argument");
    const lp::Rat p = lp::parse_rat(param);
    const std::string what = check;
    std::mt19937_64 rng(seed);
    bool ok = true;
    std::string detail;
    auto absorb = [&](const lp::WebCheckReport& r) {
      ok = ok && r.ok;
      if (!r.ok && detail.size() < 4000) detail += r.detail;
    };
    if (what == "key") {
      lp::TorusGeom g(d, int(L));
      for (long i = 0; i < count; ++i) {
        std::vector<lp::Rat> v(g.n_sites());
        for (auto& vx : v) vx = lp::Rat(long(rng() % 21) - 10);
        absorb(lp::key_inequality_check(g, N, p, v));
      }
      return finish_check(ok, detail, out_ok, out_detail);
    }
    lp::ExtendedTorusGeom eg(d, int(L));
    if (what == "rp") {
      absorb(lp::reflection_positivity_check(eg, N, p, int(count), seed));
      return finish_check(ok, detail, out_ok, out_detail);
    }
    lp::W1Ensemble ens(eg);
    if (what == "components") {
      absorb(lp::verify_component_masses(ens, N, p));
    } else if (what == "expansion") {
      for (long i = 0; i < count; ++i) {
        std::vector<lp::Rat> v(eg.base().n_sites());
        for (auto& vx : v) vx = rand_rat(rng, 3);
        absorb(lp::polynomial_expansion_check(ens, N, p, v));
      }
    } else if (what == "chessboard") {
      for (long i = 0; i < count; ++i) {
        std::vector<lp::Rat> h(eg.n_sites());
        for (auto& hx : h) hx = lp::Rat(long(rng() % 9) - 4, 4);  // |h| <= 1
        absorb(lp::chessboard_check(ens, N, p, h));
      }
    } else {
      throw lp::Unsupported("lp_pathweb_verify: unknown check");
    }
    return finish_check(ok, detail, out_ok, out_detail);
  });
}

int lp_spectral_check(const lp_torus* t, int N, const char* rho,
                      const char* check, double tol, int* out_ok,
                      char** out_detail) {
  return guarded([&] {
    if (!t || !rho || !check) throw lp::Unsupported("lp_spectral_check: null argument");
    std::vector<lp::Rat> G = lp::two_point_table(t->g, N, lp::parse_rat(rho));
    const std::string what = check;
    lp::SpecReport r;
    if (what == "hf")
      r = lp::high_frequency_check(t->g, G, tol);
    else if (what == "parity")
      r = lp::parity_symmetry_check(t->g, G, tol);
    else if (what == "modediff")
      r = lp::mode_difference_identity(t->g, G, tol);
    else if (what == "psi")
      r = lp::psi_symmetrisation_check(t->g, G, tol);
    else if (what == "infrared")
      r = lp::infrared_check(t->g, G, tol);
    else
      throw lp::Unsupported("lp_spectral_check: unknown check");
    return finish_check(r.ok, r.detail, out_ok, out_detail);
  });
}

int lp_spectral_il(int d, long L, double* out) {
  return guarded([&] {
    if (!out) throw lp::Unsupported("lp_spectral_il: null output");
    *out = lp::i_l(d, L);
    return LP_OK;
  });
}

int lp_spectral_upsilon_csv(int d, long L, char** out_csv) {
  return guarded([&] {
    if (!out_csv) throw lp::Unsupported("lp_spectral_upsilon_csv: null output");
    lp::TorusGeom g(d, int(L));
    *out_csv = dup_str(lp::table_csv(g, lp::upsilon_l(d, L)));
    return LP_OK;
  });
}

int lp_spectral_spectrum_csv(const lp_torus* t, int N, const char* rho,
                             char** out_csv) {
  return guarded([&] {
    if (!t || !rho || !out_csv)
      throw lp::Unsupported("lp_spectral_spectrum_csv: null argument");
    std::vector<lp::Rat> G = lp::two_point_table(t->g, N, lp::parse_rat(rho));
    std::vector<double> f(G.size());
    for (size_t i = 0; i < G.size(); ++i) f[i] = double(G[i]);
    *out_csv = dup_str(lp::spectrum_csv(t->g, lp::dft(t->g, f)));
    return LP_OK;
  });
}

int lp_rwalk_quadrature(int d, long grid_m, double* out_value, double* out_err) {
  return guarded([&] {
    if (!out_value) throw lp::Unsupported("lp_rwalk_quadrature: null output");
    lp::WalkEstimate e = lp::r_quadrature(d, grid_m);
    *out_value = e.value;
    if (out_err) *out_err = e.err;
    return LP_OK;
  });
}

int lp_rwalk_montecarlo(int d, long trials, long max_steps, uint64_t seed,
                        double* out_value, double* out_stderr,
                        double* out_tail_bias) {
  return guarded([&] {
    if (!out_value) throw lp::Unsupported("lp_rwalk_montecarlo: null output");
    lp::WalkEstimate e = lp::r_montecarlo(d, trials, max_steps, seed);
    *out_value = e.value;
    if (out_stderr) *out_stderr = e.err;
    if (out_tail_bias) *out_tail_bias = e.tail_bias;
    return LP_OK;
  });
}

int lp_rwalk_partial_sum(int d, int m, long grid_m, double* out_lhs,
                         double* out_rhs, int* out_ok) {
  return guarded([&] {
    lp::PartialSumReport r = lp::partial_sum_identity(d, m, grid_m);
    if (out_lhs) *out_lhs = r.lhs;
    if (out_rhs) *out_rhs = r.rhs;
    if (out_ok) *out_ok = r.ok ? 1 : 0;
    if (!r.ok) {
      g_err = r.detail;
      return LP_ECHECKFAIL;
    }
    return LP_OK;
  });
}

int lp_worm_xi_csv(int d, long L, long sweeps, long therm, uint64_t seed,
                   char** out_csv) {
  return guarded([&] {
    if (!out_csv) throw lp::Unsupported("lp_worm_xi_csv: null output");
    lp::TorusGeom g(d, int(L));
    lp::WormResult r = lp::worm_run(g, sweeps, therm, seed);
    *out_csv = dup_str(lp::table_csv(g, r.xi_hat, r.se));
    return LP_OK;
  });
}

int lp_worm_profile(int d, long L, long sweeps, long therm, uint64_t seed,
                    double* out_exponent, double* out_min_value,
                    double* out_xi_e1) {
  return guarded([&] {
    lp::TorusGeom g(d, int(L));
    lp::WormResult r = lp::worm_run(g, sweeps, therm, seed);
    lp::DecayProfile p = lp::decay_profile(g, r);
    if (out_exponent) *out_exponent = p.exponent;
    if (out_min_value) *out_min_value = p.min_value;
    if (out_xi_e1) *out_xi_e1 = p.xi.empty() ? 0.0 : p.xi.front();
    return LP_OK;
  });
}

}  // extern "C"
