#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "latperm/dimer.hpp"
#include "latperm/worm.hpp"

using namespace lp;

TEST_CASE("deterministic in the seed") {
  TorusGeom g(2, 4);
  WormResult a = worm_run(g, 2000, 200, 42);
  WormResult b = worm_run(g, 2000, 200, 42);
  CHECK(a.hist == b.hist);
  CHECK(a.xi_hat == b.xi_hat);
  WormResult c = worm_run(g, 2000, 200, 43);
  CHECK(a.hist != c.hist);
}

TEST_CASE("estimator support and anchor") {
  TorusGeom g(2, 6);
  WormResult r = worm_run(g, 5000, 500, 7);
  long o = g.site_index(Coords{});
  Coords e1{};
  e1[0] = 1;
  CHECK(r.xi_hat[g.site_index(e1)] == doctest::Approx(0.25));  // 1/(2d) anchor
  CHECK(r.xi_hat[o] == 0.0);
  for (long x = 0; x < g.n_sites(); ++x)
    if (g.parity(x) == 0) {
      CHECK(r.xi_hat[x] == 0.0);
      CHECK(r.hist[x] == 0);
    }
  CHECK(r.open_steps > 0);
  CHECK(r.closed_visits > 0);
  CHECK(r.batches == 20);
}

TEST_CASE("matches the exact monomer correlation within errors") {
  XiTable exact = monomer_correlation(2, 6);
  const TorusGeom& g = exact.geom;
  WormResult r = worm_run(g, 40000, 2000, 11);
  for (long x = 0; x < g.n_sites(); ++x) {
    if (g.parity(x) == 0) continue;
    double truth = double(exact.xi[x]);
    double dev = std::abs(r.xi_hat[x] - truth);
    CHECK_MESSAGE(dev <= 4 * r.se[x] + 1e-12,
                  "site ", x, " dev ", dev, " se ", r.se[x]);
  }
}

TEST_CASE("axis decay profile") {
  TorusGeom g(2, 32);
  WormResult r = worm_run(g, 60000, 3000, 5);
  DecayProfile p = decay_profile(g, r);
  REQUIRE(!p.n.empty());
  CHECK(p.n.front() == 1);
  for (size_t i = 0; i < p.n.size(); ++i) CHECK(p.n[i] % 2 == 1);
  CHECK(p.xi.front() == doctest::Approx(0.25));
  // Slow power-law decay in d = 2; exponent near -1/2.
  CHECK(p.exponent > -0.8);
  CHECK(p.exponent < -0.2);
  CHECK(p.min_value > 0);
}

TEST_CASE("stationarity: uniform over the 272 covers of the 4x4 torus") {
  TorusGeom g(2, 4);
  auto rep = stationarity_check(g, 200000, 2000, 3, 272);
  CHECK_MESSAGE(rep.ok, rep.detail);
}

TEST_CASE("domain restrictions") {
  CHECK_THROWS_AS(worm_run(TorusGeom(1, 6), 100, 10, 1), Unsupported);
  TorusGeom g(2, 4);
  CHECK_THROWS_AS(worm_run(g, 100, 10, 1, /*batches=*/5), Unsupported);
}
