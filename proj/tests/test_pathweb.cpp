#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <map>

#include "doctest.h"
#include "latperm/pathweb.hpp"
#include "latperm/perm.hpp"

using namespace lp;

namespace {
const ExtendedTorusGeom& geom4() {
  static ExtendedTorusGeom g(1, 4);
  return g;
}
const W1Ensemble& ens4() {
  static W1Ensemble e(geom4());
  return e;
}
}  // namespace

TEST_CASE("enumeration size and taxonomy invariants") {
  const ExtendedTorusGeom& g = geom4();
  long count = 0;
  std::map<PathKind, long> kinds;
  enumerate_w1(g, [&](const WebConfig& w, const WebStats& s) {
    ++count;
    REQUIRE(s.in_w1);
    long links = 0, open_ends = 0;
    for (const auto& p : s.paths) {
      links += p.n_links;
      open_ends += long(p.open_ends.size() == 2 && p.kind != PathKind::kLoop &&
                                p.kind != PathKind::kDoubleLink
                            ? 2
                            : 0);
      ++kinds[p.kind];
    }
    CHECK(links == s.total_links);
    CHECK(long(s.paths.size()) == s.n_paths);
    long u_total = 0;
    for (int ux : s.u) u_total += ux;
    CHECK(u_total == open_ends);
    if ((count & 0xfff) == 0) {  // spot-check the from-scratch analysis
      WebStats again = analyze(g, w);
      CHECK(again.in_w1);
      CHECK(again.total_links == s.total_links);
      CHECK(again.n_paths == s.n_paths);
      CHECK(again.u == s.u);
    }
  });
  CHECK(count == 744654);
  CHECK(kinds[PathKind::kLoop] > 0);
  CHECK(kinds[PathKind::kWalk] > 0);
  CHECK(kinds[PathKind::kSegment] > 0);
  CHECK(kinds[PathKind::kDoubleLink] > 0);
}

TEST_CASE("ensemble totals agree with a direct re-accumulation") {
  const ExtendedTorusGeom& g = geom4();
  const W1Ensemble& ens = ens4();
  CHECK(ens.n_configs() == 744654);
  for (int N : {1, 2})
    for (Rat lam : {Rat(1), Rat(1, 2)}) {
      Rat total = 0;
      enumerate_w1(g, [&](const WebConfig&, const WebStats& s) {
        total += mu_weight(s, N, lam);
      });
      CHECK(total == ens.mu_total(N, lam));
    }
}

TEST_CASE("component identities across N and lambda") {
  for (int N : {1, 2})
    for (Rat lam : {Rat(1), Rat(1, 2), Rat(2)}) {
      auto rep = verify_component_masses(ens4(), N, lam);
      CHECK_MESSAGE(rep.ok, rep.detail);
    }
}

TEST_CASE("even polynomial expansion in the field strength") {
  const ExtendedTorusGeom& g = geom4();
  std::vector<Rat> v(g.base().n_sites());
  v[0] = Rat(1, 2);
  v[1] = Rat(-1);
  v[2] = Rat(0);
  v[3] = Rat(3, 4);
  for (int N : {1, 2}) {
    auto rep = polynomial_expansion_check(ens4(), N, Rat(1), v);
    CHECK_MESSAGE(rep.ok, rep.detail);
  }
  auto poly = ens4().phi_polynomial(2, Rat(1), h_from_v(g, v));
  CHECK(poly[0] == ens4().mu_a_ell(2, Rat(1)));
  for (size_t k = 1; k < poly.size(); k += 2) CHECK(poly[k] == 0);
}

TEST_CASE("central quantity at the all-ones field equals the full mass") {
  std::vector<Rat> ones(geom4().n_sites(), Rat(1));
  CHECK(ens4().central_quantity(2, Rat(1), ones) == ens4().mu_total(2, Rat(1)));
}

TEST_CASE("chessboard estimate") {
  const ExtendedTorusGeom& g = geom4();
  std::vector<Rat> h(g.n_sites());
  for (long s = 0; s < g.n_sites(); ++s) h[s] = Rat((s * 37 % 9) - 4, 4);
  for (int N : {1, 2}) {
    auto rep = chessboard_check(ens4(), N, Rat(1), h);
    CHECK_MESSAGE(rep.ok, rep.detail);
  }
}

TEST_CASE("reflection positivity") {
  auto rep = reflection_positivity_check(geom4(), 1, Rat(1), 6, 2026);
  CHECK_MESSAGE(rep.ok, rep.detail);
}

TEST_CASE("key inequality for assorted test vectors") {
  TorusGeom g(2, 4);
  auto table = two_point_table(g, 1, Rat(1));
  std::vector<Rat> v(g.n_sites());
  for (long s = 0; s < g.n_sites(); ++s) v[s] = Rat((s * 13 % 11) - 5);
  auto rep = key_inequality_check(g, table, v);
  CHECK_MESSAGE(rep.ok, rep.detail);
  // Constant v annihilates both sides.
  std::vector<Rat> c(g.n_sites(), Rat(7));
  CHECK(key_inequality_check(g, table, c).ok);
}
