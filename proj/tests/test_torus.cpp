#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <set>

#include "doctest.h"
#include "latperm/torus.hpp"

using namespace lp;

TEST_CASE("site ids and physical coordinates round trip") {
  for (auto [d, L] : {std::pair{1, 4}, {2, 6}, {3, 4}}) {
    TorusGeom g(d, L);
    CHECK(g.n_sites() == [&] { long n = 1; for (int i = 0; i < d; ++i) n *= L; return n; }());
    for (long s = 0; s < g.n_sites(); ++s) {
      Coords c = g.coords(s);
      CHECK(g.site_index(c) == s);
      for (int i = 0; i < d; ++i) {
        CHECK(c[i] > -L / 2 - (L % 2));
        CHECK(c[i] <= L / 2);
      }
      for (int i = d; i < kMaxDim; ++i) CHECK(c[i] == 0);
    }
  }
}

TEST_CASE("site_index rejects out-of-range representatives") {
  TorusGeom g(2, 6);
  CHECK_NOTHROW(g.site_index(Coords{3, -2, 0, 0}));
  CHECK_THROWS(g.site_index(Coords{-3, -2, 0, 0}));  // physical value is 3
  CHECK_THROWS(g.site_index(Coords{4, 0, 0, 0}));
}

TEST_CASE("neighbours are involutive, distinct, and adjacent") {
  for (auto [d, L] : {std::pair{2, 4}, {3, 4}}) {
    TorusGeom g(d, L);
    for (long s = 0; s < g.n_sites(); ++s) {
      auto nb = g.neighbors(s);
      REQUIRE(long(nb.size()) == 2 * d);
      std::set<long> uniq(nb.begin(), nb.end());
      CHECK(uniq.size() == nb.size());
      for (int axis = 0; axis < d; ++axis)
        for (int dir : {+1, -1}) {
          long t = g.neighbor(s, axis, dir);
          CHECK(g.neighbor(t, axis, -dir) == s);
          CHECK(g.parity(t) == 1 - g.parity(s));
        }
    }
  }
}

TEST_CASE("parity splits the torus evenly") {
  TorusGeom g(2, 6);
  long even = 0;
  for (long s = 0; s < g.n_sites(); ++s) even += 1 - g.parity(s);
  CHECK(even == g.n_sites() / 2);
  CHECK(g.parity(g.site_index(Coords{})) == 0);
}

TEST_CASE("edge ids round trip and join adjacent sites") {
  TorusGeom g(2, 6);
  CHECK(g.n_edges() == 2 * g.n_sites());
  for (long s = 0; s < g.n_sites(); ++s)
    for (int axis = 0; axis < 2; ++axis) {
      long e = g.edge_id(s, axis);
      auto [s2, a2] = g.edge_from_id(e);
      CHECK(s2 == s);
      CHECK(a2 == axis);
      CHECK(g.edge_other_end(e) == g.neighbor(s, axis, +1));
    }
}

TEST_CASE("reflection planes: count, involution, edge invariance") {
  ExtendedTorusGeom eg(2, 4);
  auto planes = all_reflection_planes(2, 4);
  CHECK(long(planes.size()) == 2 * 4);
  for (const auto& p : planes) {
    std::set<long> pos;
    for (long s = 0; s < eg.n_sites(); ++s) {
      long r = eg.reflect_site(s, p);
      CHECK(eg.reflect_site(r, p) == s);
      CHECK(eg.is_virtual(r) == eg.is_virtual(s));
      if (eg.in_positive_half(s, p)) pos.insert(s);
      CHECK(eg.in_positive_half(s, p) != eg.in_positive_half(r, p));
    }
    CHECK(long(pos.size()) == eg.n_sites() / 2);
    for (long e = 0; e < eg.n_edges(); ++e) {
      long re = eg.reflect_edge(e, p);
      CHECK(eg.reflect_edge(re, p) == e);
      CHECK(eg.is_vertical_edge(re) == eg.is_vertical_edge(e));
    }
  }
}

TEST_CASE("extended torus degrees and vertical edges") {
  ExtendedTorusGeom eg(2, 4);
  const auto& base = eg.base();
  CHECK(eg.n_sites() == 2 * base.n_sites());
  CHECK(eg.n_edges() == base.n_edges() + base.n_sites());
  for (long s = 0; s < base.n_sites(); ++s) {
    CHECK(long(eg.incident_edges(s).size()) == 2 * 2 + 1);
    CHECK(long(eg.incident_edges(eg.virtual_of(s)).size()) == 1);
    long ve = eg.vertical_edge_of(s);
    auto [a, b] = eg.edge_ends(ve);
    CHECK(((a == s && b == eg.virtual_of(s)) || (b == s && a == eg.virtual_of(s))));
    CHECK(eg.original_of(eg.virtual_of(s)) == s);
  }
}

TEST_CASE("model semantics require even L >= 4") {
  CHECK_THROWS_AS(TorusGeom(2, 5), Unsupported);
  CHECK_THROWS_AS(TorusGeom(2, 2), Unsupported);
  CHECK_NOTHROW(TorusGeom(2, 5, /*geometry_only=*/true));
  CHECK_THROWS_AS(TorusGeom(0, 4), Unsupported);
  CHECK_THROWS_AS(TorusGeom(5, 4), Unsupported);
}
