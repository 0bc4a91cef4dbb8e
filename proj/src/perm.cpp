// SPDX-License-Identifier: MIT
#include "latperm/perm.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "latperm/dimer.hpp"

namespace lp {
namespace {

long origin_site(const TorusGeom& g) {
  Coords o{};
  return g.site_index(o);
}

// Depth-first enumeration of closed configurations on the free sites.  Each
// loop is built once, rooted at its lowest site; both orientations of loops
// of length >= 3 arise from the two admissible first steps, double edges
// exactly once.
struct Enumerator {
  const TorusGeom& g;
  const ConfigVisitor& visit;
  long cap;
  long visited = 0;
  std::vector<char> used;
  LoopConfig pi;

  Enumerator(const TorusGeom& g_, const ConfigVisitor& v, long cap_)
      : g(g_), visit(v), cap(cap_), used(g.n_sites(), 0) {
    pi.succ.assign(g.n_sites(), -1);
  }

  void emit() {
    if (++visited > cap) throw Unsupported("enumeration cap exceeded");
    visit(pi);
  }

  void closed_from(long s0) {
    long s = s0;
    while (s < g.n_sites() && used[s]) ++s;
    if (s == g.n_sites()) {
      emit();
      return;
    }
    // Monomer.
    used[s] = 1;
    ++pi.monomers;
    closed_from(s + 1);
    --pi.monomers;
    // Loop or double edge rooted at s; all later sites of the cycle exceed s.
    for (long t : g.neighbors(s)) {
      if (t <= s || used[t]) continue;
      used[t] = 1;
      pi.succ[s] = t;
      pi.edges += 1;
      extend_cycle(s, t, 2);
      pi.edges -= 1;
      pi.succ[s] = -1;
      used[t] = 0;
    }
    used[s] = 0;
  }

  void extend_cycle(long root, long cur, long len) {
    for (long t : g.neighbors(cur)) {
      if (t == root) {
        // Close: double edge (len 2) or loop (even len >= 4).
        pi.succ[cur] = root;
        pi.edges += 1;
        pi.components += 1;
        closed_from(root + 1);
        pi.components -= 1;
        pi.edges -= 1;
        pi.succ[cur] = -1;
      } else if (t > root && !used[t]) {
        used[t] = 1;
        pi.succ[cur] = t;
        pi.edges += 1;
        extend_cycle(root, t, len + 1);
        pi.edges -= 1;
        pi.succ[cur] = -1;
        used[t] = 0;
      }
    }
  }

  // Walk x -> y (x != y), then close off the rest.
  void walk_then_closed(long x, long y) {
    used[x] = 1;
    extend_walk(x, y);
    used[x] = 0;
  }

  void extend_walk(long cur, long y) {
    for (long t : g.neighbors(cur)) {
      if (used[t]) continue;
      used[t] = 1;
      pi.succ[cur] = t;
      pi.edges += 1;
      if (t == y) {
        closed_from(0);
      } else {
        extend_walk(t, y);
      }
      pi.edges -= 1;
      pi.succ[cur] = -1;
      used[t] = 0;
    }
  }
};

bool enumeration_feasible(const TorusGeom& g) {
  return (g.d() == 1 && g.L() <= 14) || (g.d() == 2 && g.L() <= 4);
}

bool dp_feasible(const TorusGeom& g) { return g.d() <= 2; }

Rat partition_enum_closed(const TorusGeom& g, int N, const Rat& rho) {
  Rat total = 0;
  const Rat half_n(N, 2);
  enumerate_omega_ell(g, [&](const LoopConfig& pi) {
    total += pow_rat(rho, unsigned(pi.monomers)) *
             pow_rat(half_n, unsigned(pi.components));
  });
  return total;
}

Rat partition_enum_directed(const TorusGeom& g, int N, const Rat& rho, long x, long y) {
  Rat total = 0;
  const Rat half_n(N, 2);
  enumerate_omega_xy(g, x, y, [&](const LoopConfig& pi) {
    total += pow_rat(rho, unsigned(pi.monomers)) *
             pow_rat(half_n, unsigned(pi.components));
  });
  return total;
}

// Canonical representative of x - o under the symmetries fixing o (coordinate
// sign flips and permutations), used to reuse transfer-DP results.
Coords canonical_displacement(const TorusGeom& g, long x) {
  Coords c = g.coords(x);
  std::vector<int> v(c.begin(), c.begin() + g.d());
  for (int& a : v) {
    a = std::abs(g.to_phys(g.to_canon(a)));  // fold to 0..L/2
    a = std::min(a, g.L() - a);
  }
  std::sort(v.begin(), v.end(), std::greater<int>());
  Coords out{};
  std::copy(v.begin(), v.end(), out.begin());
  return out;
}

}  // namespace

void enumerate_omega_ell(const TorusGeom& g, const ConfigVisitor& visit, long cap) {
  Enumerator e(g, visit, cap);
  e.closed_from(0);
}

void enumerate_omega_xy(const TorusGeom& g, long x, long y,
                        const ConfigVisitor& visit, long cap) {
  Enumerator e(g, visit, cap);
  if (x == y) {
    e.used[x] = 1;
    e.pi.monomers = 1;
    e.closed_from(0);
  } else {
    e.walk_then_closed(x, y);
  }
}

std::string check_invariants(const TorusGeom& g, const LoopConfig& pi,
                             std::optional<std::pair<long, long>> walk) {
  const long n = g.n_sites();
  std::vector<int> indeg(n, 0);
  long edges = 0;
  for (long s = 0; s < n; ++s) {
    const long t = pi.succ[s];
    if (t < 0) continue;
    auto nb = g.neighbors(s);
    if (std::find(nb.begin(), nb.end(), t) == nb.end())
      return "succ target is not a neighbour";
    ++indeg[t];
    ++edges;
  }
  if (edges != pi.edges) return "edge count mismatch";
  long monomers = 0, comps = 0;
  std::vector<char> seen(n, 0);
  const long wx = walk ? walk->first : -1;
  const long wy = walk ? walk->second : -1;
  for (long s = 0; s < n; ++s) {
    if (indeg[s] > 1) return "in-degree exceeds 1";
    if (walk && wx != wy) {
      if (s == wx && !(pi.succ[s] >= 0 && indeg[s] == 0))
        return "walk source degree wrong";
      if (s == wy && !(pi.succ[s] < 0 && indeg[s] == 1))
        return "walk target degree wrong";
      if (s == wx || s == wy) continue;
    }
    if ((pi.succ[s] >= 0) != (indeg[s] == 1)) return "unbalanced vertex";
    if (pi.succ[s] < 0) ++monomers;
  }
  if (walk && wx == wy && pi.succ[wx] >= 0) return "degenerate walk site not monomer";
  if (monomers != pi.monomers) return "monomer count mismatch";
  // Trace the walk first so the component scan sees only closed cycles.
  if (walk && wx != wy) {
    long cur = wx;
    while (cur >= 0 && !seen[cur]) {
      seen[cur] = 1;
      cur = pi.succ[cur];
    }
  }
  // Count closed components and check their lengths.
  for (long s = 0; s < n; ++s) {
    if (seen[s] || pi.succ[s] < 0) continue;
    long len = 0, cur = s;
    while (!seen[cur]) {
      seen[cur] = 1;
      cur = pi.succ[cur];
      ++len;
      if (cur < 0) return "open chain in closed sector";
    }
    if (cur != s) return "rho-path not a cycle";
    if (len != 2 && (len < 4 || len % 2 != 0)) return "illegal loop length";
    ++comps;
  }
  if (comps != pi.components) return "component count mismatch";
  return {};
}

Rat partition_ell(const TorusGeom& g, int N, const Rat& rho) {
  if (enumeration_feasible(g)) return partition_enum_closed(g, N, rho);
  if (dp_feasible(g)) return detail::partition_dp(g, N, rho, 0, -1);
  throw Unsupported("partition_ell: lattice too large for exact evaluation");
}

Rat partition_directed(const TorusGeom& g, int N, const Rat& rho, long x, long y) {
  if (enumeration_feasible(g)) return partition_enum_directed(g, N, rho, x, y);
  if (dp_feasible(g)) {
    // Translate so that x sits at the origin.
    if (x == y) return detail::partition_dp(g, N, rho, 2, -1);
    Coords cx = g.coords(x), cy = g.coords(y), diff{};
    for (int i = 0; i < g.d(); ++i)
      diff[i] = g.to_phys(g.to_canon(cy[i] - cx[i]));
    return detail::partition_dp(g, N, rho, 1, g.site_index(diff));
  }
  throw Unsupported("partition_directed: lattice too large for exact evaluation");
}

Rat two_point(const TorusGeom& g, int N, const Rat& rho, long x, long y) {
  const Rat zl = partition_ell(g, N, rho);
  if (zl == 0) throw Unsupported("two_point: vanishing closed partition function");
  return partition_directed(g, N, rho, x, y) / zl;
}

std::vector<Rat> two_point_table(const TorusGeom& g, int N, const Rat& rho) {
  const long o = origin_site(g);
  const Rat zl = partition_ell(g, N, rho);
  if (zl == 0) throw Unsupported("two_point_table: vanishing partition function");
  std::vector<Rat> out(g.n_sites());
  std::map<Coords, Rat> cache;
  for (long x = 0; x < g.n_sites(); ++x) {
    const Coords key = canonical_displacement(g, x);
    auto it = cache.find(key);
    if (it == cache.end()) {
      const long rep = g.site_index(key);
      Rat v = (rep == o) ? partition_directed(g, N, rho, o, o)
                         : partition_directed(g, N, rho, o, rep);
      it = cache.emplace(key, v / zl).first;
    }
    out[x] = it->second;
  }
  return out;
}

Rat partition_lambda(const TorusGeom& g, int N, const Rat& lambda) {
  if (lambda <= 0) throw Unsupported("partition_lambda: lambda must be positive");
  return pow_rat(lambda, unsigned(g.n_sites())) * partition_ell(g, N, 1 / lambda);
}

Rat partition_lambda_xy(const TorusGeom& g, int N, const Rat& lambda, long x, long y) {
  if (lambda <= 0) throw Unsupported("partition_lambda: lambda must be positive");
  // Y(x,y) = sum over Omega_{x,y} of lambda^{#directed edges} (N/2)^L.  For
  // x != y every configuration has #edges + #monomers = L^d - 1 (the walk
  // covers one more site than it has edges); for x = y the walk is degenerate
  // and x itself is one of the M monomers, so #edges + #monomers = L^d.
  unsigned covered = unsigned(g.n_sites() - (x == y ? 0 : 1));
  return pow_rat(lambda, covered) * partition_directed(g, N, 1 / lambda, x, y);
}

std::vector<Rat> target_law(const TorusGeom& g, int N, const Rat& rho) {
  std::vector<Rat> tab = two_point_table(g, N, rho);
  Rat total = 0;
  for (const Rat& v : tab) total += v;
  if (total <= 0) throw Unsupported("target_law: total weight not positive");
  for (Rat& v : tab) v /= total;
  return tab;
}

CheckReport bijection_check_dimers(int d, int L) {
  TorusGeom g(d, L);
  CheckReport rep;
  const long n = g.n_sites();
  const long o = origin_site(g);

  // Enumerate covers as partner arrays.
  std::vector<std::vector<long>> covers;
  {
    std::vector<long> partner(n, -1);
    std::function<void(long)> rec = [&](long s0) {
      long s = s0;
      while (s < n && partner[s] >= 0) ++s;
      if (s == n) {
        covers.push_back(partner);
        return;
      }
      for (long t : g.neighbors(s)) {
        if (partner[t] >= 0) continue;
        partner[s] = t;
        partner[t] = s;
        rec(s + 1);
        partner[s] = partner[t] = -1;
      }
    };
    rec(0);
  }

  // Superpose two covers into a fully-packed closed configuration.  The loop
  // orientation convention: at the lowest site of each component, the red
  // (second) cover provides the outgoing edge.
  auto superpose = [&](const std::vector<long>& blue, const std::vector<long>& red) {
    std::vector<long> succ(n, -1);
    std::vector<char> seen(n, 0);
    for (long s = 0; s < n; ++s) {
      if (seen[s]) continue;
      long cur = s;
      bool use_red = true;
      do {
        seen[cur] = 1;
        const long nxt = use_red ? red[cur] : blue[cur];
        succ[cur] = nxt;
        cur = nxt;
        use_red = !use_red;
      } while (cur != s);
    }
    return succ;
  };

  // Pi^2: covers x covers -> fully-packed Omega^ell.
  std::set<std::vector<long>> images;
  for (const auto& blue : covers)
    for (const auto& red : covers) images.insert(superpose(blue, red));
  const long pairs = long(covers.size()) * long(covers.size());
  if (long(images.size()) != pairs) {
    rep.ok = false;
    rep.detail += "Pi2 not injective; ";
  }
  long fully_packed = 0;
  std::set<std::vector<long>> omega_fp;
  enumerate_omega_ell(g, [&](const LoopConfig& pi) {
    if (pi.monomers == 0) {
      ++fully_packed;
      omega_fp.insert(pi.succ);
    }
  });
  if (fully_packed != pairs || images != omega_fp) {
    rep.ok = false;
    rep.detail += "Pi2 image does not exhaust {M=0}; ";
  }

  // Pi^1 with z = e_1: (cover, cover of T minus {o,z}) -> walk configs.
  Coords ez{};
  ez[0] = 1;
  const long z = g.site_index(ez);
  std::vector<std::vector<long>> covers_oz;
  {
    std::vector<long> partner(n, -1);
    partner[o] = o;  // removed
    partner[z] = z;
    std::function<void(long)> rec = [&](long s0) {
      long s = s0;
      while (s < n && partner[s] >= 0) ++s;
      if (s == n) {
        covers_oz.push_back(partner);
        return;
      }
      for (long t : g.neighbors(s)) {
        if (partner[t] >= 0) continue;
        partner[s] = t;
        partner[t] = s;
        rec(s + 1);
        partner[s] = partner[t] = -1;
      }
    };
    rec(0);
  }
  std::set<std::vector<long>> images1;
  for (const auto& blue : covers) {
    for (const auto& red : covers_oz) {
      // Walk: leave o along blue, then alternate red/blue until reaching z.
      std::vector<long> succ(n, -1);
      std::vector<char> on_walk(n, 0);
      long cur = o;
      bool use_blue = true;
      while (true) {
        on_walk[cur] = 1;
        if (cur == z) break;
        const long nxt = use_blue ? blue[cur] : red[cur];
        succ[cur] = nxt;
        cur = nxt;
        use_blue = !use_blue;
      }
      // Remaining components, same convention (red out at lowest site).
      std::vector<char> seen = on_walk;
      for (long s = 0; s < n; ++s) {
        if (seen[s]) continue;
        long c2 = s;
        bool use_red = true;
        do {
          seen[c2] = 1;
          const long nxt = use_red ? red[c2] : blue[c2];
          succ[c2] = nxt;
          c2 = nxt;
          use_red = !use_red;
        } while (c2 != s);
      }
      images1.insert(succ);
    }
  }
  const long pairs1 = long(covers.size()) * long(covers_oz.size());
  if (long(images1.size()) != pairs1) {
    rep.ok = false;
    rep.detail += "Pi1 not injective; ";
  }
  std::set<std::vector<long>> omega_oz_fp;
  enumerate_omega_xy(g, o, z, [&](const LoopConfig& pi) {
    if (pi.monomers == 0) omega_oz_fp.insert(pi.succ);
  });
  if (images1 != omega_oz_fp) {
    rep.ok = false;
    rep.detail += "Pi1 image does not exhaust {M=0}; ";
  }
  if (rep.ok)
    rep.detail = "pairs2=" + std::to_string(pairs) +
                 " pairs1=" + std::to_string(pairs1) + " both bijective";
  return rep;
}

CheckReport monotonicity_check(const TorusGeom& g, int N) {
  CheckReport rep;
  const std::vector<Rat> G = two_point_table(g, N, Rat(0));
  const Rat bound(1, g.d() * N);
  for (long x = 0; x < g.n_sites(); ++x) {
    if (g.parity(x) == 1 && G[x] > bound) {
      rep.ok = false;
      rep.detail += "bound violated at site " + std::to_string(x) + "; ";
    }
  }
  for (int axis = 0; axis < g.d(); ++axis) {
    Rat prev;
    bool have_prev = false;
    for (int m = 1; 2 * m <= g.L(); m += 2) {
      Coords c{};
      c[axis] = m;
      const Rat cur = G[g.site_index(c)];
      if (have_prev && cur > prev) {
        rep.ok = false;
        rep.detail += "chain violated on axis " + std::to_string(axis) + "; ";
      }
      prev = cur;
      have_prev = true;
    }
  }
  if (rep.ok) rep.detail = "monotone chain and 1/(dN) bound hold";
  return rep;
}

}  // namespace lp
