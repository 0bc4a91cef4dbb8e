// SPDX-License-Identifier: MIT
#include "latperm/dimer.hpp"

#include <algorithm>
#include <array>
#include <numeric>

namespace lp {
namespace {

// ---------------------------------------------------------------------------
// Backtracking counter
// ---------------------------------------------------------------------------

struct Backtracker {
  const TorusGeom& g;
  std::vector<char> covered;
  std::vector<std::vector<long>> nbrs;
  long n_free = 0;
  Int count = 0;

  explicit Backtracker(const TorusGeom& g_) : g(g_), covered(g.n_sites(), 0) {
    nbrs.reserve(g.n_sites());
    for (long s = 0; s < g.n_sites(); ++s) nbrs.push_back(g.neighbors(s));
  }

  void dfs(long from) {
    // Find the lowest-index uncovered site.
    long s = from;
    while (s < g.n_sites() && covered[s]) ++s;
    if (s == g.n_sites()) {
      ++count;
      return;
    }
    covered[s] = 1;
    for (long t : nbrs[s]) {
      if (covered[t]) continue;
      covered[t] = 1;
      dfs(s + 1);
      covered[t] = 0;
    }
    covered[s] = 0;
  }
};

// ---------------------------------------------------------------------------
// d = 2 profile transfer
// ---------------------------------------------------------------------------

// Scan sites row by row with an L-bit coverage frontier.  The vertical wrap
// (row L-1 back to row 0) is closed by enumerating the seam subset S of
// columns carrying a wrap dimer; the horizontal wrap of each row is carried
// as a single pending bit while the row is scanned.
Int transfer_2d(const TorusGeom& g, const std::vector<char>& removed) {
  const int L = g.L();
  const long n_states = 1L << (L + 1);  // frontier mask + hwrap-pending bit
  auto removed_at = [&](int r, int c) {
    Coords x{};
    x[0] = g.to_phys(r);
    x[1] = g.to_phys(c);
    return removed[g.site_index(x)] != 0;
  };

  Int total = 0;
  std::vector<Int> cur(n_states), nxt(n_states);
  for (long seam = 0; seam < (1L << L); ++seam) {
    std::fill(cur.begin(), cur.end(), Int(0));
    cur[seam] = 1;  // row-0 sites in S are pre-covered from below (wrap)
    for (int r = 0; r < L; ++r) {
      for (int c = 0; c < L; ++c) {
        std::fill(nxt.begin(), nxt.end(), Int(0));
        const bool rm = removed_at(r, c);
        for (long st = 0; st < n_states; ++st) {
          if (cur[st] == 0) continue;
          const Int& w = cur[st];
          const long mask = st & ((1L << L) - 1);
          const long hw = st >> L;
          const bool cov = (mask >> c) & 1;
          const long base = (mask & ~(1L << c)) | (hw << L);
          if (r == L - 1 && ((seam >> c) & 1)) {
            // Seam columns of the last row must consume their wrap dimer,
            // which already covered (0, c) at initialisation.
            if (!rm && !cov) nxt[base] += w;
            continue;
          }
          if (rm) {
            if (!cov) nxt[base] += w;  // removed sites stay uncovered
            continue;
          }
          if (cov) {
            nxt[base] += w;
            continue;
          }
          // Uncovered: place a dimer now.
          if (c == 0) nxt[base | (1L << L)] += w;  // defer to h-wrap
          if (c + 1 < L && !((mask >> (c + 1)) & 1) && !removed_at(r, c + 1))
            nxt[base | (1L << (c + 1))] += w;  // right
          if (c == L - 1 && hw) nxt[base & ~(1L << L)] += w;  // close h-wrap
          if (r + 1 < L) nxt[base | (1L << c)] += w;  // down
        }
        std::swap(cur, nxt);
      }
      // End of row: the horizontal wrap must be resolved.
      for (long st = 1L << L; st < n_states; ++st) cur[st] = 0;
    }
    // Row L-1 seam columns: a state survives only if it consumed every seam
    // dimer, which is guaranteed by construction; frontier must be empty.
    total += cur[0];
  }
  return total;
}

// ---------------------------------------------------------------------------
// d = 3, L = 4: layer transfer with a trace over vertical-dimer profiles
// ---------------------------------------------------------------------------

struct LayerTables {
  // pm[X] = number of perfect matchings of the 4x4 torus layer restricted to
  // the free-site subset X (0 if X touches a removed site).
  std::vector<uint32_t> pm;
  uint32_t free_mask = 0xffff;
};

LayerTables build_layer(const std::array<std::array<int, 4>, 16>& nbr,
                        uint32_t removed_mask) {
  LayerTables t;
  t.free_mask = 0xffffu & ~removed_mask;
  t.pm.assign(1u << 16, 0);
  t.pm[0] = 1;
  for (uint32_t X = 1; X < (1u << 16); ++X) {
    if (X & removed_mask) continue;
    const int v = __builtin_ctz(X);
    uint64_t acc = 0;
    for (int w : nbr[v]) {
      if ((X >> w) & 1) acc += t.pm[X & ~((1u << v) | (1u << w))];
    }
    t.pm[X] = uint32_t(acc);
  }
  return t;
}

// Sparse rows of the layer transfer matrix T[a][b] = pm[free & ~(a|b)] for
// disjoint a, b within the free mask.
struct SparseT {
  std::vector<std::vector<std::pair<uint32_t, uint32_t>>> row;  // (b, value)
};

SparseT build_sparse(const LayerTables& t) {
  SparseT s;
  s.row.resize(1u << 16);
  for (uint32_t a = 0; a < (1u << 16); ++a) {
    if (a & ~t.free_mask) continue;
    const uint32_t c = t.free_mask & ~a;
    // Enumerate b over subsets of c.
    uint32_t b = 0;
    while (true) {
      const uint32_t val = t.pm[c & ~b];
      if (val) s.row[a].push_back({b, val});
      if (b == c) break;
      b = (b - c) & c;  // next subset of c
    }
  }
  return s;
}

Int transfer_3d_L4(const TorusGeom& g, const std::vector<char>& removed) {
  // Layer index z = canonical third coordinate; within-layer site id
  // = 4*r + c from the first two canonical coordinates.
  std::array<std::array<int, 4>, 16> nbr{};
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) {
      nbr[4 * r + c] = {4 * r + ((c + 1) & 3), 4 * r + ((c + 3) & 3),
                        4 * (((r + 1) & 3)) + c, 4 * (((r + 3) & 3)) + c};
    }
  std::array<uint32_t, 4> rm{};
  for (long s = 0; s < g.n_sites(); ++s) {
    if (!removed[s]) continue;
    const Coords x = g.coords(s);
    const int r = g.to_canon(x[0]);
    const int c = g.to_canon(x[1]);
    const int z = g.to_canon(x[2]);
    rm[z] |= 1u << (4 * r + c);
  }

  // Distinct layer types.
  std::array<LayerTables, 4> layer;
  std::array<SparseT, 4> T;
  for (int z = 0; z < 4; ++z) {
    bool found = false;
    for (int z2 = 0; z2 < z; ++z2) {
      if (rm[z2] == rm[z]) {
        layer[z] = layer[z2];
        T[z] = T[z2];
        found = true;
        break;
      }
    }
    if (!found) {
      layer[z] = build_layer(nbr, rm[z]);
      T[z] = build_sparse(layer[z]);
    }
  }

  // count = sum_{s1,s3} A[s1][s3] * B[s3][s1] with A = T1*T2 composed over
  // s2, B = T3*T0 composed over s0; computed row-by/column-by to keep memory
  // at two dense 2^16 vectors.  Profile s_z = vertical dimers between layers
  // z-1 and z; both endpoints must be free.
  unsigned __int128 grand = 0;
  std::vector<uint64_t> rowA(1u << 16), colB(1u << 16);
  for (uint32_t s1 = 0; s1 < (1u << 16); ++s1) {
    if (s1 & ~(layer[0].free_mask & layer[1].free_mask)) continue;
    if (T[1].row[s1].empty() && T[0].row[s1].empty()) continue;
    std::fill(rowA.begin(), rowA.end(), 0);
    std::fill(colB.begin(), colB.end(), 0);
    bool anyA = false, anyB = false;
    for (const auto& [s2, v12] : T[1].row[s1]) {
      if (s2 & ~layer[2].free_mask) continue;
      for (const auto& [s3, v23] : T[2].row[s2]) {
        rowA[s3] += uint64_t(v12) * v23;
        anyA = true;
      }
    }
    // B[s3][s1] = sum_{s0} T3[s3][s0] T0[s0][s1]; iterate s0 from T0 rows of
    // s1 (T0 symmetric), then s3 from T3 rows of s0 (T3 symmetric).
    for (const auto& [s0, v01] : T[0].row[s1]) {
      if (s0 & ~layer[3].free_mask) continue;
      for (const auto& [s3, v30] : T[3].row[s0]) {
        colB[s3] += uint64_t(v01) * v30;
        anyB = true;
      }
    }
    if (!anyA || !anyB) continue;
    const uint32_t lim = layer[2].free_mask & layer[3].free_mask;
    for (uint32_t s3 = 0; s3 <= lim; ++s3) {
      if (rowA[s3] && colB[s3])
        grand += (unsigned __int128)rowA[s3] * colB[s3];
    }
  }
  Int out = 0;
  out = Int(uint64_t(grand >> 64));
  out <<= 64;
  out += uint64_t(grand);
  return out;
}

std::vector<char> removed_flags(const TorusGeom& g, const std::vector<long>& removed) {
  std::vector<char> f(g.n_sites(), 0);
  for (long s : removed) {
    if (s < 0 || s >= g.n_sites()) throw Unsupported("removed site id out of range");
    if (f[s]) throw Unsupported("removed site listed twice");
    f[s] = 1;
  }
  return f;
}

}  // namespace

Int count_covers_backtracking(const TorusGeom& g, const std::vector<long>& removed) {
  auto f = removed_flags(g, removed);
  if ((g.n_sites() - long(removed.size())) % 2 != 0) return 0;
  Backtracker bt(g);
  bt.covered = f;
  bt.dfs(0);
  return bt.count;
}

Int count_covers_transfer(const TorusGeom& g, const std::vector<long>& removed) {
  auto f = removed_flags(g, removed);
  if ((g.n_sites() - long(removed.size())) % 2 != 0) return 0;
  if (g.d() == 2) return transfer_2d(g, f);
  if (g.d() == 3) {
    if (g.L() != 4)
      throw Unsupported("count_covers_transfer: d = 3 supported for L = 4 only");
    return transfer_3d_L4(g, f);
  }
  throw Unsupported("count_covers_transfer: d must be 2 or 3");
}

Int count_covers_permanent(const TorusGeom& g, const std::vector<long>& removed) {
  auto f = removed_flags(g, removed);
  std::vector<long> rows, cols;  // even-sublattice rows, odd columns
  for (long s = 0; s < g.n_sites(); ++s) {
    if (f[s]) continue;
    (g.parity(s) == 0 ? rows : cols).push_back(s);
  }
  if (rows.size() != cols.size()) return 0;
  const int n = int(rows.size());
  if (n == 0) return 1;
  if (n > 32) throw Unsupported("count_covers_permanent: more than 64 free sites");

  // For each column, the rows it meets (its free neighbours).
  std::vector<int> col_of(g.n_sites(), -1);
  for (int j = 0; j < n; ++j) col_of[cols[j]] = j;
  std::vector<std::vector<int>> col_rows(n);
  for (int i = 0; i < n; ++i) {
    for (long t : g.neighbors(rows[i])) {
      const int j = t < long(col_of.size()) ? col_of[t] : -1;
      if (j >= 0) col_rows[j].push_back(i);
    }
  }

  // Ryser's inclusion-exclusion formula over column subsets in Gray-code
  // order, maintaining the row sums and the product of their nonzero values
  // incrementally; n <= 32 keeps every product within 128-bit range (row
  // sums are at most 2d, so |product| <= (2d)^32).
  std::vector<int64_t> rsum(n, 0);
  int zeros = n;
  __int128 prod = 1;  // product of the nonzero row sums
  auto apply = [&](int j, int sgn) {
    for (int i : col_rows[j]) {
      const int64_t old = rsum[i];
      rsum[i] += sgn;
      if (old == 0) {
        --zeros;
        prod *= rsum[i];
      } else if (rsum[i] == 0) {
        ++zeros;
        prod /= old;
      } else {
        prod /= old;
        prod *= rsum[i];
      }
    }
  };
  __int128 acc = 0;
  uint64_t gray = 0;
  const uint64_t limit = (n == 32) ? 0x100000000ull : (1ull << n);
  for (uint64_t k = 1; k < limit; ++k) {
    const uint64_t ng = k ^ (k >> 1);
    const uint64_t diff = ng ^ gray;
    const int j = __builtin_ctzll(diff);
    apply(j, (ng >> j) & 1 ? +1 : -1);
    gray = ng;
    if (zeros == 0) {
      if (__builtin_popcountll(gray) % 2 == n % 2)
        acc += prod;
      else
        acc -= prod;
    }
  }
  const bool neg = acc < 0;
  unsigned __int128 mag = neg ? (unsigned __int128)(-acc) : (unsigned __int128)acc;
  Int out = Int(uint64_t(mag >> 64));
  out <<= 64;
  out += uint64_t(mag);
  return neg ? -out : out;
}

XiTable monomer_correlation(int d, int L) {
  TorusGeom g(d, L);
  if (d > 2) throw Unsupported("monomer_correlation: exact table needs d <= 2");
  const bool use_transfer = (d == 2 && L >= 6);
  auto count = [&](const std::vector<long>& rem) {
    return use_transfer ? count_covers_transfer(g, rem)
                        : count_covers_backtracking(g, rem);
  };
  XiTable t{g, std::vector<Rat>(g.n_sites(), Rat(0))};
  const Int denom = count({});
  if (denom == 0) throw InternalError("monomer_correlation: no covers");
  Coords origin{};
  const long o = g.site_index(origin);
  for (long x = 0; x < g.n_sites(); ++x) {
    if (x == o || g.parity(x) == 0) continue;  // origin is even
    t.xi[x] = Rat(count({o, x}), denom);
  }
  return t;
}

}  // namespace lp
