// Transfer evaluation of the lattice-permutation partition functions on
// d in {1,2} tori.  Works in the undirected representation: a configuration
// is an edge subset whose components are cycles (weight N: the two loop
// orientations), isolated edges (weight N/2: the double edge) and monomers
// (weight rho), plus optionally one open self-avoiding walk o -> y
// (weight 1).  The scan is row-major with a frontier of dangling edge
// "strands"; strand connectivity behind the frontier is tracked as a partial
// pairing so cycle closures and walk completion are recognised exactly.
//
// SPDX-License-Identifier: MIT
#include <array>
#include <cstring>
#include <unordered_map>

#include "latperm/perm.hpp"

namespace lp {
namespace detail {
namespace {

constexpr int kMaxSlots = 16;

// Slot encoding: 0 empty; 1 iso-pending (single edge that must terminate
// alone at its far endpoint, weight N/2 there); 2 walk strand (other end of
// its path already terminated at o or y); 3 + 2*partner + len1 for a path
// with both ends dangling.
enum : uint8_t { kEmpty = 0, kIso = 1, kWalk = 2, kPairBase = 3 };

using Key = std::array<uint8_t, kMaxSlots>;

struct KeyHash {
  size_t operator()(const Key& k) const {
    uint64_t a, b;
    std::memcpy(&a, k.data(), 8);
    std::memcpy(&b, k.data() + 8, 8);
    uint64_t h = a * 0x9e3779b97f4a7c15ull;
    h ^= b + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    return size_t(h * 0xbf58476d1ce4e5b9ull);
  }
};

template <class V>
using StateMap = std::unordered_map<Key, V, KeyHash>;

// Weight policies.  RatPolicy handles any rational rho exactly.  ScaledPolicy
// (rho in {0,1} only) tracks value * 2^(n_sites/2) as an unsigned 128-bit
// integer: every term is N^loops * N^iso * 2^(S - iso) with iso <= S, so each
// iso closure (multiply by N, halve) stays integral term by term.
struct RatPolicy {
  using V = Rat;
  Rat rho;
  int N;
  V one() const { return Rat(1); }
  void mul_rho(V& v) const { v *= rho; }
  void mul_loop(V& v) const { v *= N; }
  void mul_iso(V& v) const { v *= Rat(N, 2); }
  bool rho_zero() const { return rho == 0; }
  Rat finish(const V& v) const { return v; }
};
struct ScaledPolicy {
  using V = unsigned __int128;
  bool rho_is_zero;
  int N;
  unsigned shift;  // n_sites / 2
  V one() const { return V(1) << shift; }
  void mul_rho(V& v) const { (void)v; }  // rho == 1 (rho == 0 is pruned)
  void mul_loop(V& v) const { v *= unsigned(N); }
  void mul_iso(V& v) const { v = v * unsigned(N) >> 1; }
  bool rho_zero() const { return rho_is_zero; }
  Rat finish(const V& v) const {
    Int num = Int(uint64_t(v >> 64));
    num <<= 64;
    num += uint64_t(v);
    return Rat(num, Int(1) << shift);
  }
};

inline bool is_pair(uint8_t v) { return v >= kPairBase; }
inline int pair_partner(uint8_t v) { return (v - kPairBase) >> 1; }
inline bool pair_len1(uint8_t v) { return (v - kPairBase) & 1; }
inline uint8_t make_pair_slot(int partner, bool len1) {
  return uint8_t(kPairBase + 2 * partner + (len1 ? 1 : 0));
}

template <class Policy>
struct Dp {
  using V = typename Policy::V;
  Policy pol;
  const TorusGeom& g;
  int L;
  int d;
  int mode;        // 0 closed, 1 walk, 2 forced monomer at o
  int yr = -1, yc = -1;

  int slot_v(int c) const { return d == 2 ? c : -1; }
  int slot_h() const { return d == 2 ? L : 0; }
  int slot_wrap() const { return d == 2 ? L + 1 : 1; }
  int slot_seam(int c) const { return L + 2 + c; }
  int n_slots() const { return d == 2 ? 2 * L + 2 : 2; }

  Dp(const TorusGeom& g_, const Policy& pol_, int mode_, long y)
      : pol(pol_), g(g_), L(g_.L()), d(g_.d()), mode(mode_) {
    if (mode == 1) {
      const Coords cy = g.coords(y);
      yr = d == 2 ? g.to_canon(cy[0]) : 0;
      yc = g.to_canon(cy[d == 2 ? 1 : 0]);
      if (yr == 0 && yc == 0) throw InternalError("walk target equals origin");
    }
  }

  // Transition of one site; emits successor states into `out`.
  void site_step(int r, int c, const Key& key, const V& w, StateMap<V>& out) {
    const bool at_o = (r == 0 && c == 0);
    const bool at_y = (mode == 1 && r == yr && c == yc);
    const bool walk_end = (mode == 1 && (at_o || at_y));
    const bool forced_monomer = (mode == 2 && at_o);

    // Mandatory incoming strands.
    int ins[4];
    int n_in = 0;
    if (d == 2) {
      if (key[slot_v(c)]) ins[n_in++] = slot_v(c);
      if (c > 0 && key[slot_h()]) ins[n_in++] = slot_h();
      if (c == L - 1 && key[slot_wrap()]) ins[n_in++] = slot_wrap();
      if (r == L - 1 && key[slot_seam(c)]) ins[n_in++] = slot_seam(c);
    } else {
      if (c > 0 && key[slot_h()]) ins[n_in++] = slot_h();
      if (c == L - 1 && key[slot_wrap()]) ins[n_in++] = slot_wrap();
    }
    if (n_in > 2) return;

    // Available outgoing slots (up to 3: down, right and the row wrap).
    int outs[3];
    int n_out = 0;
    if (d == 2) {
      if (r < L - 1) outs[n_out++] = slot_v(c);
      if (c < L - 1) outs[n_out++] = slot_h();
      if (c == 0) outs[n_out++] = slot_wrap();
    } else {
      if (c < L - 1) outs[n_out++] = slot_h();
      if (c == 0) outs[n_out++] = slot_wrap();
    }
    auto add = [&](const Key& k, const V& v) {
      auto [it, fresh] = out.try_emplace(k, v);
      if (!fresh) it->second += v;
    };

    // Degree 0: monomer (weight rho); o and y must be walk ends in mode 1.
    if (n_in == 0 && !walk_end && !pol.rho_zero()) {
      V v = w;
      pol.mul_rho(v);
      add(key, v);
    }
    if (forced_monomer) return;  // no other option at a forced monomer

    // Degree 1, consume one incoming.
    if (n_in == 1) {
      const int a = ins[0];
      const uint8_t sa = key[a];
      Key k = key;
      k[a] = kEmpty;
      if (sa == kIso) {
        if (!walk_end) {
          V v = w;
          pol.mul_iso(v);
          add(k, v);
        }
      } else if (sa == kWalk) {
        if (walk_end) add(k, w);
      } else {
        const int p = pair_partner(sa);
        if (walk_end) {
          k[p] = kWalk;
          add(k, w);
        } else if (pair_len1(sa)) {
          k[p] = kIso;
          add(k, w);
        }
      }
    }
    // Degree 1, open one new edge.
    if (n_in == 0) {
      for (int i = 0; i < n_out; ++i) {
        Key k = key;
        k[outs[i]] = walk_end ? kWalk : kIso;
        add(k, w);
      }
    }
    if (walk_end) return;  // o and y have degree exactly 1

    // Degree 2, join two incoming.
    if (n_in == 2) {
      const int a = ins[0], b = ins[1];
      const uint8_t sa = key[a], sb = key[b];
      if (sa == kIso || sb == kIso) return;
      Key k = key;
      k[a] = k[b] = kEmpty;
      if (sa == kWalk && sb == kWalk) {
        add(k, w);  // walk completed through this site
      } else if (sa == kWalk || sb == kWalk) {
        const uint8_t sp = (sa == kWalk) ? sb : sa;
        k[pair_partner(sp)] = kWalk;
        add(k, w);
      } else {
        const int pa = pair_partner(sa), pb = pair_partner(sb);
        if (pa == b) {
          V v = w;
          pol.mul_loop(v);
          add(k, v);  // cycle closed
        } else {
          k[pa] = make_pair_slot(pb, false);
          k[pb] = make_pair_slot(pa, false);
          add(k, w);
        }
      }
      return;
    }
    // Degree 2, extend one incoming into one outgoing.
    if (n_in == 1) {
      const int a = ins[0];
      const uint8_t sa = key[a];
      if (sa == kIso) return;
      for (int i = 0; i < n_out; ++i) {
        Key k = key;
        k[a] = kEmpty;
        if (sa == kWalk) {
          k[outs[i]] = kWalk;
        } else {
          const int p = pair_partner(sa);
          k[outs[i]] = make_pair_slot(p, false);
          k[p] = make_pair_slot(outs[i], false);
        }
        add(k, w);
      }
      return;
    }
    // Degree 2, open two new edges.
    for (int i = 0; i < n_out; ++i) {
      for (int j = i + 1; j < n_out; ++j) {
        Key k = key;
        k[outs[i]] = make_pair_slot(outs[j], false);
        k[outs[j]] = make_pair_slot(outs[i], false);
        add(k, w);
      }
    }
  }

  Rat run() {
    V total{};
    const int n_seams = (d == 2) ? (1 << L) : 1;
    for (int seam = 0; seam < n_seams; ++seam) {
      StateMap<V> cur;
      Key init{};
      for (int j = 0; d == 2 && j < L; ++j) {
        if ((seam >> j) & 1) {
          init[slot_v(j)] = make_pair_slot(slot_seam(j), true);
          init[slot_seam(j)] = make_pair_slot(slot_v(j), true);
        }
      }
      cur.emplace(init, pol.one());
      const int rows = (d == 2) ? L : 1;
      for (int r = 0; r < rows && !cur.empty(); ++r) {
        for (int c = 0; c < L && !cur.empty(); ++c) {
          StateMap<V> nxt;
          nxt.reserve(cur.size() * 2);
          for (const auto& [key, w] : cur) site_step(r, c, key, w, nxt);
          cur = std::move(nxt);
        }
      }
      Key empty{};
      auto it = cur.find(empty);
      if (it != cur.end()) total += it->second;
    }
    return pol.finish(total);
  }
};

}  // namespace

Rat partition_dp(const TorusGeom& g, int N, const Rat& rho, int mode, long y) {
  if (g.d() > 2) throw Unsupported("partition_dp: d must be 1 or 2");
  if (rho == 0 || rho == 1) {
    ScaledPolicy pol{rho == 0, N, unsigned(g.n_sites() / 2)};
    Dp<ScaledPolicy> dp(g, pol, mode, y);
    return dp.run();
  }
  RatPolicy pol{rho, N};
  Dp<RatPolicy> dp(g, pol, mode, y);
  return dp.run();
}

}  // namespace detail
}  // namespace lp
