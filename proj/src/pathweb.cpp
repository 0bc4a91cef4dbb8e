// SPDX-License-Identifier: MIT
#include "latperm/pathweb.hpp"

#include <algorithm>
#include <numeric>

#include "latperm/perm.hpp"

namespace lp {
namespace {

// Site id of the displacement y - x (both original torus sites).
long disp_site(const TorusGeom& g, long x, long y) {
  Coords cx = g.coords(x), cy = g.coords(y), diff{};
  for (int i = 0; i < g.d(); ++i)
    diff[i] = g.to_phys(g.to_canon(cy[i] - cx[i]));
  return g.site_index(diff);
}

Int factorial(int n) {
  Int r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

Rat int_pow(int base, int exp) {
  Rat r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

struct Dsu {
  std::vector<int> p;
  explicit Dsu(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  int find(int a) { return p[a] == a ? a : p[a] = find(p[a]); }
  void unite(int a, int b) { p[find(a)] = find(b); }
};

uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

WebStats analyze(const ExtendedTorusGeom& g, const WebConfig& w) {
  WebStats s;
  const long n_ext = g.n_sites();
  const long n_edges = g.n_edges();
  if (long(w.m.size()) != n_edges || long(w.partner.size()) != n_edges)
    throw Unsupported("analyze: configuration size mismatch");

  s.u.assign(n_ext, 0);
  s.n_pair.assign(n_ext, 0);
  std::vector<long> link_offset(n_edges, 0);
  for (long e = 0; e < n_edges; ++e) {
    link_offset[e] = s.total_links;
    s.total_links += w.m[e];
    s.m_factorial *= factorial(w.m[e]);
  }

  // u_x, n_x and the pairing graph on links.
  Dsu dsu(s.total_links);
  std::vector<int> vert_unpaired(n_ext, 0);
  for (long e = 0; e < n_edges; ++e) {
    auto [a, b] = g.edge_ends(e);
    for (int p = 0; p < w.m[e]; ++p) {
      for (int side = 0; side < 2; ++side) {
        long v = side == 0 ? a : b;
        auto [e2, p2] = w.partner[e][p][side];
        if (e2 < 0) {
          ++s.u[v];
          if (g.is_vertical_edge(e) && !g.is_virtual(v)) ++vert_unpaired[v];
        } else {
          if (w.partner[e2][p2][0] != std::make_pair(int(e), p) &&
              w.partner[e2][p2][1] != std::make_pair(int(e), p))
            throw InternalError("analyze: asymmetric pairing");
          ++s.n_pair[v];
          dsu.unite(int(link_offset[e] + p), int(link_offset[e2] + p2));
        }
      }
    }
  }
  for (long v = 0; v < n_ext; ++v) {
    if (s.n_pair[v] % 2 != 0)
      throw InternalError("analyze: odd paired-endpoint count at a vertex");
    s.n_pair[v] /= 2;
  }

  // H support and the count of 1/2 factors.
  s.in_w1 = true;
  for (long v = 0; v < n_ext && s.in_w1; ++v) {
    if (g.is_virtual(v)) {
      if (s.n_pair[v] != 0) s.in_w1 = false;
    } else {
      if (s.n_pair[v] > 1 || s.u[v] > 2 || vert_unpaired[v] > 1)
        s.in_w1 = false;
      else if (vert_unpaired[v] == 1)
        ++s.halves;
    }
  }

  // Paths: maximal pairing-connected link sets.
  std::vector<int> comp_of(s.total_links, -1);
  std::vector<int> comp_ids;
  for (long e = 0; e < n_edges; ++e)
    for (int p = 0; p < w.m[e]; ++p) {
      int root = dsu.find(int(link_offset[e] + p));
      if (comp_of[root] < 0) {
        comp_of[root] = int(comp_ids.size());
        comp_ids.push_back(root);
      }
    }
  s.paths.assign(comp_ids.size(), PathInfo{});
  for (long e = 0; e < n_edges; ++e)
    for (int p = 0; p < w.m[e]; ++p) {
      PathInfo& pi = s.paths[comp_of[dsu.find(int(link_offset[e] + p))]];
      ++pi.n_links;
      for (int side = 0; side < 2; ++side)
        if (w.partner[e][p][side].first < 0)
          pi.open_ends.push_back(e * 2 + side);
    }
  for (PathInfo& pi : s.paths) {
    std::sort(pi.open_ends.begin(), pi.open_ends.end());
    if (pi.n_links == 1 && pi.open_ends.size() == 2)
      pi.kind = PathKind::kSegment;
    else if (pi.open_ends.empty() && pi.n_links == 2)
      pi.kind = PathKind::kDoubleLink;
    else if (pi.open_ends.empty() && pi.n_links > 2)
      pi.kind = PathKind::kLoop;
    else if (pi.open_ends.size() == 2 && pi.n_links > 1)
      pi.kind = PathKind::kWalk;
    else
      throw InternalError("analyze: path outside the four-class taxonomy");
  }
  s.n_paths = int(s.paths.size());
  return s;
}

Rat mu_weight(const WebStats& s, int N, const Rat& lambda) {
  if (!s.in_w1) return 0;
  Rat r = pow_rat(lambda, unsigned(s.total_links));
  r /= Rat(s.m_factorial);
  r /= Rat(Int(1) << s.halves);
  r *= int_pow(N, s.n_paths);
  return r;
}

WebConfig reflect_config(const ExtendedTorusGeom& g, const WebConfig& w,
                         const ReflectionPlane& plane) {
  const long n_edges = g.n_edges();
  WebConfig out;
  out.m.assign(n_edges, 0);
  out.partner.resize(n_edges);
  for (long e = 0; e < n_edges; ++e) {
    long re = g.reflect_edge(e, plane);
    out.m[re] = w.m[e];
    out.partner[re].assign(
        w.m[e], {std::make_pair(-1, -1), std::make_pair(-1, -1)});
  }
  for (long e = 0; e < n_edges; ++e) {
    long re = g.reflect_edge(e, plane);
    auto [a, b] = g.edge_ends(e);
    auto [ra, rb] = g.edge_ends(re);
    for (int p = 0; p < w.m[e]; ++p)
      for (int side = 0; side < 2; ++side) {
        long v = side == 0 ? a : b;
        int rside = g.reflect_site(v, plane) == ra ? 0 : 1;
        auto [e2, p2] = w.partner[e][p][side];
        out.partner[re][p][rside] =
            e2 < 0 ? std::make_pair(-1, -1)
                   : std::make_pair(int(g.reflect_edge(e2, plane)), p2);
      }
  }
  return out;
}

namespace {

// Depth-first enumeration of W^1 for d = 1: link counts on ring and vertical
// edges first, then one pairing choice per original vertex.  All H-support
// constraints are local to a vertex, so pruning is exact; `analyze` re-derives
// every invariant at the leaves as a cross-check.
class Enumerator {
 public:
  Enumerator(const ExtendedTorusGeom& g, const WebVisitor& visit)
      : g_(g), visit_(visit), L_(g.base().L()) {
    if (g.base().d() != 1 || (L_ != 4 && L_ != 6))
      throw Unsupported("enumerate_w1: supported sizes are d=1, L in {4,6}");
    for (int x = 0; x < L_; ++x) {
      ring_[x] = g.base().edge_id(x, 0);
      vert_[x] = g.vertical_edge_of(x);
    }
    m_.assign(g.n_edges(), 0);
    choice_.assign(L_, {-1, -1});
  }

  void run() { choose_m(0); }

 private:
  struct Endpoint {
    int edge, p, side;
  };

  int deg(int x) const {
    return m_[ring_[(x + L_ - 1) % L_]] + m_[ring_[x]] + m_[vert_[x]];
  }

  void choose_m(int x) {
    if (x == L_) {
      if (deg(0) <= 4) choose_gamma();
      return;
    }
    for (int mr = 0; mr <= 4; ++mr) {
      m_[ring_[x]] = mr;
      for (int mv = 0; mv <= 3; ++mv) {
        m_[vert_[x]] = mv;
        if (x >= 1 && deg(x) > 4) continue;
        choose_m(x + 1);
      }
    }
    m_[ring_[x]] = 0;
    m_[vert_[x]] = 0;
  }

  void choose_gamma() {
    eps_.clear();
    for (int x = 0; x < L_; ++x) {
      std::vector<Endpoint> ep;
      int left = int(ring_[(x + L_ - 1) % L_]);
      int right = int(ring_[x]), up = int(vert_[x]);
      for (int p = 0; p < m_[left]; ++p) ep.push_back({left, p, 1});
      for (int p = 0; p < m_[right]; ++p) ep.push_back({right, p, 0});
      for (int p = 0; p < m_[up]; ++p) ep.push_back({up, p, 0});
      eps_.push_back(std::move(ep));
    }
    pick_vertex(0);
  }

  void pick_vertex(int x) {
    if (x == L_) {
      emit();
      return;
    }
    const auto& ep = eps_[x];
    const int dg = int(ep.size());
    const int mv = m_[vert_[x]];
    // No pairing at x: u_x = deg, all vertical links unpaired.
    if (dg <= 2 && mv <= 1) {
      choice_[x] = {-1, -1};
      pick_vertex(x + 1);
    }
    // One pairing at x: u_x = deg - 2 <= 2 always (deg <= 4 enforced).
    for (int i = 0; i < dg; ++i)
      for (int j = i + 1; j < dg; ++j) {
        int vert_in_pair = (ep[i].edge == vert_[x]) + (ep[j].edge == vert_[x]);
        if (mv - vert_in_pair > 1) continue;
        choice_[x] = {i, j};
        pick_vertex(x + 1);
      }
    choice_[x] = {-1, -1};
  }

  void emit() {
    WebConfig w;
    w.m = m_;
    w.partner.resize(m_.size());
    for (size_t e = 0; e < m_.size(); ++e)
      w.partner[e].assign(m_[e],
                          {std::make_pair(-1, -1), std::make_pair(-1, -1)});
    for (int x = 0; x < L_; ++x) {
      auto [i, j] = choice_[x];
      if (i < 0) continue;
      const Endpoint &a = eps_[x][i], &b = eps_[x][j];
      w.partner[a.edge][a.p][a.side] = {b.edge, b.p};
      w.partner[b.edge][b.p][b.side] = {a.edge, a.p};
    }
    WebStats s = analyze(g_, w);
    if (!s.in_w1)
      throw InternalError("enumerate_w1: emitted configuration outside W^1");
    visit_(w, s);
  }

  const ExtendedTorusGeom& g_;
  const WebVisitor& visit_;
  int L_;
  std::array<long, 8> ring_{}, vert_{};
  std::vector<int> m_;
  std::vector<std::pair<int, int>> choice_;
  std::vector<std::vector<Endpoint>> eps_;
};

}  // namespace

void enumerate_w1(const ExtendedTorusGeom& g, const WebVisitor& visit) {
  Enumerator(g, visit).run();
}

// Builds the ensemble tables without materialising configurations: the same
// two-stage search as the streaming enumerator, but with a rollback
// union-find over link slots and integer counters keyed by the packed triple
// (prod m_e! * 2^halves, total links, n_paths).  The streaming enumerator and
// this builder are cross-checked against each other in the test suite.
struct EnsembleBuilder {
  using Acc = std::unordered_map<uint64_t, long long>;

  const ExtendedTorusGeom& g;
  int L, n_edges;
  std::array<int, 8> ring{}, vert{};
  std::vector<int> m;

  // Link slot = edge * 4 + label; at most 4 links per edge.
  std::array<int, 64> par{}, sz{};
  std::array<uint8_t, 64> pside{};
  std::array<uint32_t, 64> root_stamp{};
  std::array<int, 64> root_idx{};
  uint32_t stamp = 0;

  struct Endpoint {
    int slot, side, vertical;
  };
  std::array<std::array<Endpoint, 4>, 8> eps{};
  std::array<int, 8> deg{};
  std::array<int, 8> u_orig{};

  Acc tot, ell;
  std::vector<Acc> seg;
  std::map<std::pair<int, int>, Acc> walk;
  std::unordered_map<uint32_t, Acc> pats;
  long long n_leaves = 0;

  explicit EnsembleBuilder(const ExtendedTorusGeom& g_in) : g(g_in) {
    L = g.base().L();
    if (g.base().d() != 1 || (L != 4 && L != 6))
      throw Unsupported("W1Ensemble: supported sizes are d=1, L in {4,6}");
    n_edges = int(g.n_edges());
    for (int x = 0; x < L; ++x) {
      ring[x] = int(g.base().edge_id(x, 0));
      vert[x] = int(g.vertical_edge_of(x));
    }
    m.assign(n_edges, 0);
    seg.resize(n_edges);
  }

  int vdeg(int x) const {
    return m[ring[(x + L - 1) % L]] + m[ring[x]] + m[vert[x]];
  }

  void run() { choose_m(0, 1, 0); }

  void choose_m(int x, long long mfact, int t) {
    static const long long kFact[5] = {1, 1, 2, 6, 24};
    if (x == L) {
      if (vdeg(0) <= 4) start_gamma(mfact, t);
      return;
    }
    for (int mr = 0; mr <= 4; ++mr) {
      m[ring[x]] = mr;
      for (int mv = 0; mv <= 3; ++mv) {
        m[vert[x]] = mv;
        if (x >= 1 && vdeg(x) > 4) continue;
        choose_m(x + 1, mfact * kFact[mr] * kFact[mv], t + mr + mv);
      }
    }
    m[ring[x]] = 0;
    m[vert[x]] = 0;
  }

  void start_gamma(long long mfact, int t) {
    for (int e = 0; e < n_edges; ++e)
      for (int p = 0; p < m[e]; ++p) {
        int s = e * 4 + p;
        par[s] = s;
        sz[s] = 1;
        pside[s] = 0;
      }
    for (int x = 0; x < L; ++x) {
      int k = 0;
      int left = ring[(x + L - 1) % L], right = ring[x], up = vert[x];
      for (int p = 0; p < m[left]; ++p) eps[x][k++] = {left * 4 + p, 1, 0};
      for (int p = 0; p < m[right]; ++p) eps[x][k++] = {right * 4 + p, 0, 0};
      for (int p = 0; p < m[up]; ++p) eps[x][k++] = {up * 4 + p, 0, 1};
      deg[x] = k;
    }
    pick_vertex(0, mfact, t, 0);
  }

  int find(int a) const {
    while (par[a] != a) a = par[a];
    return a;
  }

  void pick_vertex(int x, long long mfact, int t, int halves) {
    if (x == L) {
      leaf(mfact, t, halves);
      return;
    }
    const int dg = deg[x];
    const int mv = m[vert[x]];
    if (dg <= 2 && mv <= 1) {
      u_orig[x] = dg;
      pick_vertex(x + 1, mfact, t, halves + (mv == 1));
    }
    for (int i = 0; i < dg; ++i)
      for (int j = i + 1; j < dg; ++j) {
        const Endpoint &a = eps[x][i], &b = eps[x][j];
        int vu = mv - a.vertical - b.vertical;
        if (vu > 1) continue;
        u_orig[x] = dg - 2;
        pside[a.slot] |= uint8_t(1 << a.side);
        pside[b.slot] |= uint8_t(1 << b.side);
        int ra = find(a.slot), rb = find(b.slot);
        int child = -1;
        if (ra != rb) {
          if (sz[ra] < sz[rb]) std::swap(ra, rb);
          par[rb] = ra;
          sz[ra] += sz[rb];
          child = rb;
        }
        pick_vertex(x + 1, mfact, t, halves + (vu == 1));
        if (child >= 0) {
          sz[par[child]] -= sz[child];
          par[child] = child;
        }
        pside[a.slot] &= uint8_t(~(1 << a.side));
        pside[b.slot] &= uint8_t(~(1 << b.side));
      }
  }

  void leaf(long long mfact, int t, int halves) {
    ++n_leaves;
    ++stamp;
    int ncomp = 0, total_open = 0;
    std::array<int, 48> clinks{}, copen_cnt{};
    std::array<std::array<int, 2>, 48> copen{};
    int open_comp = -1, n_open_comps = 0;
    for (int e = 0; e < n_edges; ++e)
      for (int p = 0; p < m[e]; ++p) {
        int s = e * 4 + p;
        int r = find(s);
        if (root_stamp[r] != stamp) {
          root_stamp[r] = stamp;
          root_idx[r] = ncomp;
          clinks[ncomp] = 0;
          copen_cnt[ncomp] = 0;
          ++ncomp;
        }
        int ci = root_idx[r];
        ++clinks[ci];
        for (int side = 0; side < 2; ++side)
          if (!(pside[s] & (1 << side))) {
            if (copen_cnt[ci] == 0) {
              ++n_open_comps;
              open_comp = ci;
            }
            if (copen_cnt[ci] < 2) copen[ci][copen_cnt[ci]] = e * 2 + side;
            ++copen_cnt[ci];
            ++total_open;
          }
      }
    uint64_t wk =
        (uint64_t(mfact) << (12 + halves)) | uint64_t(t << 6) | uint64_t(ncomp);
    ++tot[wk];
    if (total_open == 0) {
      ++ell[wk];
    } else if (n_open_comps == 1 && copen_cnt[open_comp] == 2) {
      if (clinks[open_comp] == 1) {
        ++seg[copen[open_comp][0] / 2][wk];
      } else {
        auto [lo, hi] = std::minmax(copen[open_comp][0], copen[open_comp][1]);
        ++walk[{lo, hi}][wk];
      }
    }
    uint32_t pat = 0;
    for (int x = 0; x < L; ++x)
      pat |= uint32_t(u_orig[x]) << (2 * x) |
             uint32_t(m[vert[x]]) << (2 * (L + x));
    ++pats[pat][wk];
  }
};

namespace {

void fold(W1Ensemble::Poly& poly, const EnsembleBuilder::Acc& acc) {
  for (auto [wk, count] : acc) {
    long long denom = (long long)(wk >> 12);
    int t = int((wk >> 6) & 63), p = int(wk & 63);
    poly[{t, p}] += Rat(count, denom);
  }
}

}  // namespace

W1Ensemble::W1Ensemble(const ExtendedTorusGeom& g) : g_(&g) {
  EnsembleBuilder b(g);
  b.run();
  n_configs_ = b.n_leaves;
  a_seg_.resize(g.n_edges());
  fold(total_, b.tot);
  fold(a_ell_, b.ell);
  for (long e = 0; e < g.n_edges(); ++e) fold(a_seg_[e], b.seg[e]);
  for (const auto& [key, acc] : b.walk) {
    Poly poly;
    fold(poly, acc);
    a_walk_[{DirEdge(key.first), DirEdge(key.second)}] = std::move(poly);
  }
  const int L = g.base().L();
  for (const auto& [pat, acc] : b.pats) {
    std::vector<uint8_t> u(2 * L);
    for (int x = 0; x < L; ++x) {
      u[x] = uint8_t((pat >> (2 * x)) & 3);
      u[L + x] = uint8_t((pat >> (2 * (L + x))) & 3);
    }
    Poly poly;
    fold(poly, acc);
    u_patterns_[u] = std::move(poly);
  }
}

Rat W1Ensemble::eval(const Poly& p, int N, const Rat& lambda) {
  Rat r = 0;
  for (const auto& [tp, c] : p)
    r += c * pow_rat(lambda, unsigned(tp.first)) * int_pow(N, tp.second);
  return r;
}

Rat W1Ensemble::mu_total(int N, const Rat& lambda) const {
  return eval(total_, N, lambda);
}
Rat W1Ensemble::mu_a_ell(int N, const Rat& lambda) const {
  return eval(a_ell_, N, lambda);
}
Rat W1Ensemble::mu_a_seg(long edge, int N, const Rat& lambda) const {
  return eval(a_seg_.at(edge), N, lambda);
}
Rat W1Ensemble::mu_a_walk(DirEdge a, DirEdge b, int N,
                          const Rat& lambda) const {
  auto key = std::minmax(a, b);
  auto it = a_walk_.find({key.first, key.second});
  return it == a_walk_.end() ? Rat(0) : eval(it->second, N, lambda);
}

Rat W1Ensemble::central_quantity(int N, const Rat& lambda,
                                 const std::vector<Rat>& h) const {
  if (long(h.size()) != g_->n_sites())
    throw Unsupported("central_quantity: h must index the extended torus");
  Rat z = 0;
  for (const auto& [pat, poly] : u_patterns_) {
    Rat factor = 1;
    for (size_t x = 0; x < pat.size() && factor != 0; ++x)
      for (int k = 0; k < pat[x]; ++k) factor *= h[x];
    if (factor != 0) z += eval(poly, N, lambda) * factor;
  }
  return z;
}

std::vector<Rat> W1Ensemble::phi_polynomial(int N, const Rat& lambda,
                                            const std::vector<Rat>& h) const {
  if (long(h.size()) != g_->n_sites())
    throw Unsupported("phi_polynomial: h must index the extended torus");
  std::vector<Rat> coeff;
  for (const auto& [pat, poly] : u_patterns_) {
    int deg = std::accumulate(pat.begin(), pat.end(), 0);
    if (int(coeff.size()) <= deg) coeff.resize(deg + 1, Rat(0));
    Rat factor = 1;
    for (size_t x = 0; x < pat.size() && factor != 0; ++x)
      for (int k = 0; k < pat[x]; ++k) factor *= h[x];
    if (factor != 0) coeff[deg] += eval(poly, N, lambda) * factor;
  }
  return coeff;
}

std::vector<Rat> h_from_v(const ExtendedTorusGeom& g,
                          const std::vector<Rat>& v) {
  const long n = g.base().n_sites();
  if (long(v.size()) != n)
    throw Unsupported("h_from_v: v must index the original torus");
  std::vector<Rat> h(2 * n);
  for (long x = 0; x < n; ++x) {
    h[x] = v[x];
    h[g.virtual_of(x)] = Rat(-2 * g.base().d()) * v[x];
  }
  return h;
}

std::vector<Rat> h_homogenized(const ExtendedTorusGeom& g,
                               const std::vector<Rat>& h, long x) {
  const long n = g.base().n_sites();
  std::vector<Rat> out(2 * n);
  for (long z = 0; z < n; ++z) {
    out[z] = h[x];
    out[g.virtual_of(z)] = h[g.virtual_of(x)];
  }
  return out;
}

namespace {

void fail(WebCheckReport& rep, const std::string& msg) {
  rep.ok = false;
  if (rep.detail.size() < 2000) rep.detail += msg + "\n";
}

}  // namespace

WebCheckReport verify_component_masses(const W1Ensemble& ens, int N,
                                       const Rat& lambda) {
  WebCheckReport rep;
  const ExtendedTorusGeom& g = ens.geom();
  const TorusGeom& base = g.base();
  const long n = base.n_sites();
  const Rat y_ell = partition_lambda(base, N, lambda);
  Coords zero{};
  const long o = base.site_index(zero);
  std::vector<Rat> y_disp(n);
  for (long z = 0; z < n; ++z)
    y_disp[z] = partition_lambda_xy(base, N, lambda, o, z);

  if (ens.mu_a_ell(N, lambda) != y_ell)
    fail(rep, "mu(A^ell) != Y^ell");

  for (long e = 0; e < g.n_edges(); ++e) {
    Rat expect = g.is_vertical_edge(e) ? Rat(lambda / 2 * N * y_ell)
                                       : Rat(lambda * N * y_ell);
    if (ens.mu_a_seg(e, N, lambda) != expect)
      fail(rep, "mu(A^s) mismatch at edge " + std::to_string(e));
  }

  // Every directed edge of the extended torus, inner endpoint first.
  std::vector<DirEdge> dirs;
  for (long e = 0; e < g.n_edges(); ++e) {
    dirs.push_back(e * 2 + 0);
    dirs.push_back(e * 2 + 1);
  }
  auto inner_of = [&](DirEdge de) {
    auto [a, b] = g.edge_ends(de / 2);
    return de % 2 == 0 ? b : a;  // the vertex opposite the unpaired side
  };
  for (size_t i = 0; i < dirs.size(); ++i)
    for (size_t j = i; j < dirs.size(); ++j) {
      long x = inner_of(dirs[i]), y = inner_of(dirs[j]);
      Rat expect = 0;
      if (!g.is_virtual(x) && !g.is_virtual(y)) {
        if (dirs[i] == dirs[j])
          expect = lambda * lambda / 2 * N * y_disp[o];
        else
          expect = lambda * lambda * N * y_disp[disp_site(base, x, y)];
      }
      if (ens.mu_a_walk(dirs[i], dirs[j], N, lambda) != expect)
        fail(rep, "mu(A^w) mismatch at directed edges " +
                      std::to_string(dirs[i]) + "," + std::to_string(dirs[j]));
    }
  return rep;
}

WebCheckReport polynomial_expansion_check(const W1Ensemble& ens, int N,
                                          const Rat& lambda,
                                          const std::vector<Rat>& v) {
  WebCheckReport rep;
  const ExtendedTorusGeom& g = ens.geom();
  const TorusGeom& base = g.base();
  const long n = base.n_sites();
  std::vector<Rat> h = h_from_v(g, v);
  std::vector<Rat> coeff = ens.phi_polynomial(N, lambda, h);

  const Rat y_ell = partition_lambda(base, N, lambda);
  if (coeff.empty() || coeff[0] != y_ell)
    fail(rep, "constant coefficient != Y^ell");
  for (size_t i = 1; i < coeff.size(); i += 2)
    if (coeff[i] != 0)
      fail(rep, "odd coefficient " + std::to_string(i) + " nonzero");

  // The displayed quadratic form for the phi^2 coefficient.
  Coords zero{};
  const long o = base.site_index(zero);
  std::vector<Rat> y_disp(n);
  for (long z = 0; z < n; ++z)
    y_disp[z] = partition_lambda_xy(base, N, lambda, o, z);

  Rat pair_sum = 0;
  for (long e = 0; e < base.n_edges(); ++e) {
    auto [x, axis] = base.edge_from_id(e);
    pair_sum += h[x] * h[base.neighbor(x, axis, +1)];
  }
  for (long x = 0; x < n; ++x)
    pair_sum += h[x] * h[g.virtual_of(x)] / 2;

  std::vector<Rat> s(n, Rat(0));  // sum of h over extended neighbours
  for (long x = 0; x < n; ++x) {
    for (int axis = 0; axis < base.d(); ++axis) {
      s[x] += h[base.neighbor(x, axis, +1)];
      s[x] += h[base.neighbor(x, axis, -1)];
    }
    s[x] += h[g.virtual_of(x)];
  }
  Rat walk_sum = 0;
  for (long x = 0; x < n; ++x)
    for (long y = 0; y < n; ++y)
      walk_sum += y_disp[disp_site(base, x, y)] * s[x] * s[y];

  Rat z2 = Rat(N) * lambda * y_ell * pair_sum +
           Rat(N) * lambda * lambda / 2 * walk_sum;
  Rat c2 = coeff.size() > 2 ? coeff[2] : Rat(0);
  if (c2 != z2) fail(rep, "phi^2 coefficient != Z^(2)(h)");
  return rep;
}

WebCheckReport chessboard_check(const W1Ensemble& ens, int N,
                                const Rat& lambda, const std::vector<Rat>& h,
                                double tol) {
  WebCheckReport rep;
  const ExtendedTorusGeom& g = ens.geom();
  for (const Rat& hz : h)
    if (hz > 1 || hz < -1) {
      fail(rep, "|h| <= 1 violated");
      return rep;
    }
  Rat lhs = ens.central_quantity(N, lambda, h);
  const long n = g.base().n_sites();
  bool rhs_zero = false;
  double log_rhs = 0;
  for (long x = 0; x < n; ++x) {
    Rat zx = ens.central_quantity(N, lambda, h_homogenized(g, h, x));
    if (zx < 0) {
      fail(rep, "Z(h^x) negative at x = " + std::to_string(x));
      return rep;
    }
    if (zx == 0)
      rhs_zero = true;
    else
      log_rhs += log_rat(zx);
  }
  if (lhs <= 0) return rep;  // right side is a nonnegative geometric mean
  if (rhs_zero) {
    fail(rep, "Z(h) > 0 but some Z(h^x) = 0");
    return rep;
  }
  if (log_rat(lhs) > log_rhs / double(n) + tol)
    fail(rep, "chessboard estimate violated");
  return rep;
}

namespace {

// Canonical encoding of the restriction of w to T^+ of a plane, hashed.
// Functions of this hash are exactly functions with domain T^+ that are
// blind to colours.
uint64_t restriction_hash(const ExtendedTorusGeom& g, const WebConfig& w,
                          const std::vector<char>& in_plus) {
  uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](uint64_t v) {
    h ^= v;
    h *= 1099511628211ULL;
  };
  for (long e = 0; e < g.n_edges(); ++e) {
    auto [a, b] = g.edge_ends(e);
    if (!in_plus[a] && !in_plus[b]) continue;
    mix(uint64_t(e) * 2 + 1);
    mix(uint64_t(w.m[e]));
    for (int p = 0; p < w.m[e]; ++p)
      for (int side = 0; side < 2; ++side) {
        long v = side == 0 ? a : b;
        if (!in_plus[v]) continue;  // gamma restricted to vertices in T^+
        auto [e2, p2] = w.partner[e][p][side];
        mix(uint64_t(int64_t(e2) + 2));
        mix(uint64_t(p2 + 2));
      }
  }
  return h;
}

}  // namespace

WebCheckReport reflection_positivity_check(const ExtendedTorusGeom& g, int N,
                                           const Rat& lambda, int n_funcs,
                                           uint64_t seed) {
  WebCheckReport rep;
  const auto planes = all_reflection_planes(g.base().d(), g.base().L());
  for (size_t pi = 0; pi < planes.size(); ++pi) {
    const ReflectionPlane& plane = planes[pi];
    std::vector<char> in_plus(g.n_sites(), 0);
    for (long v = 0; v < g.n_sites(); ++v)
      in_plus[v] = g.in_positive_half(v, plane);

    struct Row {
      Rat mu;
      uint64_t h_plus, h_minus;
    };
    std::vector<Row> rows;
    enumerate_w1(g, [&](const WebConfig& w, const WebStats& s) {
      WebConfig rw = reflect_config(g, w, plane);
      rows.push_back({mu_weight(s, N, lambda),
                      restriction_hash(g, w, in_plus),
                      restriction_hash(g, rw, in_plus)});
    });

    for (int t = 0; t < n_funcs; ++t) {
      uint64_t kf = splitmix64(seed ^ splitmix64(pi * 1000 + t) ^ 0x0f0f);
      uint64_t kg = splitmix64(seed ^ splitmix64(pi * 1000 + t) ^ 0xf0f0);
      auto fval = [&](uint64_t key, uint64_t hash) {
        return splitmix64(key ^ hash) & 1 ? 1 : -1;
      };
      Rat sff = 0, sfg = 0, sgf = 0, sgg = 0;
      for (const Row& r : rows) {
        int fp = fval(kf, r.h_plus), fm = fval(kf, r.h_minus);
        int gp = fval(kg, r.h_plus), gm = fval(kg, r.h_minus);
        if (fp * fm > 0)
          sff += r.mu;
        else
          sff -= r.mu;
        sfg += fp * gm > 0 ? r.mu : -r.mu;
        sgf += gp * fm > 0 ? r.mu : -r.mu;
        sgg += gp * gm > 0 ? r.mu : -r.mu;
      }
      std::string at = " (plane " + std::to_string(pi) + ", pair " +
                       std::to_string(t) + ")";
      if (sfg != sgf) fail(rep, "mu(f Theta g) != mu(g Theta f)" + at);
      if (sff < 0) fail(rep, "mu(f Theta f) < 0" + at);
      if (sgg < 0) fail(rep, "mu(g Theta g) < 0" + at);
      if (sfg * sfg > sff * sgg) fail(rep, "Cauchy-Schwarz violated" + at);
    }
  }
  return rep;
}

WebCheckReport key_inequality_check(const TorusGeom& g,
                                    const std::vector<Rat>& g_table,
                                    const std::vector<Rat>& v) {
  WebCheckReport rep;
  const long n = g.n_sites();
  if (long(v.size()) != n || long(g_table.size()) != n)
    throw Unsupported("key_inequality_check: size mismatch");
  std::vector<Rat> lap(n, Rat(0));
  for (long x = 0; x < n; ++x)
    for (long y : g.neighbors(x)) lap[x] += v[y] - v[x];
  Rat lhs = 0;
  for (long x = 0; x < n; ++x)
    for (long y = 0; y < n; ++y)
      lhs += g_table[disp_site(g, x, y)] * lap[x] * lap[y];
  Rat rhs = 0;
  for (long e = 0; e < g.n_edges(); ++e) {
    auto [x, axis] = g.edge_from_id(e);
    Rat dv = v[g.neighbor(x, axis, +1)] - v[x];
    rhs += dv * dv;
  }
  if (lhs > rhs) fail(rep, "Key Inequality violated");
  return rep;
}

WebCheckReport key_inequality_check(const TorusGeom& g, int N, const Rat& rho,
                                    const std::vector<Rat>& v) {
  return key_inequality_check(g, two_point_table(g, N, rho), v);
}

}  // namespace lp
