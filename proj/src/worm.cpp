#include "latperm/worm.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <unordered_map>

namespace lp {

namespace {

// Chain state: a perfect matching with either zero defects (closed sector)
// or a tail/head monomer pair (open sector).  `pdir` caches, for each
// matched site, the directed-neighbour index pointing at its partner, so the
// head displacement can be updated with neighbour-table lookups only.
struct Chain {
  const TorusGeom& g;
  long n;
  int deg;                       // 2d
  std::vector<long> nbr;         // n x 2d neighbour table
  std::vector<long> partner;     // -1 for a monomer
  std::vector<int> pdir;
  std::mt19937_64 rng;

  bool open = false;
  long tail = 0, head = 0;
  long origin = 0;
  long disp = 0;  // site id of the displacement head - tail

  Chain(const TorusGeom& geom, std::uint64_t seed) : g(geom), rng(seed) {
    n = g.n_sites();
    deg = 2 * g.d();
    origin = g.site_index(Coords{});
    nbr.resize(n * deg);
    for (long x = 0; x < n; ++x) {
      int j = 0;
      for (int a = 0; a < g.d(); ++a)
        for (int s : {+1, -1}) nbr[x * deg + j++] = g.neighbor(x, a, s);
    }
    // Initial cover: brick pairing along the first axis (L is even).
    partner.assign(n, -1);
    pdir.assign(n, 0);
    for (long x = 0; x < n; ++x) {
      if (partner[x] >= 0) continue;
      long y = nbr[x * deg + 0];  // +e_1
      partner[x] = y;
      partner[y] = x;
      pdir[x] = 0;  // +e_1
      pdir[y] = 1;  // -e_1
    }
  }

  // One elementary move; returns true if the state is open afterwards.
  bool step() {
    if (!open) {
      long t = long(rng() % std::uint64_t(n));
      long h = partner[t];
      disp = nbr[origin * deg + pdir[t]];  // displacement of h from t
      partner[t] = partner[h] = -1;
      tail = t;
      head = h;
      open = true;
      return true;
    }
    int r = int(rng() % std::uint64_t(deg));
    long v = nbr[head * deg + r];
    if (v == tail) {
      partner[head] = tail;
      partner[tail] = head;
      pdir[head] = r;
      pdir[tail] = r ^ 1;  // opposite direction
      open = false;
      return false;
    }
    long w = partner[v];
    int vdir = pdir[v];  // direction v -> w
    partner[v] = head;
    partner[head] = v;
    pdir[head] = r;
    pdir[v] = r ^ 1;
    partner[w] = -1;
    // head moves h -> v -> w; apply the same two steps to disp.
    disp = nbr[nbr[disp * deg + r] * deg + vdir];
    head = w;
    return true;
  }
};

}  // namespace

WormResult worm_run(const TorusGeom& g, long sweeps, long therm,
                    std::uint64_t seed, int batches) {
  if (g.L() < 4 || g.L() % 2 != 0)
    throw Unsupported("worm_run: need even L >= 4");
  if (g.d() < 2 || g.d() > 3) throw Unsupported("worm_run: need d in {2,3}");
  if (batches < 20) throw Unsupported("worm_run: need >= 20 batches");
  if (sweeps < batches) throw Unsupported("worm_run: too few sweeps");
  Chain c(g, seed);
  const long n = g.n_sites();
  const double inv2d = 1.0 / double(2 * g.d());
  Coords e1c{};
  e1c[0] = 1;
  const long e1 = g.site_index(e1c);

  for (long s = 0; s < therm * n; ++s) c.step();

  WormResult res;
  res.d = g.d();
  res.L = g.L();
  res.batches = batches;
  res.hist.assign(n, 0);
  std::vector<std::vector<double>> batch_xi;
  std::vector<std::uint64_t> bh(n, 0);
  const long moves_per_batch = (sweeps / batches) * n;
  for (int b = 0; b < batches; ++b) {
    std::fill(bh.begin(), bh.end(), 0);
    for (long s = 0; s < moves_per_batch; ++s) {
      if (c.step()) {
        ++bh[c.disp];
        ++res.open_steps;
      } else {
        ++res.closed_visits;
      }
    }
    if (bh[e1] == 0) throw Unsupported("worm_run: batch too short, H(e_1)=0");
    std::vector<double> xi(n);
    for (long x = 0; x < n; ++x)
      xi[x] = inv2d * double(bh[x]) / double(bh[e1]);
    batch_xi.push_back(std::move(xi));
    for (long x = 0; x < n; ++x) res.hist[x] += bh[x];
  }
  res.xi_hat.assign(n, 0.0);
  res.se.assign(n, 0.0);
  for (long x = 0; x < n; ++x) {
    double m = 0;
    for (const auto& xi : batch_xi) m += xi[x];
    m /= double(batches);
    double var = 0;
    for (const auto& xi : batch_xi) var += (xi[x] - m) * (xi[x] - m);
    var /= double(batches - 1);
    res.xi_hat[x] = m;
    res.se[x] = std::sqrt(var / double(batches));
  }
  return res;
}

DecayProfile decay_profile(const TorusGeom& g, const WormResult& r) {
  DecayProfile p;
  Coords c{};
  for (long nn = 1; nn < g.L() / 2; nn += 2) {
    c[0] = int(nn);
    long site = g.site_index(c);
    p.n.push_back(nn);
    p.xi.push_back(r.xi_hat[site]);
    p.se.push_back(r.se[site]);
  }
  // Least-squares slope of log xi vs log n over the fit range n <= L/4.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  long m = 0;
  p.min_value = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < p.n.size(); ++i) {
    if (p.n[i] > g.L() / 4 || p.xi[i] <= 0) continue;
    double lx = std::log(double(p.n[i])), ly = std::log(p.xi[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++m;
    p.min_value = std::min(p.min_value, p.xi[i]);
  }
  p.exponent = m >= 2 ? (double(m) * sxy - sx * sy) / (double(m) * sxx - sx * sx)
                      : 0.0;
  return p;
}

WormCheckReport stationarity_check(const TorusGeom& g, long sweeps, long therm,
                                   std::uint64_t seed,
                                   unsigned long long n_covers) {
  Chain c(g, seed);
  const long n = g.n_sites();
  for (long s = 0; s < therm * n; ++s) c.step();
  // Consecutive closed visits are strongly autocorrelated (a short open
  // excursion often returns to the same cover), so the binomial sigma only
  // applies to a thinned subsequence; coverage uses every visit.
  constexpr std::uint64_t kThin = 50;
  std::unordered_map<std::string, std::uint64_t> seen;
  std::unordered_map<std::string, std::uint64_t> counts;
  std::uint64_t visits = 0, all_visits = 0;
  for (long s = 0; s < sweeps * n; ++s) {
    if (!c.step()) {
      std::string key(reinterpret_cast<const char*>(c.partner.data()),
                      c.partner.size() * sizeof(long));
      ++seen[key];
      if (++all_visits % kThin == 0) {
        ++counts[key];
        ++visits;
      }
    }
  }
  WormCheckReport rep;
  auto fail = [&rep](const std::string& s) {
    rep.ok = false;
    if (rep.detail.size() < 2000) rep.detail += s + "\n";
  };
  if (seen.size() != n_covers)
    fail("visited " + std::to_string(seen.size()) + " covers, expected " +
         std::to_string(n_covers));
  double p = 1.0 / double(n_covers);
  double expct = double(visits) * p;
  double sigma = std::sqrt(double(visits) * p * (1.0 - p));
  for (const auto& [key, cnt] : counts) {
    if (std::abs(double(cnt) - expct) > 4.0 * sigma) {
      char buf[128];
      std::snprintf(buf, sizeof buf, "cover bin count %llu vs expected %.1f (sigma %.1f)",
                    (unsigned long long)cnt, expct, sigma);
      fail(buf);
    }
  }
  return rep;
}

}  // namespace lp
