#include "latperm/rwalk.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <vector>

namespace lp {

namespace {

constexpr double kPi = std::numbers::pi;

// Midpoint quadrature of cos(k_1/2) g(J(k)) with k_1 over [-2pi, 2pi]
// (2M cells) and k_2..k_d over [-pi, pi] (M cells each), normalized by
// (1/2)(2pi)^{-d}; with that normalization the result is just the mean of the
// integrand over grid cells.  g is supplied via the power m: m < 0 means
// g(J) = 1/(1-J), otherwise g(J) = (1 - J^{m+1})/(1 - J).
double quad_mean(int d, long M, int m) {
  std::vector<double> c1(2 * M);  // cos(k_1/2) at midpoints of [-2pi, 2pi]
  for (long i = 0; i < 2 * M; ++i) {
    double k1 = -2.0 * kPi + 4.0 * kPi * (double(i) + 0.5) / double(2 * M);
    c1[i] = std::cos(k1 / 2.0);
  }
  std::vector<double> ci(M);  // cos(k) at midpoints of [-pi, pi]
  for (long i = 0; i < M; ++i) {
    double k = -kPi + 2.0 * kPi * (double(i) + 0.5) / double(M);
    ci[i] = std::cos(k);
  }
  // Odometer over the d-1 outer axes; the first axis is the innermost loop.
  std::vector<long> idx(d, 0);
  double total = 0;
  bool done = false;
  while (!done) {
    double cs = 0;
    for (int a = 1; a < d; ++a) cs += ci[idx[a]];
    for (long i = 0; i < 2 * M; ++i) {
      double J = (c1[i] + cs) / double(d);
      double g;
      if (m < 0) {
        g = 1.0 / (1.0 - J);
      } else {
        // (1 - J^{m+1})/(1 - J) = sum_{n<=m} J^n, evaluated stably at J ~ 1.
        double p = 1.0, s = 0;
        for (int n = 0; n <= m; ++n) {
          s += p;
          p *= J;
        }
        g = s;
      }
      total += c1[i] * g;
    }
    done = true;
    for (int a = 1; a < d; ++a) {
      if (++idx[a] < M) {
        done = false;
        break;
      }
      idx[a] = 0;
    }
  }
  double cells = double(2 * M);
  for (int a = 1; a < d; ++a) cells *= double(M);
  return total / cells;
}

}  // namespace

WalkEstimate r_quadrature(int d, long grid_m) {
  if (d <= 2)
    throw Unsupported("r_quadrature: walk is recurrent for d <= 2, integral diverges");
  if (grid_m < 8) throw Unsupported("r_quadrature: grid too coarse");
  double coarse = quad_mean(d, grid_m, -1);
  double fine = quad_mean(d, 2 * grid_m, -1);
  double gap = std::abs(fine - coarse);
  if (gap > 0.005 * std::abs(fine))
    throw Unsupported("r_quadrature: refinement gap above 0.5%, increase grid");
  return {fine, gap, 0.0, "quadrature"};
}

WalkEstimate r_montecarlo(int d, long trials, long max_steps, std::uint64_t seed) {
  if (d < 1 || trials < 2 || max_steps < 1)
    throw Unsupported("r_montecarlo: bad parameters");
  std::mt19937_64 rng(seed);
  double sum = 0, sumsq = 0;
  std::vector<int> pos(d);
  for (long t = 0; t < trials; ++t) {
    std::fill(pos.begin(), pos.end(), 0);
    long returns = 0;
    for (long s = 0; s < max_steps; ++s) {
      std::uint64_t v = rng() % std::uint64_t(2 * d);
      int axis = int(v >> 1);
      pos[axis] += (v & 1) ? 1 : -1;
      bool at_origin = true;
      for (int a = 0; a < d; ++a) at_origin = at_origin && pos[a] == 0;
      if (at_origin) ++returns;
    }
    sum += double(returns);
    sumsq += double(returns) * double(returns);
  }
  double mean = sum / double(trials);
  double var = (sumsq - sum * mean) / double(trials - 1);
  double se = std::sqrt(std::max(var, 0.0) / double(trials));
  // Local CLT tail: sum_{n > m even} P(S_n = o) ~ (d/(2pi))^{d/2}
  // m^{1-d/2} / (d/2 - 1); for d = 2 the tail of the truncated sum still
  // grows like log, reported as infinity is unhelpful, so only d >= 3 gets a
  // finite estimate.
  double bias = 0;
  if (d >= 3)
    bias = std::pow(double(d) / (2.0 * kPi), double(d) / 2.0) *
           std::pow(double(max_steps), 1.0 - double(d) / 2.0) /
           (double(d) / 2.0 - 1.0);
  return {mean, se, bias, "mc"};
}

PartialSumReport partial_sum_identity(int d, int m, long grid_m) {
  if (m < 0 || m > 20) throw Unsupported("partial_sum_identity: need 0 <= m <= 20");
  if (d < 1 || d > 4) throw Unsupported("partial_sum_identity: need 1 <= d <= 4");
  // Exact DP on walk counts: count(n, x) <= (2d)^20 fits in 64 bits for
  // d <= 4 only when d <= 3; for d = 4 cap m at 15.
  if (d == 4 && m > 15) throw Unsupported("partial_sum_identity: m too large for d=4");
  const int R = m + 1;          // walks of <= m steps stay in [-m, m]^d
  const long W = 2 * R + 1;
  long vol = 1;
  for (int a = 0; a < d; ++a) vol *= W;
  std::vector<long> stride(d, 1);
  for (int a = 1; a < d; ++a) stride[a] = stride[a - 1] * W;
  std::vector<unsigned long long> cnt(vol, 0), nxt(vol);
  long origin = 0;
  for (int a = 0; a < d; ++a) origin += R * stride[a];
  cnt[origin] = 1;
  long e1 = origin + stride[0];
  double lhs = 0;
  double norm = 1.0;  // (2d)^{-n}
  for (int n = 0;; ++n) {
    lhs += double(cnt[e1]) * norm;
    if (n == m) break;
    std::fill(nxt.begin(), nxt.end(), 0ULL);
    for (long i = 0; i < vol; ++i) {
      if (!cnt[i]) continue;
      long rem = i;
      for (int a = d - 1; a >= 0; --a) {
        long ca = rem / stride[a];
        rem -= ca * stride[a];
        if (ca > 0) nxt[i - stride[a]] += cnt[i];
        if (ca < W - 1) nxt[i + stride[a]] += cnt[i];
      }
    }
    cnt.swap(nxt);
    norm /= double(2 * d);
  }
  // The integrand with the (1 - J^{m+1}) factor is a trigonometric polynomial,
  // so the periodic midpoint rule is exact once the grid resolves degree m+1.
  long M = std::max(grid_m, long(2 * (m + 2)));
  double rhs = quad_mean(d, M, m);
  PartialSumReport rep;
  rep.lhs = lhs;
  rep.rhs = rhs;
  double tol = std::max(0.005 * std::abs(lhs), 1e-9);
  rep.ok = std::abs(lhs - rhs) <= tol;
  if (!rep.ok) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "lhs=%.15g rhs=%.15g", lhs, rhs);
    rep.detail = buf;
  }
  return rep;
}

}  // namespace lp
