#include "latperm/spectral.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

namespace lp {

namespace {

constexpr double kPi = std::numbers::pi;

// The origin mode o = (0, ..., 0).
long o_mode(const TorusGeom& g) { return g.site_index(Coords{}); }

// The mode p = (pi, ..., pi); only present when L is even.
long p_mode(const TorusGeom& g) {
  Coords c{};
  for (int i = 0; i < g.d(); ++i) c[i] = g.L() / 2;
  return g.site_index(c);
}

// H = { k : k_1 in (-pi/2, pi/2] }, i.e. -L < 4 n_1 <= L.
bool in_h(const TorusGeom& g, long mode) {
  long n1 = g.coords(mode)[0];
  return -g.L() < 4 * n1 && 4 * n1 <= g.L();
}

// Wraps a physical coordinate shifted by L/2 back into (-L/2, L/2].
int shift_half(int phys, int L) {
  int s = phys + L / 2;
  return s > L / 2 ? s - L : s;
}

struct Failures {
  bool ok = true;
  std::string detail;
  void fail(const std::string& line) {
    ok = false;
    if (detail.size() < 2000) detail += line + "\n";
  }
};

SpecReport to_report(const Failures& f) { return {f.ok, f.detail}; }

std::vector<double> to_double(const std::vector<Rat>& G) {
  std::vector<double> out(G.size());
  for (size_t i = 0; i < G.size(); ++i) out[i] = double(G[i]);
  return out;
}

// Largest imaginary residue of a spectrum (used to assert realness).
double max_imag(const Spectrum& s) {
  double m = 0;
  for (const auto& z : s.v) m = std::max(m, std::abs(z.imag()));
  return m;
}

}  // namespace

std::vector<double> mode_k(const TorusGeom& g, long mode) {
  Coords n = g.coords(mode);
  std::vector<double> k(g.d());
  for (int i = 0; i < g.d(); ++i) k[i] = 2.0 * kPi * double(n[i]) / double(g.L());
  return k;
}

Spectrum dft(const TorusGeom& g, const std::vector<double>& f) {
  if (long(f.size()) != g.n_sites()) throw Unsupported("dft: table size mismatch");
  Spectrum s{g.d(), g.L(), std::vector<std::complex<double>>(g.n_sites())};
  const long n = g.n_sites();
  for (long m = 0; m < n; ++m) {
    std::vector<double> k = mode_k(g, m);
    std::complex<double> acc = 0;
    for (long x = 0; x < n; ++x) {
      if (f[x] == 0.0) continue;
      Coords c = g.coords(x);  // same physical-coordinate convention
      double phase = 0;
      for (int i = 0; i < g.d(); ++i) phase -= k[i] * double(c[i]);
      acc += f[x] * std::polar(1.0, phase);
    }
    s.v[m] = acc;
  }
  return s;
}

std::vector<double> idft(const TorusGeom& g, const Spectrum& s) {
  if (long(s.v.size()) != g.n_sites()) throw Unsupported("idft: size mismatch");
  const long n = g.n_sites();
  std::vector<double> f(n);
  for (long x = 0; x < n; ++x) {
    Coords c = g.coords(x);
    std::complex<double> acc = 0;
    for (long m = 0; m < n; ++m) {
      std::vector<double> k = mode_k(g, m);
      double phase = 0;
      for (int i = 0; i < g.d(); ++i) phase += k[i] * double(c[i]);
      acc += s.v[m] * std::polar(1.0, phase);
    }
    f[x] = acc.real() / double(n);
  }
  return f;
}

double epsilon(const TorusGeom& g, long mode) {
  std::vector<double> k = mode_k(g, mode);
  double e = 0;
  for (double ki : k) e += 2.0 * (1.0 - std::cos(ki));
  return e;
}

std::vector<double> parity_part(const TorusGeom& g, const std::vector<Rat>& G,
                                int parity) {
  if (long(G.size()) != g.n_sites()) throw Unsupported("parity_part: size mismatch");
  std::vector<double> out(G.size(), 0.0);
  for (long x = 0; x < g.n_sites(); ++x)
    if (g.parity(x) == parity) out[x] = double(G[x]);
  return out;
}

SpecReport high_frequency_check(const TorusGeom& g, const std::vector<Rat>& G,
                                double tol) {
  Failures f;
  Spectrum s = dft(g, to_double(G));
  double residue = max_imag(s);
  if (residue > 1e-12)
    f.fail("Ghat imaginary residue " + std::to_string(residue) + " > 1e-12");
  const long o = o_mode(g);
  for (long m = 0; m < g.n_sites(); ++m) {
    if (m == o) continue;
    double lhs = s.v[m].real();
    double bound = 1.0 / epsilon(g, m);
    if (lhs > bound + tol) {
      char buf[128];
      std::snprintf(buf, sizeof buf, "mode %ld: Ghat=%.15g > 1/eps=%.15g", m,
                    lhs, bound);
      f.fail(buf);
    }
  }
  return to_report(f);
}

SpecReport parity_symmetry_check(const TorusGeom& g, const std::vector<Rat>& G,
                                 double tol) {
  if (g.L() % 2 != 0) throw Unsupported("parity_symmetry_check: L must be even");
  Failures f;
  Spectrum so = dft(g, parity_part(g, G, 1));
  Spectrum se = dft(g, parity_part(g, G, 0));
  double residue = std::max(max_imag(so), max_imag(se));
  if (residue > 1e-12)
    f.fail("Ghat^{o/e} imaginary residue " + std::to_string(residue) + " > 1e-12");
  const long n = g.n_sites();
  // All sign vectors u with |u_i| = 1; pi u_i shifts mode coordinate i by
  // L/2, and +L/2 and -L/2 are the same shift mod L, so every u gives the
  // same target mode; the loop still spells the assertion out per u.
  for (long bits = 0; bits < (1L << g.d()); ++bits) {
    for (long m = 0; m < n; ++m) {
      Coords c = g.coords(m);
      for (int i = 0; i < g.d(); ++i) c[i] = shift_half(c[i], g.L());
      long shifted = g.site_index(c);
      if (std::abs(so.v[shifted].real() + so.v[m].real()) > tol)
        f.fail("odd sector: Ghat^o(k+pi u) != -Ghat^o(k) at mode " +
               std::to_string(m));
      if (std::abs(se.v[shifted].real() - se.v[m].real()) > tol)
        f.fail("even sector: Ghat^e(k+pi u) != Ghat^e(k) at mode " +
               std::to_string(m));
    }
  }
  return to_report(f);
}

SpecReport mode_difference_identity(const TorusGeom& g,
                                    const std::vector<Rat>& G, double tol) {
  if (g.L() % 2 != 0) throw Unsupported("mode_difference_identity: L must be even");
  Failures f;
  Spectrum s = dft(g, to_double(G));
  const long n = g.n_sites();
  const long o = o_mode(g);
  const long p = p_mode(g);
  double lhs = 0;
  for (long x = 0; x < n; ++x)
    if (g.parity(x) == 1) lhs += 2.0 * double(G[x]) / double(n);
  std::complex<double> modesum = 0;
  for (long m = 0; m < n; ++m) {
    if (m == o || m == p) continue;
    modesum += std::polar(1.0, mode_k(g, m)[0]) * s.v[m];
  }
  Coords e1{};
  e1[0] = 1;
  double rhs = double(G[g.site_index(e1)]) - modesum.real() / double(n);
  if (std::abs(modesum.imag()) / double(n) > tol)
    f.fail("mode sum has imaginary part beyond tolerance");
  if (std::abs(lhs - rhs) > tol) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "identity off: lhs=%.15g rhs=%.15g", lhs, rhs);
    f.fail(buf);
  }
  return to_report(f);
}

double i_l(int d, long L) {
  TorusGeom g(d, int(L));
  const long o = o_mode(g);
  double acc = 0;
  for (long m = 0; m < g.n_sites(); ++m) {
    if (m == o || !in_h(g, m)) continue;
    std::vector<double> k = mode_k(g, m);
    double cossum = 0;
    for (double ki : k) cossum += std::cos(ki);
    acc += 2.0 * std::cos(k[0]) / (1.0 - cossum / double(d));
  }
  return acc / (2.0 * double(d) * double(g.n_sites()));
}

std::vector<double> upsilon_l(int d, long L) {
  TorusGeom g(d, int(L));
  const long n = g.n_sites();
  std::vector<long> h_modes;
  for (long m = 0; m < n; ++m)
    if (in_h(g, m)) h_modes.push_back(m);
  std::vector<double> out(n);
  for (long x = 0; x < n; ++x) {
    Coords c = g.coords(x);
    c[0] -= 1;  // x - e_1; only used in phases, wrap-around is immaterial
    std::complex<double> acc = 0;
    for (long m : h_modes) {
      std::vector<double> k = mode_k(g, m);
      double phase = 0;
      for (int i = 0; i < d; ++i) phase -= k[i] * double(c[i]);
      acc += std::polar(1.0, phase);
    }
    out[x] = 2.0 * acc.real() / double(n);
  }
  return out;
}

SpecReport psi_symmetrisation_check(const TorusGeom& g,
                                    const std::vector<Rat>& G, double tol) {
  if (g.L() % 2 != 0) throw Unsupported("psi_symmetrisation_check: L must be even");
  Failures f;
  const long n = g.n_sites();
  const long o = o_mode(g);
  const long p = p_mode(g);
  Spectrum so = dft(g, parity_part(g, G, 1));
  Spectrum se = dft(g, parity_part(g, G, 0));
  std::vector<char> hit(n, 0);
  long image_count = 0;
  for (long m = 0; m < n; ++m) {
    if (!in_h(g, m) || m == o) continue;
    // Block of m: quarter of the first axis, half of every other axis.  The
    // per-block translation u has u_1 = -1 on (0, pi/2] and u_1 = +1 on
    // (-pi/2, 0], and u_i = +-1 on the negative/positive half of each other
    // axis; since pi u_i = -pi u_i mod 2pi, every case is the same mode shift
    // of L/2 per coordinate.
    Coords c = g.coords(m);
    for (int i = 0; i < g.d(); ++i) c[i] = shift_half(c[i], g.L());
    long im = g.site_index(c);
    if (in_h(g, im)) f.fail("Psi image lands in H at mode " + std::to_string(m));
    if (im == p) f.fail("Psi image hits p at mode " + std::to_string(m));
    if (hit[im]) f.fail("Psi not injective at mode " + std::to_string(m));
    hit[im] = 1;
    ++image_count;
    double c1 = std::cos(mode_k(g, m)[0]);
    double c1i = std::cos(mode_k(g, im)[0]);
    if (std::abs(c1 + c1i) > tol)
      f.fail("cosine sign flip fails at mode " + std::to_string(m));
    if (std::abs(so.v[im].real() + so.v[m].real()) > tol)
      f.fail("Ghat^o antisymmetry fails at mode " + std::to_string(m));
    if (std::abs(se.v[im].real() - se.v[m].real()) > tol)
      f.fail("Ghat^e symmetry fails at mode " + std::to_string(m));
  }
  // |H| = L^d / 2, so the complement of H u {p} has L^d/2 - 1 modes.
  if (image_count != n / 2 - 1)
    f.fail("Psi image size " + std::to_string(image_count) + " != " +
           std::to_string(n / 2 - 1));
  for (long m = 0; m < n; ++m)
    if (!in_h(g, m) && m != p && !hit[m])
      f.fail("Psi misses mode " + std::to_string(m));
  return to_report(f);
}

SpecReport infrared_check(const TorusGeom& g, const std::vector<Rat>& G,
                          double tol) {
  if (g.L() % 2 != 0) throw Unsupported("infrared_check: L must be even");
  Failures f;
  const long n = g.n_sites();
  const double half = double(n) / 2.0;  // |T^o| = |T^e|
  double lhs = 0, even_avg = 0;
  for (long x = 0; x < n; ++x) {
    if (g.parity(x) == 1)
      lhs += double(G[x]) / half;
    else
      even_avg += double(G[x]) / half;
  }
  std::vector<double> ups = upsilon_l(g.d(), g.L());
  double axis = 0;
  for (long x = 0; x < n; ++x) {
    Coords c = g.coords(x);
    bool on_axis = true;
    for (int i = 1; i < g.d(); ++i) on_axis = on_axis && c[i] == 0;
    if (on_axis && g.parity(x) == 0) axis += ups[x] * double(G[x]);
  }
  Coords e1{};
  e1[0] = 1;
  double rhs = double(G[g.site_index(e1)]) - i_l(g.d(), g.L()) - even_avg + axis;
  if (lhs < rhs - tol) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "bound violated: lhs=%.15g < rhs=%.15g", lhs,
                  rhs);
    f.fail(buf);
  }
  return to_report(f);
}

}  // namespace lp
