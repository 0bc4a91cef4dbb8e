// SPDX-License-Identifier: MIT
#include "latperm/torus.hpp"

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>

namespace lp {

double log_rat(const Rat& r) {
  const Int num = boost::multiprecision::numerator(r);
  const Int den = boost::multiprecision::denominator(r);
  if (num <= 0) throw Unsupported("log_rat: argument must be positive");
  auto log_int = [](const Int& v) {
    const long bits = static_cast<long>(msb(v));
    // v = m * 2^shift with m representable as double.
    const long shift = bits > 900 ? bits - 900 : 0;
    const double m = static_cast<double>(Int(v >> shift));
    return std::log(m) + shift * std::log(2.0);
  };
  return log_int(num) - log_int(den);
}

Rat pow_rat(const Rat& base, unsigned exp) {
  Rat out = 1;
  Rat b = base;
  while (exp) {
    if (exp & 1u) out *= b;
    b *= b;
    exp >>= 1u;
  }
  return out;
}

TorusGeom::TorusGeom(int d, int L, bool geometry_only) : d_(d), L_(L) {
  if (d < 1 || d > kMaxDim) throw Unsupported("TorusGeom: d out of range");
  if (L < 3) throw Unsupported("TorusGeom: L must be at least 3");
  if (!geometry_only && (L % 2 != 0 || L < 4))
    throw Unsupported("TorusGeom: model semantics require even L >= 4");
  n_sites_ = 1;
  for (int i = 0; i < d; ++i) n_sites_ *= L;
  long s = 1;
  for (int i = d - 1; i >= 0; --i) {  // x_1 most significant
    stride_[i] = s;
    s *= L;
  }
}

long TorusGeom::site_index(const Coords& phys) const {
  long idx = 0;
  const int lo = -(L_ - 1) / 2;  // smallest physical coordinate
  for (int i = 0; i < d_; ++i) {
    const int t = phys[i] - lo;
    if (t < 0 || t >= L_) throw Unsupported("site_index: coordinate out of range");
    idx += stride_[i] * t;
  }
  return idx;
}

Coords TorusGeom::coords(long site) const {
  Coords c{};
  const int lo = -(L_ - 1) / 2;
  for (int i = 0; i < d_; ++i) {
    c[i] = int(site / stride_[i]) % L_ + lo;
  }
  return c;
}

long TorusGeom::neighbor(long site, int axis, int dir) const {
  const long t = (site / stride_[axis]) % L_;
  const long t2 = (t + dir + L_) % L_;
  return site + (t2 - t) * stride_[axis];
}

std::vector<long> TorusGeom::neighbors(long site) const {
  std::vector<long> out;
  out.reserve(2 * d_);
  for (int i = 0; i < d_; ++i) {
    out.push_back(neighbor(site, i, +1));
    out.push_back(neighbor(site, i, -1));
  }
  return out;
}

int TorusGeom::parity(long site) const {
  const Coords c = coords(site);
  long s = 0;
  for (int i = 0; i < d_; ++i) s += c[i];
  return int(((s % 2) + 2) % 2);
}

long TorusGeom::edge_other_end(long e) const {
  auto [site, axis] = edge_from_id(e);
  return neighbor(site, axis, +1);
}

int ReflectionPlane::reflect_coord(int phys, int L) const {
  // 2u - x reduced back into the physical window (-L/2, L/2].
  int v = twice_u - phys;
  v %= L;
  if (v <= -L / 2) v += L;
  if (v > L / 2) v -= L;
  return v;
}

std::vector<ReflectionPlane> all_reflection_planes(int d, int L) {
  std::vector<ReflectionPlane> out;
  for (int axis = 0; axis < d; ++axis) {
    for (int m = -(L / 2) + 1; m <= L / 2; ++m) {
      out.push_back(ReflectionPlane{axis, 2 * m + 1});
    }
  }
  return out;
}

ExtendedTorusGeom::ExtendedTorusGeom(int d, int L) : base_(d, L) {
  incident_.resize(n_sites());
  for (long s = 0; s < base_.n_sites(); ++s) {
    for (int i = 0; i < d; ++i) {
      const long fwd = base_.edge_id(s, i);
      const long bwd = base_.edge_id(base_.neighbor(s, i, -1), i);
      incident_[s].push_back(fwd);
      incident_[s].push_back(bwd);
    }
    incident_[s].push_back(vertical_edge_of(s));
    incident_[virtual_of(s)].push_back(vertical_edge_of(s));
  }
}

std::pair<long, long> ExtendedTorusGeom::edge_ends(long e) const {
  if (is_vertical_edge(e)) {
    const long orig = e - base_.n_edges();
    return {orig, virtual_of(orig)};
  }
  auto [site, axis] = base_.edge_from_id(e);
  return {site, base_.neighbor(site, axis, +1)};
}

long ExtendedTorusGeom::reflect_site(long site, const ReflectionPlane& plane) const {
  const bool virt = is_virtual(site);
  const long orig = virt ? original_of(site) : site;
  Coords c = base_.coords(orig);
  c[plane.axis] = plane.reflect_coord(c[plane.axis], base_.L());
  const long r = base_.site_index(c);
  return virt ? virtual_of(r) : r;
}

long ExtendedTorusGeom::reflect_edge(long e, const ReflectionPlane& plane) const {
  auto [a, b] = edge_ends(e);
  const long ra = reflect_site(a, plane);
  const long rb = reflect_site(b, plane);
  if (is_vertical_edge(e)) return vertical_edge_of(std::min(ra, rb));
  // Torus edge: recover (site, axis) with site the tail of the +axis step.
  auto [site, axis] = base_.edge_from_id(e);
  if (axis == plane.axis) {
    // Orientation flips: the reflected edge runs from rb forward to ra.
    return base_.edge_id(rb, axis);
  }
  return base_.edge_id(ra, axis);
}

bool ExtendedTorusGeom::in_positive_half(long site, const ReflectionPlane& plane) const {
  const long orig = is_virtual(site) ? original_of(site) : site;
  const Coords c = base_.coords(orig);
  const int L = base_.L();
  // Positive half: the L/2 coordinate values u + 1/2, u + 3/2, ...,
  // u + L/2 - 1/2; the first of them is (twice_u + 1) / 2.
  const int start = ((((plane.twice_u + 1) / 2) % L) + L) % L;
  const int canon = base_.to_canon(c[plane.axis]);
  const int offset = ((canon - start) % L + L) % L;
  return offset < L / 2;
}

}  // namespace lp
