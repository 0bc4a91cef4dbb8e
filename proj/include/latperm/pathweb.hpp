// The random path model on the extended torus: link configurations with
// pairings, the weight function H, the finite support W^1, the central
// quantity Z(h), reflections, and the checks built on top of them
// (component identities, polynomial expansion, chessboard estimate,
// reflection positivity, Key Inequality).
//
// SPDX-License-Identifier: MIT
#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "latperm/basics.hpp"
#include "latperm/torus.hpp"

namespace lp {

// One uncoloured configuration (m, gamma) on the extended torus.  Links on
// edge e are labelled 0..m_e-1.  Endpoint side 0 is the root end of the edge
// (the original end for vertical edges), side 1 the other end.
struct WebConfig {
  std::vector<int> m;  // per extended edge
  // partner[e][p][side] = (edge, link) paired with link (e,p) at that end,
  // or (-1,-1) when the link is unpaired there.
  std::vector<std::vector<std::array<std::pair<int, int>, 2>>> partner;
};

enum class PathKind { kLoop, kDoubleLink, kWalk, kSegment };

// A directed edge (inner, outer): for an extremal link of a walk, `outer` is
// the vertex where the link is unpaired.  Encoded as edge_id * 2 + outer_side.
using DirEdge = long;

struct PathInfo {
  PathKind kind = PathKind::kSegment;
  int n_links = 0;
  std::vector<DirEdge> open_ends;  // 2 for walks, 2 for segments (both sides)
};

// Derived data of a configuration; valid (in W^1) iff in_w1.
struct WebStats {
  bool in_w1 = false;
  int total_links = 0;
  int n_paths = 0;
  int halves = 0;       // number of H-factors equal to 1/2
  Int m_factorial = 1;  // prod_e m_e!
  std::vector<int> u;   // unpaired endpoints per extended vertex
  std::vector<int> n_pair;
  std::vector<PathInfo> paths;
};

using WebVisitor = std::function<void(const WebConfig&, const WebStats&)>;

// Streams every (m, gamma) with prod_x H_x > 0, each exactly once.  Colours
// are summed out: every function evaluated through this module is colour
// blind, so a configuration stands for N^{n_paths} coloured ones (paired
// links share a colour, hence colourings are free exactly per path).
// Supported sizes: d = 1, L in {4, 6}.
void enumerate_w1(const ExtendedTorusGeom& g, const WebVisitor& visit);

// Recomputes WebStats (taxonomy, u, H support) from scratch.
WebStats analyze(const ExtendedTorusGeom& g, const WebConfig& w);

// mu weight of the configuration summed over its N^{n_paths} colourings:
// lambda^{total links} / prod m_e! * (1/2)^{halves} * N^{n_paths}.
// Zero when the configuration is outside W^1.
Rat mu_weight(const WebStats& s, int N, const Rat& lambda);

// Image of a configuration under a reflection through edges.
WebConfig reflect_config(const ExtendedTorusGeom& g, const WebConfig& w,
                         const ReflectionPlane& plane);

// Aggregate of one full W^1 enumeration, reusable across (N, lambda) and
// across h-vectors: every accumulated quantity is a polynomial sum
// sum_{T,P} c_{T,P} lambda^T N^P with rational coefficients.
class W1Ensemble {
 public:
  using Poly = std::map<std::pair<int, int>, Rat>;  // (T, P) -> coefficient

  explicit W1Ensemble(const ExtendedTorusGeom& g);

  const ExtendedTorusGeom& geom() const { return *g_; }
  long n_configs() const { return n_configs_; }

  // mu of the whole of W^1, of A^ell, of A^s(edge), of A^w(pair of directed
  // edges; order of the two arguments is irrelevant).
  Rat mu_total(int N, const Rat& lambda) const;
  Rat mu_a_ell(int N, const Rat& lambda) const;
  Rat mu_a_seg(long edge, int N, const Rat& lambda) const;
  Rat mu_a_walk(DirEdge a, DirEdge b, int N, const Rat& lambda) const;

  // Z(h) = sum_w mu(w) prod_x h_x^{u_x}, h indexed by extended site id.
  Rat central_quantity(int N, const Rat& lambda,
                       const std::vector<Rat>& h) const;

  // Coefficients of Z(phi h) as a polynomial in phi (index = power of phi).
  std::vector<Rat> phi_polynomial(int N, const Rat& lambda,
                                  const std::vector<Rat>& h) const;

 private:
  static Rat eval(const Poly& p, int N, const Rat& lambda);

  const ExtendedTorusGeom* g_;
  long n_configs_ = 0;
  Poly total_;
  Poly a_ell_;
  std::vector<Poly> a_seg_;                       // by extended edge id
  std::map<std::pair<DirEdge, DirEdge>, Poly> a_walk_;
  std::map<std::vector<uint8_t>, Poly> u_patterns_;

  friend struct EnsembleBuilder;
};

// h built from v on T_L: h_x = v_x at originals, -2d v_{x'} at the virtual
// copy of x'.
std::vector<Rat> h_from_v(const ExtendedTorusGeom& g,
                          const std::vector<Rat>& v);
// h^x: value of h at x copied to every original, value at the virtual copy
// of x copied to every virtual vertex.
std::vector<Rat> h_homogenized(const ExtendedTorusGeom& g,
                               const std::vector<Rat>& h, long x);

struct WebCheckReport {
  bool ok = true;
  std::string detail;
};

// mu(A^ell) = Y^ell; mu(A^s) = lambda N Y^ell (torus edge) or
// (lambda/2) N Y^ell (vertical edge); mu(A^w((x,q),(y,r))) = lambda^2 N
// Y(x,y), (lambda^2/2) N Y(x,x) when the directed edges coincide, and 0 when
// an inner endpoint is virtual -- all checked exactly against partition
// values computed independently from the loop-model enumeration.
WebCheckReport verify_component_masses(const W1Ensemble& ens, int N,
                                       const Rat& lambda);

// Z(phi h^v) = Y^ell + phi^2 Z2(h^v) + ..., with all odd coefficients zero
// and Z2 given by the displayed quadratic form; exact comparison.
WebCheckReport polynomial_expansion_check(const W1Ensemble& ens, int N,
                                          const Rat& lambda,
                                          const std::vector<Rat>& v);

// Z(h) <= (prod_x Z(h^x))^{1/L^d} for |h| <= 1, compared in the log domain
// with tolerance `tol`.
WebCheckReport chessboard_check(const W1Ensemble& ens, int N,
                                const Rat& lambda, const std::vector<Rat>& h,
                                double tol = 1e-12);

// For `n_funcs` pairs of seeded random +-1 functions (f, g) of the
// restriction of w to T^+ of each reflection plane: mu(f Theta g) =
// mu(g Theta f), mu(f Theta f) >= 0, and mu(f Theta g)^2 <=
// mu(f Theta f) mu(g Theta g); all exact.
WebCheckReport reflection_positivity_check(const ExtendedTorusGeom& g, int N,
                                           const Rat& lambda, int n_funcs,
                                           uint64_t seed);

// sum_{x,y} G(x,y) (Lap v)_x (Lap v)_y <= sum_{{x,y} in E_L} (v_y - v_x)^2,
// exact, with G from the loop-model two-point table.
WebCheckReport key_inequality_check(const TorusGeom& g, int N, const Rat& rho,
                                    const std::vector<Rat>& v);
// Variant reusing a precomputed table G(o, x).
WebCheckReport key_inequality_check(const TorusGeom& g,
                                    const std::vector<Rat>& g_table,
                                    const std::vector<Rat>& v);

}  // namespace lp
