// Lattice permutations: directed multigraphs on T_L whose components are
// monomers, double edges and self-avoiding directed loops, optionally with a
// single open walk.  Exact partition functions in the monomer (rho) and
// edge (lambda) parametrizations, the two-point function G, the target-point
// law, and the dimer-cover bijections.
//
// SPDX-License-Identifier: MIT
#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "latperm/basics.hpp"
#include "latperm/torus.hpp"

namespace lp {

// A configuration pi: succ[x] = out-neighbour of x, or -1.
struct LoopConfig {
  std::vector<long> succ;
  long monomers = 0;     // M(pi)
  long components = 0;   // L(pi): loops plus double edges (walk not counted)
  long edges = 0;        // H(pi): directed edges including walk edges
};

using ConfigVisitor = std::function<void(const LoopConfig&)>;

inline constexpr long kDefaultEnumCap = 400'000'000L;

// Exhaustive enumeration of Omega^ell (closed configurations), deterministic
// order.  Throws Unsupported when the visit count would exceed `cap`.
void enumerate_omega_ell(const TorusGeom& g, const ConfigVisitor& visit,
                         long cap = kDefaultEnumCap);

// Enumeration of Omega_{x,y}: one open self-avoiding walk x -> y (for x == y:
// the configurations of Omega^ell in which x is a monomer).
void enumerate_omega_xy(const TorusGeom& g, long x, long y,
                        const ConfigVisitor& visit, long cap = kDefaultEnumCap);

// Validates the structural invariants of a configuration; walk endpoints are
// (x, y) or unset for closed configurations.  Returns an empty string when
// valid, otherwise a description of the violation.
std::string check_invariants(const TorusGeom& g, const LoopConfig& pi,
                             std::optional<std::pair<long, long>> walk);

// Z^ell_{L,N,rho} = sum over Omega^ell of rho^M (N/2)^L, exact.  Uses DFS
// enumeration where feasible and a frontier-contraction transfer DP (d <= 2)
// otherwise; the two are cross-checked in the test suite.
Rat partition_ell(const TorusGeom& g, int N, const Rat& rho);

// Z_{L,N,rho}(x,y) over Omega_{x,y}.
Rat partition_directed(const TorusGeom& g, int N, const Rat& rho, long x, long y);

// Two-point function G_{L,N,rho}(x,y) = Z(x,y)/Z^ell.
Rat two_point(const TorusGeom& g, int N, const Rat& rho, long x, long y);

// G_{L,N,rho}(o,x) for every site x (index by site id).
std::vector<Rat> two_point_table(const TorusGeom& g, int N, const Rat& rho);

// Edge-parametrized partition functions Y^ell = lambda^{L^d} Z^ell_{1/lambda}
// and Y(x,y) = lambda^{L^d - 1} Z_{1/lambda}(x,y).
Rat partition_lambda(const TorusGeom& g, int N, const Rat& lambda);
Rat partition_lambda_xy(const TorusGeom& g, int N, const Rat& lambda, long x, long y);

// Law of the target point X under P_{L,N,rho}: P(X = x) = G(o,x)/sum_z G(o,z).
std::vector<Rat> target_law(const TorusGeom& g, int N, const Rat& rho);

struct CheckReport {
  bool ok = true;
  std::string detail;
};

// Explicit constructions of the two cover bijections: pairs of dimer covers
// to fully-packed closed configurations, and (cover, cover-minus-{o,z}) pairs
// to fully-packed configurations with a walk from o to z.
CheckReport bijection_check_dimers(int d, int L);

// For rho = 0: G(o, n e_i) nonincreasing over odd n in (0, L/2), and
// G(o,z) <= 1/(dN) on the odd sublattice.
CheckReport monotonicity_check(const TorusGeom& g, int N);

namespace detail {
// Transfer-DP backend (d in {1,2}).  mode: 0 closed, 1 walk o->y, 2 o forced
// monomer.  Exposed for direct cross-checking in tests.
Rat partition_dp(const TorusGeom& g, int N, const Rat& rho, int mode, long y);
}  // namespace detail

}  // namespace lp
