// Exact enumeration of dimer covers (perfect matchings) of T_L with an
// optional set of removed sites, and the monomer correlation derived from
// those counts.
//
// SPDX-License-Identifier: MIT
#pragma once

#include <vector>

#include "latperm/basics.hpp"
#include "latperm/torus.hpp"

namespace lp {

// Exhaustive depth-first count: repeatedly match the lowest-index uncovered
// site with each available neighbour.  Exact for any d, but the running time
// is proportional to the number of covers, so use only where that count is
// modest (d <= 2 with L <= 8 in practice).
Int count_covers_backtracking(const TorusGeom& g, const std::vector<long>& removed);

// Profile dynamic programming.  d = 2: site-by-site scan with an L-bit
// coverage frontier, wrap edges handled by a seam enumeration.  d = 3: a
// layer-to-layer transfer matrix over 2^(L^2) vertical-dimer profiles with
// the longitudinal wrap closed by a trace (L = 4 supported).
Int count_covers_transfer(const TorusGeom& g, const std::vector<long>& removed);

// Independent cross-check for d = 3: the cover count as the permanent of the
// bipartite adjacency matrix, computed with Ryser's inclusion-exclusion
// formula (Gray-code order).  Supported up to 32 + 32 sites.
Int count_covers_permanent(const TorusGeom& g, const std::vector<long>& removed);

// Monomer correlation Xi_L(x) = |covers(T_L minus {o, x})| / |covers(T_L)|
// for every site x (zero at x = o and on the even sublattice).
struct XiTable {
  TorusGeom geom;
  std::vector<Rat> xi;  // indexed by site id
};
XiTable monomer_correlation(int d, int L);

}  // namespace lp
