// Geometry of the d-dimensional discrete torus, its one-layer vertical
// extension, and reflections through planes orthogonal to lattice directions.
//
// SPDX-License-Identifier: MIT
#pragma once

#include <array>
#include <vector>

#include "latperm/basics.hpp"

namespace lp {

constexpr int kMaxDim = 4;

// Coordinates of a site, physical convention: each entry lies in
// (-L/2, L/2] for even L (and [-(L-1)/2, (L-1)/2] for odd L).
using Coords = std::array<int, kMaxDim>;

// T_L = (Z/L)^d with nearest-neighbour edges.  Sites carry dense integer ids
// in lexicographic order of their physical coordinates.  Even L >= 4 is
// required for model semantics; odd L is accepted for geometry-only use.
class TorusGeom {
 public:
  TorusGeom(int d, int L, bool geometry_only = false);

  int d() const { return d_; }
  int L() const { return L_; }
  long n_sites() const { return n_sites_; }
  long n_edges() const { return d_ * n_sites_; }

  long site_index(const Coords& phys) const;
  Coords coords(long site) const;

  // Neighbour in direction +-e_axis (axis in [0,d), dir in {+1,-1}).
  long neighbor(long site, int axis, int dir) const;
  // All 2d neighbours, order: +e_1, -e_1, +e_2, -e_2, ...
  std::vector<long> neighbors(long site) const;

  // Sum of coordinates mod 2; 0 = even sublattice, 1 = odd sublattice.
  int parity(long site) const;

  // Undirected edges {x, x+e_i} as (site, axis) pairs; edge id = site*d+axis.
  long edge_id(long site, int axis) const { return site * d_ + axis; }
  std::pair<long, int> edge_from_id(long e) const { return {e / d_, int(e % d_)}; }
  long edge_other_end(long e) const;

  // Canonical (0..L-1) <-> physical coordinate conversion.
  int to_phys(int canon) const { return canon > L_ / 2 ? canon - L_ : canon; }
  int to_canon(int phys) const { return ((phys % L_) + L_) % L_; }

 private:
  int d_;
  int L_;
  long n_sites_;
  std::array<long, kMaxDim> stride_;
};

// A hyperplane { z : z_i = u } with u - 1/2 integer, used for reflections.
// Stored as (axis, twice_u) with twice_u odd.
struct ReflectionPlane {
  int axis = 0;     // 0-based i in [0, d)
  int twice_u = 1;  // 2u, odd; u - 1/2 in (-L/2, L/2] /\ Z

  // Reflected physical coordinate value along `axis`: (2u - x) mod L.
  int reflect_coord(int phys, int L) const;
};

// All valid reflection planes of T_L (d*L of them).
std::vector<ReflectionPlane> all_reflection_planes(int d, int L);

// The extended torus: originals T_L (layer 1) plus one virtual copy of each
// site (layer 2), joined by vertical edges.  Site ids: original sites keep
// their TorusGeom id; virtual ids are offset by n_sites().
class ExtendedTorusGeom {
 public:
  ExtendedTorusGeom(int d, int L);

  const TorusGeom& base() const { return base_; }
  long n_sites() const { return 2 * base_.n_sites(); }
  long n_edges() const { return base_.n_edges() + base_.n_sites(); }

  bool is_virtual(long site) const { return site >= base_.n_sites(); }
  long virtual_of(long orig) const { return orig + base_.n_sites(); }
  long original_of(long virt) const { return virt - base_.n_sites(); }

  // Edge ids: first the torus edges of the base geometry (site*d+axis), then
  // the vertical edges, id = n_edges_base + original_site.
  bool is_vertical_edge(long e) const { return e >= base_.n_edges(); }
  long vertical_edge_of(long orig) const { return base_.n_edges() + orig; }
  std::pair<long, long> edge_ends(long e) const;

  // Edges incident to a site (2d+1 for originals, 1 for virtuals).
  const std::vector<long>& incident_edges(long site) const {
    return incident_[site];
  }

  // Reflection of an (original or virtual) site through a plane.
  long reflect_site(long site, const ReflectionPlane& plane) const;
  // Reflection of an edge (edge set is invariant under all plane reflections).
  long reflect_edge(long e, const ReflectionPlane& plane) const;

  // True if the site lies in the positive half T^+ of the plane.  The halves
  // are the two arcs of the i-th coordinate circle delimited by u and by the
  // antipodal cut u + L/2; T^+ is the arc starting just above u.
  bool in_positive_half(long site, const ReflectionPlane& plane) const;

 private:
  TorusGeom base_;
  std::vector<std::vector<long>> incident_;
};

}  // namespace lp
