#pragma once

// Fourier analysis on the dual torus: discrete transforms, the lattice
// dispersion epsilon(k), parity symmetries of the odd/even two-point
// functions, the high-frequency upper bound, the mode-difference identity,
// the lattice sums I_L(d) and Upsilon_L, the half-torus symmetrisation map
// Psi, and the finite-volume infrared-ultraviolet bound.

#include <complex>
#include <string>
#include <vector>

#include "latperm/basics.hpp"
#include "latperm/torus.hpp"

namespace lp {

// A function on the dual torus T*_L.  Modes are indexed by the same site ids
// as TorusGeom: the mode with canonical coordinates n = (n_1..n_d),
// n_i in (-L/2, L/2] after to_phys, is k = (2*pi/L) n.
struct Spectrum {
  int d = 0;
  long L = 0;
  std::vector<std::complex<double>> v;  // indexed by mode id (= site id)
};

// k-vector (in radians) of the mode with the given id.
std::vector<double> mode_k(const TorusGeom& g, long mode);

// Plain O(L^{2d}) transforms: fhat(k) = sum_x e^{-i k.x} f(x) and its inverse
// f(x) = L^{-d} sum_k e^{+i k.x} fhat(k).
Spectrum dft(const TorusGeom& g, const std::vector<double>& f);
std::vector<double> idft(const TorusGeom& g, const Spectrum& s);

// epsilon(k) = 2 sum_j (1 - cos k_j); vanishes only at k = o.
double epsilon(const TorusGeom& g, long mode);

struct SpecReport {
  bool ok = true;
  std::string detail;  // one line per failed assertion (capped)
};

// Splits a two-point table G(o,x) into its odd/even-sublattice parts
// (the other parity is zeroed) and returns the double conversion.
std::vector<double> parity_part(const TorusGeom& g, const std::vector<Rat>& G,
                                int parity);

// Ghat(k) <= 1/epsilon(k) + tol at every mode k != o; also checks that the
// imaginary residue of Ghat is below 1e-12.
SpecReport high_frequency_check(const TorusGeom& g, const std::vector<Rat>& G,
                                double tol = 1e-10);

// For every u with |u_i| = 1 (L even, so k + pi u is again a mode):
// Ghat^o(k + pi u) = -Ghat^o(k) and Ghat^e(k + pi u) = Ghat^e(k), and both
// transforms are real up to a 1e-12 residue.
SpecReport parity_symmetry_check(const TorusGeom& g, const std::vector<Rat>& G,
                                 double tol = 1e-10);

// (2/L^d) sum_{x odd} G(x)  =  G(e_1) - L^{-d} sum_{k not in {o,p}}
// e^{i k.e_1} Ghat(k), to tol.  Requires L even (so that p is a mode).
SpecReport mode_difference_identity(const TorusGeom& g,
                                    const std::vector<Rat>& G,
                                    double tol = 1e-10);

// I_L(d) = (1/2d) L^{-d} sum_{k in H \ {o}} 2 cos(k_1) /
//          (1 - (1/d) sum_i cos k_i),
// where H = { k : k_1 in (-pi/2, pi/2] }.
double i_l(int d, long L);

// Upsilon_L(x) = (2/L^d) sum_{k in H} e^{-i k.(x - e_1)}, evaluated on T_L
// and returned indexed by site id.  Real for every x.
std::vector<double> upsilon_l(int d, long L);

// Constructs the block decomposition of T*_L and the translation map
// Psi(k) = k + pi u(k); asserts that Psi is a bijection
// H \ {o} -> T*_L \ (H u {p}) and that at every k in H \ {o}:
//   cos(Psi(k).e_1) = -cos(k.e_1),
//   Ghat^o(Psi(k)) = -Ghat^o(k),  Ghat^e(Psi(k)) = Ghat^e(k).
SpecReport psi_symmetrisation_check(const TorusGeom& g,
                                    const std::vector<Rat>& G,
                                    double tol = 1e-10);

// Finite-volume infrared-ultraviolet bound:
//   sum_{x odd} G(x)/|T^o|  >=  G(e_1) - I_L(d) - sum_x G^e(x)/|T^e|
//                               + sum_{x on the e_1 axis} Upsilon_L(x) G^e(x)
// with |T^o| = |T^e| = L^d/2, to tol.
SpecReport infrared_check(const TorusGeom& g, const std::vector<Rat>& G,
                          double tol = 1e-9);

}  // namespace lp
