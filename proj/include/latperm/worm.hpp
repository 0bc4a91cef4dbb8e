#pragma once

// Worm-algorithm Monte Carlo for the uniform dimer model: estimates the
// monomer correlation Xi_L(x) (equal to the two-point function at N = 2,
// rho = 0) from the defect-displacement histogram of a monomer-pair worm.
// All covers carry equal weight, every move is accepted, and the estimator
// is anchored to the exact value Xi_L(e_1) = 1/(2d).

#include <cstdint>
#include <string>
#include <vector>

#include "latperm/basics.hpp"
#include "latperm/torus.hpp"

namespace lp {

struct WormResult {
  int d = 0;
  long L = 0;
  std::vector<double> xi_hat;   // per displacement site: (1/2d) H(x)/H(e_1)
  std::vector<double> se;       // batch-means standard error
  std::vector<std::uint64_t> hist;  // total defect-displacement histogram
  std::uint64_t open_steps = 0;
  std::uint64_t closed_visits = 0;
  int batches = 0;
};

// Runs one worm chain.  A sweep is L^d elementary moves; `therm` sweeps are
// discarded, then `sweeps` sweeps are measured in `batches` equal batches
// (>= 20).  Deterministic in seed.  Requires even L >= 4 and d in {2, 3}.
WormResult worm_run(const TorusGeom& g, long sweeps, long therm,
                    std::uint64_t seed, int batches = 20);

struct DecayProfile {
  std::vector<long> n;          // odd displacements along the e_1 axis
  std::vector<double> xi, se;   // Xi-hat(n e_1) and its error
  double exponent = 0;          // log-log least-squares slope over n <= L/4
  double min_value = 0;         // min of xi over n <= L/4
};

// Axis profile n -> Xi-hat(n e_1) for odd n in [1, L/2), with a fitted
// power-law exponent and the minimum over the fit range.
DecayProfile decay_profile(const TorusGeom& g, const WormResult& r);

struct WormCheckReport {
  bool ok = true;
  std::string detail;
};

// Explicit stationarity check of the update set: empirical visit frequencies
// of the closed sector match the uniform distribution over all perfect
// matchings (each bin of a thinned, effectively independent subsequence
// within 4 sigma; every cover visited at least once).  `n_covers` is the
// exact number of perfect matchings of the torus.
WormCheckReport stationarity_check(const TorusGeom& g, long sweeps, long therm,
                                   std::uint64_t seed,
                                   unsigned long long n_covers);

}  // namespace lp
