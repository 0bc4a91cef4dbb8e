#pragma once

// Expected number of returns to the origin r_d of the simple random walk on
// Z^d: deterministic quadrature of the return integral, Monte-Carlo
// corroboration, and the finite-m partial-sum identity relating exact walk
// probabilities to the integral representation.

#include <cstdint>
#include <string>

#include "latperm/basics.hpp"

namespace lp {

struct WalkEstimate {
  double value = 0;
  double err = 0;           // Richardson gap (quadrature) or stderr (mc)
  double tail_bias = 0;     // mc only: truncation-bias estimate
  std::string method;       // "quadrature" | "mc" | "partial-sum"
};

// Midpoint-rule estimate of
//   (1/2) (2 pi)^{-d} Int cos(k_1/2) / (1 - J(k)) dk,
// J(k) = (1/d) (cos(k_1/2) + sum_{i>=2} cos k_i), with k_1 over the dual
// interval [-2 pi, 2 pi] of the half-integer first coordinate and the other
// coordinates over [-pi, pi].  The grid uses M cells per 2 pi, shifted half a
// cell so the k = o singularity is never sampled, and the value is
// Richardson-checked across M and 2M (relative gap < 0.5%).  For d <= 2 the
// integral diverges (recurrent walk) and Unsupported is thrown.
WalkEstimate r_quadrature(int d, long grid_m = 256);

// Sample mean of the number of returns to the origin of a simple random walk
// truncated at max_steps; deterministic in seed.  err is the standard error
// of the mean and tail_bias a local-CLT estimate of the mass lost to
// truncation (the truncated mean underestimates r_d by about that much).
WalkEstimate r_montecarlo(int d, long trials, long max_steps, std::uint64_t seed);

struct PartialSumReport {
  double lhs = 0;   // sum_{n=0}^m P(S_n = e_1), exact DP over walk counts
  double rhs = 0;   // quadrature of cos(k_1/2) (1 - J^{m+1}) / (1 - J)
  bool ok = true;   // agreement within 0.5% (absolute floor 1e-9)
  std::string detail;
};

// The finite-m identity: both sides computed independently (m <= 20).
PartialSumReport partial_sum_identity(int d, int m, long grid_m = 64);

}  // namespace lp
