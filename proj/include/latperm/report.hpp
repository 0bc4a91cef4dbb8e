#pragma once

// Deterministic serialization helpers: exact rationals as "p/q" strings,
// real-space tables and spectra as CSV with fixed ordering and headers.

#include <string>
#include <vector>

#include "latperm/basics.hpp"
#include "latperm/spectral.hpp"
#include "latperm/torus.hpp"

namespace lp {

// "p/q" (or "p" when q = 1), minus sign on the numerator.
std::string rat_str(const Rat& r);

// Parses "p", "p/q", or a plain integer string; throws Unsupported on junk.
Rat parse_rat(const std::string& s);

// CSV with header x_1,...,x_d,value; one row per site in site-id order
// (lexicographic in physical coordinates).
std::string table_csv(const TorusGeom& g, const std::vector<Rat>& t);
std::string table_csv(const TorusGeom& g, const std::vector<double>& t);
// As above plus a second value column (value,stderr).
std::string table_csv(const TorusGeom& g, const std::vector<double>& t,
                      const std::vector<double>& err);

// CSV with header k_1,...,k_d,re,im; one row per mode in mode-id order.
std::string spectrum_csv(const TorusGeom& g, const Spectrum& s);

}  // namespace lp
