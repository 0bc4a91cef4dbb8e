#include "latperm/report.hpp"

#include <cstdio>
#include <sstream>

namespace lp {

std::string rat_str(const Rat& r) {
  const Int num = boost::multiprecision::numerator(r);
  const Int den = boost::multiprecision::denominator(r);
  std::string s = num.str();
  if (den != 1) s += "/" + den.str();
  return s;
}

Rat parse_rat(const std::string& s) {
  if (s.empty()) throw Unsupported("parse_rat: empty string");
  auto slash = s.find('/');
  if (slash == 0 || slash == s.size() - 1)
    throw Unsupported("parse_rat: cannot parse '" + s + "'");
  try {
    if (slash == std::string::npos) return Rat(Int(s));
    Int num(s.substr(0, slash));
    Int den(s.substr(slash + 1));
    if (den == 0) throw Unsupported("parse_rat: zero denominator");
    return Rat(num, den);
  } catch (const std::runtime_error&) {
    throw Unsupported("parse_rat: cannot parse '" + s + "'");
  }
}

namespace {

std::string coord_header(int d, const char* base, const char* tail) {
  std::ostringstream os;
  for (int i = 0; i < d; ++i) os << base << (i + 1) << ",";
  os << tail << "\n";
  return os.str();
}

void put_coords(std::ostringstream& os, const TorusGeom& g, long site) {
  Coords c = g.coords(site);
  for (int i = 0; i < g.d(); ++i) os << c[i] << ",";
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string table_csv(const TorusGeom& g, const std::vector<Rat>& t) {
  std::ostringstream os;
  os << coord_header(g.d(), "x_", "value");
  for (long s = 0; s < g.n_sites(); ++s) {
    put_coords(os, g, s);
    os << rat_str(t[s]) << "\n";
  }
  return os.str();
}

std::string table_csv(const TorusGeom& g, const std::vector<double>& t) {
  std::ostringstream os;
  os << coord_header(g.d(), "x_", "value");
  for (long s = 0; s < g.n_sites(); ++s) {
    put_coords(os, g, s);
    os << fmt(t[s]) << "\n";
  }
  return os.str();
}

std::string table_csv(const TorusGeom& g, const std::vector<double>& t,
                      const std::vector<double>& err) {
  std::ostringstream os;
  os << coord_header(g.d(), "x_", "value,stderr");
  for (long s = 0; s < g.n_sites(); ++s) {
    put_coords(os, g, s);
    os << fmt(t[s]) << "," << fmt(err[s]) << "\n";
  }
  return os.str();
}

std::string spectrum_csv(const TorusGeom& g, const Spectrum& s) {
  std::ostringstream os;
  os << coord_header(g.d(), "k_", "re,im");
  for (long m = 0; m < g.n_sites(); ++m) {
    std::vector<double> k = mode_k(g, m);
    for (int i = 0; i < g.d(); ++i) os << fmt(k[i]) << ",";
    os << fmt(s.v[m].real()) << "," << fmt(s.v[m].imag()) << "\n";
  }
  return os.str();
}

}  // namespace lp
