#pragma once

#include <vector>

#include "shf/regions.hpp"

namespace shf {

struct SigmaEntry {
  Rat offset;  // a in [0, d+1)
  Int count;   // |Omega(B_n, floor(s + a))|
};

struct SigmaResult {
  int n = 0;
  Int best_count;   // infimum over offsets
  Rat best_offset;  // an offset attaining it
  double sigma = 0; // -n^{-d} log(best_count)
  std::vector<SigmaEntry> entries;  // all breakpoint evaluations
};

// sigma_n(s): the infimum over a in [0, d+1) reduces to finitely many
// breakpoint offsets where the floored boundary values change.
SigmaResult sigma_n(const Slope& s, int n, int d,
                    size_t cap = kDefaultEnumerationCap);

// The a = 0 evaluation alone.
SigmaResult sigma_zero_offset(const Slope& s, int n, int d,
                              size_t cap = kDefaultEnumerationCap);

struct SupermultiplicativeReport {
  Int count_n;       // inf over offsets at size n
  Int count_kn;      // inf over offsets at size kn
  Int count_n_pow;   // count_n^(k^d)
  bool holds = false;  // count_kn >= count_n^(k^d), exactly
};

SupermultiplicativeReport check_supermultiplicative(
    const Slope& s, int n, int k, int d, size_t cap = kDefaultEnumerationCap);

struct MidpointProbe {
  double sigma_s1 = 0, sigma_s2 = 0, sigma_mid = 0;
  double midpoint_gap = 0;  // sigma_mid - (sigma_s1 + sigma_s2) / 2
};

// Informational finite-n convexity probe at the midpoint slope.
MidpointProbe midpoint_convexity_probe(const Slope& s1, const Slope& s2, int n,
                                       int d,
                                       size_t cap = kDefaultEnumerationCap);

// Natural log of a positive big integer (long double precision).
double log_of_int(const Int& z);

}  // namespace shf
