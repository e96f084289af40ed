#include "shf/tension.hpp"

#include <algorithm>
#include <cmath>

namespace shf {

double log_of_int(const Int& z) {
  if (z <= 0) throw ValidationError("log of a non-positive integer");
  signed long exp = 0;
  const double m = mpz_get_d_2exp(&exp, z.get_mpz_t());
  return std::log(m) + static_cast<double>(exp) * std::log(2.0);
}

namespace {

Int count_at_offset(const Slope& s, const Rat& a, int n, int d, size_t cap) {
  const FixedBoundary bc{make_box(BoxKind::Box, n, d), floor_field(s, a)};
  return count_fields(bc, cap);
}

// Offsets in [0, d+1) at which the floored boundary restriction changes:
// for each boundary vertex, the first a making s(x)+a hit the parity class.
std::vector<Rat> breakpoint_offsets(const Slope& s, int n, int d) {
  const Region box = make_box(BoxKind::Box, n, d);
  std::vector<Rat> offsets{Rat(0)};
  for (const Vertex& x : region_boundary(box)) {
    Rat r = Rat(parity(x)) - s.eval(x);
    r -= Rat(d + 1) * rat_floor(r / (d + 1));  // representative in [0, d+1)
    offsets.push_back(r);
  }
  std::sort(offsets.begin(), offsets.end());
  offsets.erase(std::unique(offsets.begin(), offsets.end()), offsets.end());
  return offsets;
}

}  // namespace

SigmaResult sigma_n(const Slope& s, int n, int d, size_t cap) {
  if (!s.in_lipschitz_simplex())
    throw ValidationError("slope outside the Lipschitz simplex");
  SigmaResult out;
  out.n = n;
  bool first = true;
  for (const Rat& a : breakpoint_offsets(s, n, d)) {
    SigmaEntry entry;
    entry.offset = a;
    entry.count = count_at_offset(s, a, n, d, cap);
    if (first || entry.count < out.best_count) {
      out.best_count = entry.count;
      out.best_offset = a;
      first = false;
    }
    out.entries.push_back(std::move(entry));
  }
  out.sigma =
      -log_of_int(out.best_count) / std::pow(static_cast<double>(n), d) + 0.0;
  return out;
}

SigmaResult sigma_zero_offset(const Slope& s, int n, int d, size_t cap) {
  if (!s.in_lipschitz_simplex())
    throw ValidationError("slope outside the Lipschitz simplex");
  SigmaResult out;
  out.n = n;
  out.best_offset = Rat(0);
  out.best_count = count_at_offset(s, Rat(0), n, d, cap);
  out.entries.push_back(SigmaEntry{Rat(0), out.best_count});
  out.sigma =
      -log_of_int(out.best_count) / std::pow(static_cast<double>(n), d) + 0.0;
  return out;
}

SupermultiplicativeReport check_supermultiplicative(const Slope& s, int n,
                                                    int k, int d, size_t cap) {
  SupermultiplicativeReport rep;
  rep.count_n = sigma_n(s, n, d, cap).best_count;
  rep.count_kn = sigma_n(s, n * k, d, cap).best_count;
  Int pow = 1;
  Int reps = 1;
  for (int i = 0; i < d; ++i) reps *= k;
  mpz_pow_ui(pow.get_mpz_t(), rep.count_n.get_mpz_t(), reps.get_ui());
  rep.count_n_pow = pow;
  rep.holds = rep.count_kn >= rep.count_n_pow;
  return rep;
}

MidpointProbe midpoint_convexity_probe(const Slope& s1, const Slope& s2, int n,
                                       int d, size_t cap) {
  Slope mid = s1;
  for (size_t i = 0; i < mid.g.size(); ++i)
    mid.g[i] = (s1.g[i] + s2.g[i]) / 2;
  MidpointProbe probe;
  probe.sigma_s1 = sigma_n(s1, n, d, cap).sigma;
  probe.sigma_s2 = sigma_n(s2, n, d, cap).sigma;
  probe.sigma_mid = sigma_n(mid, n, d, cap).sigma;
  probe.midpoint_gap = probe.sigma_mid - (probe.sigma_s1 + probe.sigma_s2) / 2;
  return probe;
}

}  // namespace shf
