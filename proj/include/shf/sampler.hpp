#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "shf/regions.hpp"

namespace shf {

// Counter-based generator: the value at (stream, counter) depends only on
// the seed, so coupled chains and CFTP reuse randomness exactly.
class CounterRng {
 public:
  explicit CounterRng(uint64_t seed) : seed_(seed) {}

  uint64_t at(uint64_t stream, uint64_t counter) const;
  // Unbiased draw from [0, bound).
  uint64_t bounded(uint64_t stream, uint64_t counter, uint64_t bound) const;

 private:
  uint64_t seed_;
};

// One Glauber update drawn at `site` with uniform u: resamples the value
// from its allowed set (one or two candidates d+1 apart) with probability
// proportional to the product of incident edge weights; the high candidate
// is chosen iff u < p_high.
HeightField heat_bath_step(const HeightField& f, const FixedBoundary& bc,
                           const WeightFunction& w, const Vertex& site,
                           const Rat& u);

// Exact conditional probability of the high candidate at `site`.
struct SiteConditional {
  Value low = 0, high = 0;  // high == low when the site is frozen
  Rat p_high;
};
SiteConditional site_conditional(const HeightField& f, const FixedBoundary& bc,
                                 const WeightFunction& w, const Vertex& site);

// Region chain compiled to index arrays for fast stepping.
class ChainWorkspace {
 public:
  ChainWorkspace(const FixedBoundary& bc, const WeightFunction& w);

  const std::vector<Vertex>& sites() const { return sites_; }
  size_t site_count() const { return sites_.size(); }
  const std::vector<Value>& values() const { return vals_; }

  void load(const HeightField& f);
  HeightField unload() const;

  // Applies the shared-randomness update at site index k.
  void step(size_t k, uint64_t u);

  bool dominates(const ChainWorkspace& other) const;  // pointwise >=
  bool equals(const ChainWorkspace& other) const;

 private:
  friend struct ChainAccess;
  const FixedBoundary* bc_;
  struct Incident {
    int peer;        // site index, or -1 for a fixed boundary vertex
    Value boundary;  // value when peer < 0
    bool up;         // neighbour = site + g_i
    Rat weight;
  };
  std::vector<Vertex> sites_;
  std::vector<std::vector<Incident>> inc_;
  std::vector<int> par_;
  std::vector<Value> vals_;
  bool uniform_ = true;
  int d_ = 2;
};

HeightField glauber_run(const FixedBoundary& bc, const WeightFunction& w,
                        uint64_t steps, uint64_t seed);

struct CoupledResult {
  HeightField f1, f2;
  Value a_minus = 0, a_plus = 0;
  uint64_t steps = 0;
};

// Runs both chains on the same randomness; asserts the monotone sandwich
// a_- <= f1 - f2 <= a_+ after every step (hard error on violation).
CoupledResult coupled_run(const FixedBoundary& bc1, const FixedBoundary& bc2,
                          const WeightFunction& w, uint64_t steps,
                          uint64_t seed);

struct CftpOptions {
  uint64_t horizon = uint64_t(1) << 24;  // max steps from the past
  bool allow_weighted_experimental = false;
};

struct CftpResult {
  HeightField sample;
  uint64_t coalescence_time = 0;  // steps from the past actually needed
};

// Exact sampling from the uniform measure on Omega(R, b) by running the
// extremal chains from the past until they coalesce. Weighted measures are
// experimental: order preservation is asserted at runtime.
CftpResult cftp_sample(const FixedBoundary& bc, uint64_t seed,
                       const WeightFunction& w = WeightFunction(),
                       const CftpOptions& opts = {});

// Uniform Glauber dynamics on the torus; the reported state is normalised
// to f(0) = 0.
TorusState periodic_glauber(const PeriodicBoundary& pbc, uint64_t steps,
                            uint64_t seed);
TorusState periodic_glauber_from(const TorusState& start, uint64_t steps,
                                 uint64_t seed, uint64_t counter_base = 0);

struct VarianceBoundReport {
  double empirical_variance = 0;
  double bound = 0;  // (d+1)^2 * distance
  double slack = 0;  // 3 sigma allowance on the estimate
  bool consistent = true;
};

// Azuma-side check: empirical Var f(x) against (d+1)^2 d(x, complement).
VarianceBoundReport empirical_variance_bound_check(
    const std::vector<Value>& samples, const Vertex& x,
    const FixedBoundary& bc);

}  // namespace shf
