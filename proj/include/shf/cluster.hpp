#pragma once

#include <set>
#include <vector>

#include "shf/regions.hpp"
#include "shf/sampler.hpp"

namespace shf {

// Symmetric difference T_1 (-) T_2 of two tilings, as a graph: vertices are
// edges of the lattice carrying a g-jump, adjacent when they share a
// simplicial loop.
struct BoundaryGraph {
  std::vector<Edge> support;             // V_g, sorted
  std::vector<std::vector<int>> boundaries;  // connected components, by index
  int boundary_of(const Edge& e) const;

  size_t boundary_count() const { return boundaries.size(); }
};

BoundaryGraph difference_support(const FixedBoundary& bc,
                                 const HeightField& f1, const HeightField& f2);

// Tree of g-level sets (components of the lattice minus V_g) joined by the
// g-boundaries; the root is the outer level set containing the complement.
struct LevelSetDecomposition {
  BoundaryGraph graph;
  int root = 0;
  int level_set_count = 0;
  std::vector<Value> g_value;             // per level set, multiple of d+1
  std::vector<int> parent;                // tree structure rooted at root
  std::vector<int> parent_boundary;       // boundary index joining to parent
  std::vector<int> depth;
  std::vector<int> low_side;              // per boundary: level set x_g^-
  std::vector<int> high_side;             // per boundary: level set x_g^+
  std::unordered_map<Vertex, int, VertexHash> level_of_vertex;

  int level_of(const Vertex& v) const;    // complement vertices map to root
};

LevelSetDecomposition build_lsd(const FixedBoundary& bc, const HeightField& f1,
                                const HeightField& f2);

// Tree distance from the root level set to the level set containing x.
int lsd_distance(const LevelSetDecomposition& lsd, const Vertex& x);

// Deepest common vertex of the two root paths.
int meet_vertex(const LevelSetDecomposition& lsd, const Vertex& x,
                const Vertex& y);
int lsd_distance_to(const LevelSetDecomposition& lsd, int level_set);

using SwapMask = std::set<int>;  // boundary indices

// The cluster boundary swap: flips the gradient of g = f1 - f2 on the
// selected boundaries; preserves f1 + f2 pointwise.
std::pair<HeightField, HeightField> swap_pair(const FixedBoundary& bc,
                                              const HeightField& f1,
                                              const HeightField& f2,
                                              const SwapMask& mask);

// Includes each boundary in the mask independently with probability 1/2.
std::pair<HeightField, HeightField> rerandomize(const FixedBoundary& bc,
                                                const HeightField& f1,
                                                const HeightField& f2,
                                                const CounterRng& rng,
                                                uint64_t counter);

struct IdentityReport {
  Rat lhs;  // exact variance or covariance
  Rat rhs;  // (1/2)(d+1)^2 E d_LSD
  bool equal = false;
};

// Exact check of Var_w f(x) = (1/2)(d+1)^2 E_w d_LSD(0, x) by enumeration.
IdentityReport variance_identity_exact(const FixedBoundary& bc,
                                       const WeightFunction& w, const Vertex& x,
                                       size_t cap = kDefaultEnumerationCap);

IdentityReport covariance_identity_exact(const FixedBoundary& bc,
                                         const WeightFunction& w,
                                         const Vertex& x, const Vertex& y,
                                         size_t cap = kDefaultEnumerationCap);

struct EstimatorReport {
  double variance_estimate = 0;
  double variance_se = 0;
  double rhs_estimate = 0;  // (1/2)(d+1)^2 mean of d_LSD
  double rhs_se = 0;
  uint64_t samples = 0;
};

// Monte Carlo version of the identities for regions too large to
// enumerate; with y absent the variance flavour, otherwise covariance.
EstimatorReport identity_estimators_mcmc(const FixedBoundary& bc,
                                         const WeightFunction& w,
                                         const Vertex& x, uint64_t samples,
                                         uint64_t seed);
EstimatorReport identity_estimators_mcmc(const FixedBoundary& bc,
                                         const WeightFunction& w,
                                         const Vertex& x, const Vertex& y,
                                         uint64_t samples, uint64_t seed);

}  // namespace shf
