#pragma once

#include <vector>

#include "shf/regions.hpp"

namespace shf {

// h(e): the d! unrooted loops traversing e, one per S_d class.
struct DualHyperedge {
  Edge source;
  std::vector<UnrootedLoop> loops;  // sorted by xi
};

DualHyperedge dual_edge(const Edge& e);

// h(T) for the window part of a tiling.
std::vector<DualHyperedge> matching_of_tiling(const Tiling& t);

// True when {h(e) : e in tiles} covers every loop meeting the given loop
// set exactly once.
bool is_partition_of_loops(const std::vector<DualHyperedge>& matching,
                           const std::vector<UnrootedLoop>& loops);

// All loops traversing at least one edge of E^d(R).
std::vector<UnrootedLoop> loops_of_region(const Region& r);

// Index sets X_1..X_{d!}: per S_d class, the loops meeting T cap E^d(R),
// where T is the tiling of the reference. All classes share one size.
struct IndexSets {
  int d = 2;
  std::vector<std::vector<UnrootedLoop>> classes;  // d! classes, sorted
  size_t n = 0;

  // Index of a loop inside its class, or -1.
  int index_in_class(int cls, const UnrootedLoop& s) const;
};

IndexSets build_index_sets(const FixedBoundary& bc);

// Sparse hypermatrix of rank m = d! and size n: entries live on hyperedges
// of h(E^d(R)) and carry the edge weight.
struct Hypermatrix {
  int rank = 2;
  int n = 0;
  struct Entry {
    std::vector<int> idx;  // rank indices, 0-based
    Rat value;
  };
  std::vector<Entry> entries;  // sorted by idx
};

Hypermatrix build_hypermatrix(const FixedBoundary& bc, const WeightFunction& w);

// Value plus the per-term sign diagnostics of the brute-force expansion.
struct HyperdetResult {
  Rat det;
  Int nonzero_terms;
  bool sign_uniform = true;
  int sign = 0;  // sign of the common term, 0 when no nonzero term
};

// Brute force over (rank-1)-tuples of permutations, pruning on zero
// factors. Enforces the (n!)^(rank-1) <= 1e8 work cap.
HyperdetResult hyperdet_bruteforce(const Hypermatrix& a);

// Cayley hyperdeterminant; uses exact elimination for rank 2 and the brute
// force otherwise. Throws on odd rank.
Rat hyperdet(const Hypermatrix& a);

// Exact determinant of a dense rational matrix by Gaussian elimination.
Rat det_elimination(const std::vector<std::vector<Rat>>& m);

struct KasteleynReport {
  size_t n = 0;
  int rank = 2;
  Rat z;    // partition function by enumeration
  Rat det;  // Cayley hyperdeterminant of K_w
  int sign = 0;
  bool sign_uniform = false;
  bool equal = false;  // |det| == z exactly
};

KasteleynReport verify_kasteleyn(const FixedBoundary& bc,
                                 const WeightFunction& w,
                                 size_t cap = kDefaultEnumerationCap);

}  // namespace shf
