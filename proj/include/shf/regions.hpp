#pragma once

#include <functional>
#include <unordered_map>
#include <vector>

#include "shf/height.hpp"
#include "shf/lattice.hpp"

namespace shf {

// Fixed boundary conditions: the set Omega(R, b) of height functions equal
// to the reference b outside R.
struct FixedBoundary {
  Region region;
  HeightField reference;

  int dim() const { return reference.dim(); }
};

// Throws unless the reference is valid; optionally demands a connected
// complement (a region in the strict sense).
void check_fixed_boundary(const FixedBoundary& bc, bool require_region = false);

// Positive edge weights on E^d(R); unspecified edges weigh `fallback`.
class WeightFunction {
 public:
  WeightFunction() : fallback_(1) {}
  explicit WeightFunction(Rat fallback) : fallback_(std::move(fallback)) {
    fallback_.canonicalize();
    if (fallback_ <= 0) throw ValidationError("weights must be positive");
  }

  void set(const Edge& e, Rat w) {
    w.canonicalize();
    if (w <= 0) throw ValidationError("weights must be positive");
    entries_[e] = std::move(w);
  }
  const Rat& at(const Edge& e) const {
    auto it = entries_.find(e);
    return it == entries_.end() ? fallback_ : it->second;
  }
  bool is_uniform() const {
    if (fallback_ != 1) return false;
    for (const auto& [e, w] : entries_)
      if (w != 1) return false;
    return true;
  }
  const std::unordered_map<Edge, Rat, EdgeHash>& entries() const {
    return entries_;
  }
  const Rat& fallback() const { return fallback_; }

 private:
  Rat fallback_;
  std::unordered_map<Edge, Rat, EdgeHash> entries_;
};

// Pointwise extremes of Omega(R, b): largest and smallest member.
HeightField extremal_max(const FixedBoundary& bc);
HeightField extremal_min(const FixedBoundary& bc);

inline constexpr size_t kDefaultEnumerationCap = 24;

// Streams every member of Omega(R, b) in deterministic order (ascending
// value vectors over a fixed vertex order). Throws CapExceeded when R has
// more free vertices than the cap.
void enumerate_fields(const FixedBoundary& bc,
                      const std::function<void(const HeightField&)>& emit,
                      size_t cap = kDefaultEnumerationCap);

std::vector<HeightField> collect_fields(const FixedBoundary& bc,
                                        size_t cap = kDefaultEnumerationCap);

Int count_fields(const FixedBoundary& bc, size_t cap = kDefaultEnumerationCap);

// Product of w(e) over T(g) within E^d(R); the g-term of Z_w.
Rat boltzmann_mass(const HeightField& g, const FixedBoundary& bc,
                   const WeightFunction& w);

Rat partition_function(const FixedBoundary& bc, const WeightFunction& w,
                       size_t cap = kDefaultEnumerationCap);

// Periodic boundary conditions (L_n, s) with L_n = n(d+1) X^d.
struct PeriodicBoundary {
  int d = 2;
  int n = 1;
  Slope slope;

  int period() const { return n * (d + 1); }  // side of the fundamental domain
};

bool validate_periodic(const PeriodicBoundary& pbc);

// An (L_n, s)-periodic height function stored on the fundamental domain
// {0..N-1}^d of canonical coordinates, N = n(d+1).
class TorusState {
 public:
  TorusState(PeriodicBoundary pbc, std::vector<Value> vals);

  // Minimal periodic extension of the slope (a valid starting state).
  static TorusState initial(const PeriodicBoundary& pbc);

  const PeriodicBoundary& pbc() const { return pbc_; }
  int period() const { return pbc_.period(); }
  size_t size() const { return vals_.size(); }
  const std::vector<Value>& values() const { return vals_; }
  std::vector<Value>& values() { return vals_; }

  size_t index_of(const std::vector<int>& coords) const;
  std::vector<int> coords_of(size_t idx) const;

  // Neighbour along +-g_dir with the periodic value offset s(t) of the
  // wrap translation t.
  std::pair<size_t, Value> neighbor(size_t idx, int dir, int sign) const;

  Value value_at(size_t idx) const { return vals_[idx]; }

  // f - f(0): the representative with value 0 at the origin.
  TorusState normalized() const;

 private:
  PeriodicBoundary pbc_;
  std::vector<Value> vals_;
  std::vector<Value> wrap_offset_;  // s(N g_i) for i = 1..d, as integers
};

bool torus_validate(const TorusState& st);

}  // namespace shf
