#pragma once

#include <map>
#include <optional>
#include <unordered_map>
#include <vector>

#include "shf/lattice.hpp"
#include "shf/rational.hpp"

namespace shf {

// A linear form on H, recorded by its values on g_1..g_{d+1}. The values
// must sum to zero since g_1+...+g_{d+1} = 0.
struct Slope {
  std::vector<Rat> g;  // size d+1; g[i] = s(g_{i+1})

  int dim() const { return static_cast<int>(g.size()) - 1; }

  static Slope zero(int d) { return Slope{std::vector<Rat>(d + 1, Rat(0))}; }
  // Extreme point s^i of the Lipschitz simplex: -d at g_i, +1 elsewhere.
  static Slope extreme(int d, int i);

  Rat sum() const;
  bool in_lipschitz_simplex() const;  // member of S
  bool in_sn(int n) const;            // member of S_n
  Rat eval(const Vertex& v) const;    // s(v) on the canonical representative

  friend bool operator==(const Slope&, const Slope&) = default;
};

// Largest value congruent to par mod (d+1) that does not exceed t.
Value floor_to_parity(const Rat& t, int par, int d);

using Overrides = std::map<Vertex, Value>;

// A height function stored as a floored-affine background floor(s + a)
// plus finitely many overridden values. Functions that agree with a
// reference outside a finite set are therefore structural.
class HeightField {
 public:
  HeightField() = default;
  HeightField(Slope s, Rat offset, Overrides over = {})
      : slope_(std::move(s)), offset_(std::move(offset)), over_(std::move(over)) {
    offset_.canonicalize();
    for (Rat& g : slope_.g) g.canonicalize();
  }

  int dim() const { return slope_.dim(); }
  const Slope& slope() const { return slope_; }
  const Rat& offset() const { return offset_; }
  const Overrides& overrides() const { return over_; }

  Value background_value(const Vertex& v) const;
  Value value(const Vertex& v) const;
  bool has_override(const Vertex& v) const { return over_.count(v) > 0; }

  HeightField with_value(const Vertex& v, Value val) const;
  HeightField shifted(Value k) const;  // f + k, k multiple of d+1

  // Equal as functions: same background and same values over both windows.
  friend bool operator==(const HeightField& a, const HeightField& b);

 private:
  Slope slope_;
  Rat offset_;
  Overrides over_;
};

HeightField floor_field(const Slope& s, const Rat& offset);

struct ValidityReport {
  bool ok = true;
  bool slope_ok = true;
  std::vector<Vertex> parity_violations;
  std::vector<Edge> gradient_violations;
};

// Checks parity at all overridden vertices and the gradient condition on
// every edge touching the override window. Background validity follows
// from slope membership in S.
ValidityReport validate(const HeightField& f);
bool is_height_function(const HeightField& f);

Value gradient(const HeightField& f, const Edge& e);

// T(f) restricted to a finite window, together with enough context to
// evaluate the flow alpha_T on any edge of the lattice.
struct Tiling {
  Slope slope;
  Rat offset;
  VertexSet window;
  EdgeSet tiles;

  int dim() const { return slope.dim(); }
  // alpha_T along the +g_dir orientation of e: -d on tiles, 1 on other
  // window edges, the background gradient far away.
  Value alpha(const Edge& e) const;
  bool in_window_range(const Edge& e) const;
};

Tiling tiling_of(const HeightField& f);

// Integral of alpha_T from the origin to target, plus a. Path independent;
// reverse_coords picks a different staircase path (used to test that).
Value integrate_tiling(const Tiling& t, Value a, const Vertex& target,
                       bool reverse_coords = false);

std::pair<Value, Tiling> phi(const HeightField& f);
HeightField phi_inv(Value a, const Tiling& t);

// Pointwise max / min; both fields must share the same background.
HeightField vee(const HeightField& a, const HeightField& b);
HeightField wedge(const HeightField& a, const HeightField& b);

// f +- (d+1) at x; requires x to be a strict local min (sign +1) or strict
// local max (sign -1). Reports the blocking neighbour otherwise.
HeightField local_move(const HeightField& f, const Vertex& x, int sign);

struct MoveStep {
  Vertex at;
  int sign;  // +1 up, -1 down
};

// A sequence of local moves from f to g (valid at every stage); routes via
// the pointwise minimum when f and g are incomparable.
std::vector<MoveStep> move_path(const HeightField& f, const HeightField& g);
HeightField apply_moves(const HeightField& f, const std::vector<MoveStep>& p);

// Partial height data: exact integer values on a finite set of vertices.
using PartialHeights = std::map<Vertex, Value>;

struct LipschitzWitness {
  Vertex from, to;
  Value lhs, bound;
};

// Checks f(y) - f(x) <= |y - x|_+ and the parity condition on the domain.
std::optional<LipschitzWitness> lipschitz_violation(const PartialHeights& p,
                                                    int d);

// Largest height extension of a Lipschitz, parity-correct partial map,
// evaluated over the requested window: min over pinned y of p(y)+|x-y|_+.
// Returned as a partial map (the full extension has conical tails which a
// floored-affine background cannot represent).
PartialHeights kirszbraun_extend(const PartialHeights& partial,
                                 const std::vector<Vertex>& window, int d);

// The discrete graph V(f) over a window: integer points x + f(x) n/(d+1).
std::vector<std::vector<long long>> v_set(const HeightField& f,
                                          const std::vector<Vertex>& window);

// Stack heights of the monotone (stepped-surface) view over the window:
// for each base column, the top coordinate reachable under the down-closure
// of V(f).
std::map<std::vector<long long>, long long> monotone_view(
    const HeightField& f, const std::vector<Vertex>& window);

}  // namespace shf
