#include "shf/height.hpp"

#include <algorithm>
#include <sstream>

namespace shf {

Slope Slope::extreme(int d, int i) {
  if (i < 1 || i > d + 1) throw ValidationError("extreme slope index out of range");
  Slope s = Slope::zero(d);
  for (int j = 0; j <= d; ++j) s.g[j] = (j + 1 == i) ? Rat(-d) : Rat(1);
  return s;
}

Rat Slope::sum() const {
  Rat t(0);
  for (const Rat& x : g) t += x;
  return t;
}

bool Slope::in_lipschitz_simplex() const {
  if (sum() != 0) return false;
  for (const Rat& x : g)
    if (x > 1) return false;
  return true;
}

bool Slope::in_sn(int n) const {
  if (!in_lipschitz_simplex()) return false;
  for (const Rat& x : g) {
    Rat t = x * n;
    if (t.get_den() != 1) return false;
  }
  return true;
}

Rat Slope::eval(const Vertex& v) const {
  if (v.dim() != dim()) throw ValidationError("slope/vertex dimension mismatch");
  Rat t(0);
  for (int i = 0; i <= dim(); ++i)
    if (v.coords()[i] != 0) t += Rat(v.coords()[i]) * g[i];
  return t;
}

Value floor_to_parity(const Rat& t, int par, int d) {
  const Rat shifted = (t - par) / (d + 1);
  const Int q = rat_floor(shifted);
  return to_value(Int(q * (d + 1) + par));
}

Value HeightField::background_value(const Vertex& v) const {
  return floor_to_parity(slope_.eval(v) + offset_, parity(v), dim());
}

Value HeightField::value(const Vertex& v) const {
  auto it = over_.find(v);
  if (it != over_.end()) return it->second;
  return background_value(v);
}

HeightField HeightField::with_value(const Vertex& v, Value val) const {
  HeightField f = *this;
  f.over_[v] = val;
  return f;
}

HeightField HeightField::shifted(Value k) const {
  if (k % (dim() + 1) != 0)
    throw ValidationError("height shift must be a multiple of d+1");
  HeightField f = *this;
  f.offset_ += rat_of(k);
  for (auto& [v, val] : f.over_) val += k;
  return f;
}

bool operator==(const HeightField& a, const HeightField& b) {
  if (a.slope_ != b.slope_ || a.offset_ != b.offset_) return false;
  for (const auto& [v, val] : a.over_)
    if (b.value(v) != val) return false;
  for (const auto& [v, val] : b.over_)
    if (a.value(v) != val) return false;
  return true;
}

HeightField floor_field(const Slope& s, const Rat& offset) {
  if (!s.in_lipschitz_simplex())
    throw ValidationError("slope outside the Lipschitz simplex");
  return HeightField(s, offset);
}

ValidityReport validate(const HeightField& f) {
  ValidityReport rep;
  const int d = f.dim();
  rep.slope_ok = f.slope().in_lipschitz_simplex();
  if (!rep.slope_ok) rep.ok = false;

  EdgeSet seen;
  for (const auto& [v, val] : f.overrides()) {
    if (((val % (d + 1)) + d + 1) % (d + 1) != parity(v)) {
      rep.parity_violations.push_back(v);
      rep.ok = false;
    }
    for (int i = 1; i <= d + 1; ++i) {
      for (Edge e : {Edge{v, i}, Edge{v.offset(i, -1), i}}) {
        if (!seen.insert(e).second) continue;
        const Value grad = f.value(e.other()) - f.value(e.base);
        if (grad != 1 && grad != -d) {
          rep.gradient_violations.push_back(e);
          rep.ok = false;
        }
      }
    }
  }
  return rep;
}

bool is_height_function(const HeightField& f) { return validate(f).ok; }

Value gradient(const HeightField& f, const Edge& e) {
  return f.value(e.other()) - f.value(e.base);
}

Value Tiling::alpha(const Edge& e) const {
  const int d = dim();
  if (tiles.count(e)) return -d;
  if (in_window_range(e)) return 1;
  const HeightField bg(slope, offset);
  return bg.background_value(e.other()) - bg.background_value(e.base);
}

bool Tiling::in_window_range(const Edge& e) const {
  return window.count(e.base) > 0 || window.count(e.other()) > 0;
}

Tiling tiling_of(const HeightField& f) {
  const ValidityReport rep = validate(f);
  if (!rep.ok) throw ValidationError("tiling_of requires a valid height function");
  const int d = f.dim();
  Tiling t;
  t.slope = f.slope();
  t.offset = f.offset();
  for (const auto& [v, val] : f.overrides()) t.window.insert(v);
  for (const auto& [v, val] : f.overrides()) {
    for (int i = 1; i <= d + 1; ++i) {
      for (Edge e : {Edge{v, i}, Edge{v.offset(i, -1), i}}) {
        if (gradient(f, e) == -d) t.tiles.insert(e);
      }
    }
  }
  return t;
}

Value integrate_tiling(const Tiling& t, Value a, const Vertex& target,
                       bool reverse_coords) {
  const int d = t.dim();
  if (a % (d + 1) != 0)
    throw ValidationError("integration constant must be a multiple of d+1");
  Vertex cur = Vertex::origin(d);
  Value val = a;
  std::vector<int> order(d);
  for (int i = 0; i < d; ++i) order[i] = reverse_coords ? d - i : i + 1;
  for (int i : order) {
    const int goal = target.coords()[i - 1];
    while (cur.coords()[i - 1] != goal) {
      if (cur.coords()[i - 1] < goal) {
        val += t.alpha(Edge{cur, i});
        cur = cur.offset(i, +1);
      } else {
        Vertex prev = cur.offset(i, -1);
        val -= t.alpha(Edge{prev, i});
        cur = prev;
      }
    }
  }
  return val;
}

std::pair<Value, Tiling> phi(const HeightField& f) {
  return {f.value(Vertex::origin(f.dim())), tiling_of(f)};
}

HeightField phi_inv(Value a, const Tiling& t) {
  const int d = t.dim();
  if (a % (d + 1) != 0)
    throw ValidationError("height at the origin must be a multiple of d+1");
  Overrides over;
  for (const Vertex& v : t.window) {
    const Value val = integrate_tiling(t, a, v);
    // Path independence fails exactly when the edge set is not a tiling.
    if (integrate_tiling(t, a, v, true) != val)
      throw ValidationError("edge set is not a tiling: flow is not conservative");
    over[v] = val;
  }
  HeightField f(t.slope, t.offset, std::move(over));
  if (!is_height_function(f))
    throw ValidationError("edge set is not a tiling over this window");
  return f;
}

namespace {

HeightField combine(const HeightField& a, const HeightField& b, bool take_max) {
  // Backgrounds must agree up to a constant multiple of d+1, so that the
  // result is again a finite override of one of them.
  if (a.slope() != b.slope())
    throw ValidationError("vee/wedge require fields of equal slope");
  const Rat doff = a.offset() - b.offset();
  if (doff.get_den() != 1 || Int(doff.get_num()) % (a.dim() + 1) != 0)
    throw ValidationError(
        "vee/wedge require offsets differing by a multiple of d+1");
  // Off both windows the result equals the larger (or smaller) background.
  const bool use_a = (doff >= 0) == take_max;
  const HeightField& host = use_a ? a : b;
  Overrides over;
  for (const HeightField* src : {&a, &b}) {
    for (const auto& [v, val] : src->overrides()) {
      if (over.count(v)) continue;
      const Value va = a.value(v), vb = b.value(v);
      over[v] = take_max ? std::max(va, vb) : std::min(va, vb);
    }
  }
  return HeightField(host.slope(), host.offset(), std::move(over));
}

}  // namespace

HeightField vee(const HeightField& a, const HeightField& b) {
  return combine(a, b, true);
}

HeightField wedge(const HeightField& a, const HeightField& b) {
  return combine(a, b, false);
}

HeightField local_move(const HeightField& f, const Vertex& x, int sign) {
  const int d = f.dim();
  if (sign != 1 && sign != -1) throw ValidationError("move sign must be +-1");
  const Value v = f.value(x);
  for (int i = 1; i <= d + 1; ++i) {
    const Value up = f.value(x.offset(i, +1));
    const Value down = f.value(x.offset(i, -1));
    const Value want_up = (sign > 0) ? v + 1 : v - d;
    const Value want_down = (sign > 0) ? v + d : v - 1;
    if (up != want_up)
      throw ValidationError("local move blocked by neighbour " +
                            x.offset(i, +1).str());
    if (down != want_down)
      throw ValidationError("local move blocked by neighbour " +
                            x.offset(i, -1).str());
  }
  return f.with_value(x, v + sign * (d + 1));
}

std::vector<MoveStep> move_path(const HeightField& f, const HeightField& g) {
  if (f.slope() != g.slope() || f.offset() != g.offset())
    throw ValidationError("move_path requires fields over the same background");
  // Every difference between the intermediate functions stays inside the
  // union of the two override windows.
  std::vector<Vertex> support;
  for (const auto& [v, val] : f.overrides()) support.push_back(v);
  for (const auto& [v, val] : g.overrides()) support.push_back(v);
  std::sort(support.begin(), support.end());
  support.erase(std::unique(support.begin(), support.end()), support.end());

  std::vector<MoveStep> steps;
  HeightField cur = f;
  const HeightField low = wedge(f, g);

  // Descending phase: repeatedly lower a maximal vertex that is still above
  // the target; such a vertex is always a strict local max.
  auto walk = [&](const HeightField& target, int sign) {
    for (;;) {
      std::optional<Vertex> pick;
      Value best = 0;
      for (const Vertex& v : support) {
        const Value c = cur.value(v);
        const Value t = target.value(v);
        const bool eligible = (sign < 0) ? (c > t) : (c < t);
        if (!eligible) continue;
        const bool better = (sign < 0) ? (c > best) : (c < best);
        if (!pick || better) {
          pick = v;
          best = c;
        }
      }
      if (!pick) break;
      cur = local_move(cur, *pick, sign);
      steps.push_back({*pick, sign});
    }
  };

  walk(low, -1);
  walk(g, +1);
  if (!(cur == g)) throw ValidationError("move_path failed to reach target");
  return steps;
}

HeightField apply_moves(const HeightField& f, const std::vector<MoveStep>& p) {
  HeightField cur = f;
  for (const MoveStep& m : p) cur = local_move(cur, m.at, m.sign);
  return cur;
}

std::optional<LipschitzWitness> lipschitz_violation(const PartialHeights& p,
                                                    int d) {
  for (const auto& [x, vx] : p) {
    if (((vx % (d + 1)) + d + 1) % (d + 1) != parity(x))
      return LipschitzWitness{x, x, vx, static_cast<Value>(parity(x))};
    for (const auto& [y, vy] : p) {
      const Value bound = plus_norm(vertex_sub(y, x));
      if (vy - vx > bound) return LipschitzWitness{x, y, vy - vx, bound};
    }
  }
  return std::nullopt;
}

PartialHeights kirszbraun_extend(const PartialHeights& partial,
                                 const std::vector<Vertex>& window, int d) {
  if (partial.empty()) throw ValidationError("cannot extend an empty partial map");
  if (auto w = lipschitz_violation(partial, d)) {
    std::ostringstream os;
    if (w->from == w->to)
      os << "parity violation at " << w->from.str();
    else
      os << "Lipschitz violation " << w->from.str() << " -> " << w->to.str()
         << ": " << w->lhs << " > " << w->bound;
    throw ValidationError(os.str());
  }
  PartialHeights out = partial;
  for (const Vertex& x : window) {
    if (out.count(x)) continue;
    Value best = 0;
    bool first = true;
    for (const auto& [y, vy] : partial) {
      const Value cand = vy + plus_norm(vertex_sub(x, y));
      if (first || cand < best) best = cand, first = false;
    }
    out[x] = best;
  }
  return out;
}

std::vector<std::vector<long long>> v_set(const HeightField& f,
                                          const std::vector<Vertex>& window) {
  const int d = f.dim();
  std::vector<std::vector<long long>> pts;
  pts.reserve(window.size());
  for (const Vertex& v : window) {
    const Value val = f.value(v);
    long long sum = 0;
    for (int c : v.coords()) sum += c;
    const long long k = (val - sum) / (d + 1);
    if (k * (d + 1) != val - sum)
      throw ValidationError("value violates the parity condition");
    std::vector<long long> p;
    p.reserve(d + 1);
    for (int c : v.coords()) p.push_back(c + k);
    pts.push_back(std::move(p));
  }
  return pts;
}

std::map<std::vector<long long>, long long> monotone_view(
    const HeightField& f, const std::vector<Vertex>& window) {
  const auto pts = v_set(f, window);
  const int d = f.dim();
  std::map<std::vector<long long>, long long> out;
  for (const auto& p : pts) {
    std::vector<long long> base(p.begin(), p.begin() + d);
    long long top = p[d];
    for (const auto& q : pts) {
      bool covers = true;
      for (int i = 0; i < d; ++i)
        if (q[i] < base[i]) {
          covers = false;
          break;
        }
      if (covers) top = std::max(top, q[d]);
    }
    out[std::move(base)] = top;
  }
  return out;
}

}  // namespace shf
