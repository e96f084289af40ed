#include "shf/sampler.hpp"

#include <algorithm>
#include <cmath>

namespace shf {

namespace {

uint64_t mix64(uint64_t z) {
  z ^= z >> 33;
  z *= 0xff51afd7ed558ccdull;
  z ^= z >> 33;
  z *= 0xc4ceb9fe1a85ec53ull;
  z ^= z >> 33;
  return z;
}

}  // namespace

uint64_t CounterRng::at(uint64_t stream, uint64_t counter) const {
  const uint64_t key = mix64(seed_ + stream * 0x9e3779b97f4a7c15ull);
  return mix64(key ^ (counter * 0xbf58476d1ce4e5b9ull + 0x94d049bb133111ebull));
}

uint64_t CounterRng::bounded(uint64_t stream, uint64_t counter,
                             uint64_t bound) const {
  if (bound == 0) throw ValidationError("bounded draw from empty range");
  const uint64_t residue = (UINT64_MAX % bound + 1) % bound;
  const uint64_t limit = UINT64_MAX - residue;  // inclusive acceptance limit
  uint64_t salt = 0;
  for (;;) {
    const uint64_t v = at(stream ^ (0xabcdull + salt) * 0x2545f4914f6cdd1dull,
                          counter);
    if (v <= limit || residue == 0) return v % bound;
    ++salt;
  }
}

namespace {

struct AllowedSet {
  Value lo = 0, hi = 0;
  bool frozen() const { return lo == hi; }
};

// Allowed values at a site given its 2(d+1) neighbour values.
template <typename NeighborValue>
AllowedSet allowed_set(int d, int par, NeighborValue&& nv) {
  Value lo = 0, hi = 0;
  bool first = true;
  for (int dir = 1; dir <= d + 1; ++dir) {
    for (int sign : {+1, -1}) {
      const Value v = nv(dir, sign);
      const Value clo = (sign > 0) ? v - 1 : v - d;
      const Value chi = (sign > 0) ? v + d : v + 1;
      if (first) {
        lo = clo;
        hi = chi;
        first = false;
      } else {
        lo = std::max(lo, clo);
        hi = std::min(hi, chi);
      }
    }
  }
  AllowedSet out;
  out.lo = lo + ((par - lo) % (d + 1) + (d + 1)) % (d + 1);
  out.hi = hi - ((hi - par) % (d + 1) + (d + 1)) % (d + 1);
  if (out.hi < out.lo)
    throw ValidationError("no allowed value at site: state is invalid");
  if (out.hi != out.lo && out.hi != out.lo + d + 1)
    throw ValidationError("allowed set wider than one flip");
  return out;
}

}  // namespace

SiteConditional site_conditional(const HeightField& f, const FixedBoundary& bc,
                                 const WeightFunction& w, const Vertex& site) {
  if (!bc.region.contains(site))
    throw ValidationError("site outside the movable set");
  const int d = f.dim();
  const AllowedSet a = allowed_set(d, parity(site), [&](int dir, int sign) {
    return f.value(site.offset(dir, sign));
  });
  SiteConditional out;
  out.low = a.lo;
  out.high = a.hi;
  if (a.frozen()) {
    out.p_high = Rat(1);
    return out;
  }
  Rat w_up(1), w_down(1);
  for (int dir = 1; dir <= d + 1; ++dir) {
    w_up *= w.at(Edge{site, dir});
    w_down *= w.at(Edge{site.offset(dir, -1), dir});
  }
  out.p_high = w_up / (w_up + w_down);
  return out;
}

HeightField heat_bath_step(const HeightField& f, const FixedBoundary& bc,
                           const WeightFunction& w, const Vertex& site,
                           const Rat& u) {
  const SiteConditional c = site_conditional(f, bc, w, site);
  if (c.low == c.high) return f.with_value(site, c.low);
  return f.with_value(site, u < c.p_high ? c.high : c.low);
}

ChainWorkspace::ChainWorkspace(const FixedBoundary& bc,
                               const WeightFunction& w) {
  check_fixed_boundary(bc);
  bc_ = &bc;
  d_ = bc.dim();
  sites_ = bc.region.verts;
  uniform_ = w.is_uniform();
  std::unordered_map<Vertex, int, VertexHash> slot;
  for (size_t i = 0; i < sites_.size(); ++i)
    slot[sites_[i]] = static_cast<int>(i);
  inc_.resize(sites_.size());
  par_.resize(sites_.size());
  vals_.assign(sites_.size(), 0);
  for (size_t i = 0; i < sites_.size(); ++i) {
    par_[i] = parity(sites_[i]);
    for (int dir = 1; dir <= d_ + 1; ++dir) {
      for (int sign : {+1, -1}) {
        Incident in;
        const Vertex peer = sites_[i].offset(dir, sign);
        in.up = sign > 0;
        const Edge e = in.up ? Edge{sites_[i], dir} : Edge{peer, dir};
        in.weight = w.at(e);
        auto it = slot.find(peer);
        if (it != slot.end()) {
          in.peer = it->second;
          in.boundary = 0;
        } else {
          in.peer = -1;
          in.boundary = bc.reference.value(peer);
        }
        inc_[i].push_back(std::move(in));
      }
    }
  }
  load(bc.reference);
}

void ChainWorkspace::load(const HeightField& f) {
  for (size_t i = 0; i < sites_.size(); ++i) vals_[i] = f.value(sites_[i]);
}

HeightField ChainWorkspace::unload() const {
  Overrides over;
  for (const auto& [v, val] : bc_->reference.overrides())
    if (!bc_->region.contains(v)) over[v] = val;
  for (size_t i = 0; i < sites_.size(); ++i) over[sites_[i]] = vals_[i];
  return HeightField(bc_->reference.slope(), bc_->reference.offset(),
                     std::move(over));
}

void ChainWorkspace::step(size_t k, uint64_t u) {
  Value lo = 0, hi = 0;
  bool first = true;
  for (const Incident& in : inc_[k]) {
    const Value v = in.peer >= 0 ? vals_[in.peer] : in.boundary;
    const Value clo = in.up ? v - 1 : v - d_;
    const Value chi = in.up ? v + d_ : v + 1;
    if (first) {
      lo = clo;
      hi = chi;
      first = false;
    } else {
      lo = std::max(lo, clo);
      hi = std::min(hi, chi);
    }
  }
  const int par = par_[k];
  lo += ((par - lo) % (d_ + 1) + (d_ + 1)) % (d_ + 1);
  hi -= ((hi - par) % (d_ + 1) + (d_ + 1)) % (d_ + 1);
  if (hi == lo) {
    vals_[k] = lo;
    return;
  }
  bool take_high;
  if (uniform_) {
    take_high = u < (uint64_t(1) << 63);
  } else {
    Rat w_up(1), w_down(1);
    for (const Incident& in : inc_[k]) {
      if (in.up)
        w_up *= in.weight;
      else
        w_down *= in.weight;
    }
    // u / 2^64 < w_up / (w_up + w_down), cross-multiplied exactly.
    const Rat p = w_up / (w_up + w_down);
    Int lhs = Int(p.get_den()) * Int(mpz_class(std::to_string(u)));
    Int rhs = Int(p.get_num()) << 64;
    take_high = lhs < rhs;
  }
  vals_[k] = take_high ? hi : lo;
}

bool ChainWorkspace::dominates(const ChainWorkspace& other) const {
  for (size_t i = 0; i < vals_.size(); ++i)
    if (vals_[i] < other.vals_[i]) return false;
  return true;
}

bool ChainWorkspace::equals(const ChainWorkspace& other) const {
  return vals_ == other.vals_;
}

HeightField glauber_run(const FixedBoundary& bc, const WeightFunction& w,
                        uint64_t steps, uint64_t seed) {
  ChainWorkspace ws(bc, w);
  if (ws.site_count() == 0) return bc.reference;
  const CounterRng rng(seed);
  for (uint64_t t = 0; t < steps; ++t) {
    const size_t k = rng.bounded(0, t, ws.site_count());
    ws.step(k, rng.at(1, t));
  }
  return ws.unload();
}

CoupledResult coupled_run(const FixedBoundary& bc1, const FixedBoundary& bc2,
                          const WeightFunction& w, uint64_t steps,
                          uint64_t seed) {
  if (bc1.region.verts != bc2.region.verts)
    throw ValidationError("coupled chains need identical regions");
  const int d = bc1.dim();
  if (bc1.reference.slope() != bc2.reference.slope())
    throw ValidationError("coupled chains need equal background slopes");
  const Rat doff = bc1.reference.offset() - bc2.reference.offset();
  if (doff.get_den() != 1 || Int(doff.get_num()) % (d + 1) != 0)
    throw ValidationError(
        "background offsets must differ by a multiple of d+1");
  const Value far = to_value(Int(doff.get_num()));

  // Extremes of b1 - b2 off R: the far field plus every override/boundary
  // vertex outside the region.
  Value a_minus = far, a_plus = far;
  auto fold = [&](const Vertex& v) {
    if (bc1.region.contains(v)) return;
    const Value diff = bc1.reference.value(v) - bc2.reference.value(v);
    a_minus = std::min(a_minus, diff);
    a_plus = std::max(a_plus, diff);
  };
  for (const auto& [v, val] : bc1.reference.overrides()) fold(v);
  for (const auto& [v, val] : bc2.reference.overrides()) fold(v);
  for (const Vertex& v : region_boundary(bc1.region)) fold(v);

  ChainWorkspace w1(bc1, w), w2(bc2, w);
  w1.load(extremal_min(bc1));
  w2.load(extremal_min(bc2));
  const CounterRng rng(seed);
  const size_t n = w1.site_count();
  for (uint64_t t = 0; t < steps && n > 0; ++t) {
    const size_t k = rng.bounded(0, t, n);
    const uint64_t u = rng.at(1, t);
    w1.step(k, u);
    w2.step(k, u);
    const Value diff = w1.values()[k] - w2.values()[k];
    if (diff < a_minus || diff > a_plus)
      throw ValidationError("monotone sandwich violated at step " +
                            std::to_string(t));
  }
  CoupledResult out;
  out.f1 = w1.unload();
  out.f2 = w2.unload();
  out.a_minus = a_minus;
  out.a_plus = a_plus;
  out.steps = steps;
  return out;
}

CftpResult cftp_sample(const FixedBoundary& bc, uint64_t seed,
                       const WeightFunction& w, const CftpOptions& opts) {
  if (!w.is_uniform() && !opts.allow_weighted_experimental)
    throw ValidationError(
        "weighted CFTP is experimental; pass the explicit option");
  ChainWorkspace top(bc, w), bottom(bc, w);
  if (top.site_count() == 0) {
    return CftpResult{bc.reference, 0};
  }
  const HeightField fmax = extremal_max(bc);
  const HeightField fmin = extremal_min(bc);
  const CounterRng rng(seed);
  const size_t n = top.site_count();

  uint64_t horizon = std::max<uint64_t>(16, n);
  for (;;) {
    if (horizon > opts.horizon)
      throw CapExceeded("CFTP did not coalesce within the horizon of " +
                        std::to_string(opts.horizon) + " steps");
    top.load(fmax);
    bottom.load(fmin);
    // Step indices count backwards from time 0; index t is the step taken
    // at time -t, so randomness is shared between sweeps.
    for (uint64_t t = horizon; t >= 1; --t) {
      const size_t k = rng.bounded(0, t, n);
      const uint64_t u = rng.at(1, t);
      top.step(k, u);
      bottom.step(k, u);
      if (!top.dominates(bottom))
        throw ValidationError("monotone order violated during CFTP");
    }
    if (top.equals(bottom)) {
      return CftpResult{top.unload(), horizon};
    }
    horizon *= 2;
  }
}

TorusState periodic_glauber_from(const TorusState& start, uint64_t steps,
                                 uint64_t seed, uint64_t counter_base) {
  TorusState st = start;
  const int d = st.pbc().d;
  const CounterRng rng(seed);
  const size_t n = st.size();
  for (uint64_t t = 0; t < steps; ++t) {
    const uint64_t ctr = counter_base + t;
    const size_t idx = rng.bounded(2, ctr, n);
    Value lo = 0, hi = 0;
    bool first = true;
    for (int dir = 1; dir <= d + 1; ++dir) {
      for (int sign : {+1, -1}) {
        const auto [nidx, off] = st.neighbor(idx, dir, sign);
        const Value v = st.value_at(nidx) + off;
        const Value clo = (sign > 0) ? v - 1 : v - d;
        const Value chi = (sign > 0) ? v + d : v + 1;
        if (first) {
          lo = clo;
          hi = chi;
          first = false;
        } else {
          lo = std::max(lo, clo);
          hi = std::min(hi, chi);
        }
      }
    }
    std::vector<int> c = st.coords_of(idx);
    long long sum = 0;
    for (int x : c) sum += x;
    const int par = static_cast<int>(((sum % (d + 1)) + d + 1) % (d + 1));
    lo += ((par - lo) % (d + 1) + (d + 1)) % (d + 1);
    hi -= ((hi - par) % (d + 1) + (d + 1)) % (d + 1);
    if (hi != lo) {
      const uint64_t u = rng.at(3, ctr);
      st.values()[idx] = (u < (uint64_t(1) << 63)) ? hi : lo;
    }
  }
  return st;
}

TorusState periodic_glauber(const PeriodicBoundary& pbc, uint64_t steps,
                            uint64_t seed) {
  return periodic_glauber_from(TorusState::initial(pbc), steps, seed)
      .normalized();
}

VarianceBoundReport empirical_variance_bound_check(
    const std::vector<Value>& samples, const Vertex& x,
    const FixedBoundary& bc) {
  VarianceBoundReport rep;
  const size_t m = samples.size();
  if (m < 2) throw ValidationError("variance check needs at least 2 samples");
  double mean = 0;
  for (Value v : samples) mean += static_cast<double>(v);
  mean /= static_cast<double>(m);
  double var = 0;
  for (Value v : samples) {
    const double dlt = static_cast<double>(v) - mean;
    var += dlt * dlt;
  }
  var /= static_cast<double>(m - 1);

  Value dist = 0;
  if (bc.region.contains(x)) {
    bool first = true;
    for (const Vertex& y : region_boundary(bc.region)) {
      const Value dxy = graph_distance(x, y);
      if (first || dxy < dist) dist = dxy, first = false;
    }
  }
  const int d = bc.dim();
  rep.empirical_variance = var;
  rep.bound = static_cast<double>((d + 1) * (d + 1)) * static_cast<double>(dist);
  rep.slack = 3.0 * var * std::sqrt(2.0 / static_cast<double>(m - 1));
  rep.consistent = var <= rep.bound + rep.slack;
  return rep;
}

}  // namespace shf
