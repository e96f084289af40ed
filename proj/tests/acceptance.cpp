// Acceptance suite: one checkable criterion per function, each printing a
// single PASS/FAIL line. Run all, or a single one with --criterion k.

#include <chrono>
#include <cmath>
#include <cstring>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <vector>

#include "oracles.hpp"
#include "shf/cluster.hpp"
#include "shf/kasteleyn.hpp"
#include "shf/sampler.hpp"
#include "shf/tension.hpp"

using namespace shf;

namespace {

struct Criterion {
  int id;
  std::string summary;
  std::vector<std::string> failures;

  Criterion(int id_, std::string summary_)
      : id(id_), summary(std::move(summary_)) {}

  void require(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }

  bool finish(std::ostream& os, double seconds) const {
    os << "criterion " << id << ": " << (failures.empty() ? "PASS" : "FAIL")
       << "  " << summary << "  [" << std::fixed << seconds << "s]\n";
    for (const std::string& f : failures) os << "    - " << f << "\n";
    return failures.empty();
  }
};

FixedBoundary flat_box(int d, int n) {
  return FixedBoundary{make_box(BoxKind::Box, n, d),
                       floor_field(Slope::zero(d), Rat(0))};
}

Region translated(const Region& r, const Vertex& t) {
  std::vector<Vertex> vs;
  for (const Vertex& v : r.verts) vs.push_back(v.translated(t));
  return Region::of(r.d, std::move(vs));
}

Region rect_region(int w, int h) {
  std::vector<Vertex> vs;
  for (int a = 1; a <= w; ++a)
    for (int b = 1; b <= h; ++b) vs.push_back(Vertex::canonical({a, b, 0}));
  return Region::of(2, std::move(vs));
}

std::vector<Value> key_of(const FixedBoundary& bc, const HeightField& f) {
  std::vector<Value> key;
  for (const Vertex& v : bc.region.verts) key.push_back(f.value(v));
  return key;
}

WeightFunction random_weights(const FixedBoundary& bc, std::mt19937& rng,
                              int max_pq = 4) {
  std::uniform_int_distribution<int> pick(1, max_pq);
  WeightFunction w;
  for (const Edge& e : incident_edges(bc.region))
    w.set(e, make_rat(pick(rng), pick(rng)));
  return w;
}

// ---------------------------------------------------------------------------

bool criterion1() {
  const auto t0 = std::chrono::steady_clock::now();
  Criterion c(1, "bijection suite: phi round-trips on all enumerated fields");

  for (int d : {2, 3}) {
    const FixedBoundary bc = flat_box(d, d == 2 ? 4 : 3);
    const auto fields = collect_fields(bc);
    const auto closure = oracle::local_move_closure(bc);
    c.require(fields.size() == closure.size(),
              "enumerator disagrees with the local-move closure oracle");
    c.require(fields.size() == (d == 2 ? 22u : 18u),
              "unexpected ensemble size");
    for (const HeightField& f : fields) {
      const auto [a, t] = phi(f);
      if (!(phi_inv(a, t) == f)) {
        c.require(false, "round trip failed on a field");
        break;
      }
    }
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  const bool ok = c.finish(std::cout, secs);
  return ok && secs < 60.0;
}

bool criterion2() {
  const auto t0 = std::chrono::steady_clock::now();
  Criterion c(2, "d=2 Kasteleyn: |det K_w| = Z_w exactly on 50 random "
                 "instances, uniform term signs");
  std::mt19937 rng(20240801);

  // Random reference boundaries from the flat ensemble on B_5.
  std::vector<HeightField> refs;
  const FixedBoundary big = flat_box(2, 5);
  for (uint64_t i = 0; i < 12; ++i)
    refs.push_back(cftp_sample(big, 555 + i).sample);

  std::vector<Region> shapes{make_box(BoxKind::Box, 3, 2), rect_region(2, 3),
                             rect_region(1, 4),
                             Region::of(2, {Vertex::canonical({1, 1, 0}),
                                            Vertex::canonical({2, 2, 0}),
                                            Vertex::canonical({1, 2, 0})})};
  std::uniform_int_distribution<int> shift(-1, 2), pickref(0, 11);
  int verified = 0;
  int attempts = 0;
  while (verified < 50 && attempts < 400) {
    ++attempts;
    const Region base = shapes[size_t(attempts) % shapes.size()];
    const Region r = translated(
        base, Vertex::canonical({shift(rng), shift(rng), 0}));
    const FixedBoundary bc{r, refs[size_t(pickref(rng))]};
    if (!complement_connected(bc.region)) continue;
    const IndexSets xs = build_index_sets(bc);
    if (xs.n == 0 || xs.n > 8) continue;
    const WeightFunction w = random_weights(bc, rng);
    const KasteleynReport rep = verify_kasteleyn(bc, w);
    if (!rep.equal) c.require(false, "determinant magnitude differs from Z_w");
    if (!rep.sign_uniform) c.require(false, "mixed Leibniz term signs");
    if (rep.z != partition_function(bc, w))
      c.require(false, "partition function mismatch");
    ++verified;
    if (!c.failures.empty()) break;
  }
  c.require(verified >= 50, "could not assemble 50 admissible instances");
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  const bool ok = c.finish(std::cout, secs);
  return ok && secs < 120.0;
}

bool criterion3() {
  const auto t0 = std::chrono::steady_clock::now();
  Criterion c(3, "d=3 Kasteleyn: brute-force hyperdeterminant magnitude "
                 "equals the count on single- and two-vertex regions");
  const HeightField b = floor_field(Slope::zero(3), Rat(0));
  int singles = 0, pairs = 0;
  for (int a1 = 0; a1 <= 2; ++a1)
    for (int a2 = 0; a2 <= 2; ++a2)
      for (int a3 = 0; a3 <= 2; ++a3) {
        const Vertex x = Vertex::canonical({a1, a2, a3, 0});
        const FixedBoundary bc{Region::of(3, {x}), b};
        if (build_index_sets(bc).n > 4) continue;
        const KasteleynReport rep = verify_kasteleyn(bc, WeightFunction{});
        c.require(rep.equal, "single-vertex determinant mismatch at " + x.str());
        c.require(rep.sign_uniform, "sign mixing at " + x.str());
        ++singles;
      }
  const Vertex x0 = Vertex::canonical({1, 1, 1, 0});
  for (int dir = 1; dir <= 4; ++dir) {
    for (int sign : {+1, -1}) {
      const Vertex y = x0.offset(dir, sign);
      const FixedBoundary bc{Region::of(3, {x0, y}), b};
      if (build_index_sets(bc).n > 4) continue;
      const KasteleynReport rep = verify_kasteleyn(bc, WeightFunction{});
      c.require(rep.equal, "two-vertex determinant mismatch at " + y.str());
      c.require(rep.sign_uniform, "sign mixing at pair " + y.str());
      ++pairs;
    }
  }
  c.require(singles >= 20, "too few single-vertex instances");
  c.require(pairs >= 4, "too few two-vertex instances");
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  const bool ok = c.finish(std::cout, secs);
  return ok && secs < 300.0;
}

std::vector<FixedBoundary> identity_instances() {
  std::vector<FixedBoundary> out;
  const HeightField flat2 = floor_field(Slope::zero(2), Rat(0));
  const HeightField flat3 = floor_field(Slope::zero(3), Rat(0));
  // d = 2 shapes; none contains the origin.
  out.push_back(flat_box(2, 3));
  out.push_back({rect_region(2, 3), flat2});
  out.push_back({rect_region(1, 4), flat2});
  out.push_back({translated(make_box(BoxKind::Box, 3, 2),
                            Vertex::canonical({2, 0, 0})),
                 flat2});
  out.push_back({Region::of(2, {Vertex::canonical({1, 1, 0}),
                                Vertex::canonical({1, 2, 0}),
                                Vertex::canonical({2, 2, 0}),
                                Vertex::canonical({3, 1, 0})}),
                 flat2});
  // Sampled d = 2 boundaries over B_4.
  for (uint64_t i = 0; i < 3; ++i) {
    const HeightField b = cftp_sample(flat_box(2, 4), 9100 + i).sample;
    out.push_back({make_box(BoxKind::Box, 3, 2), b});
  }
  // d = 3 shapes.
  out.push_back(flat_box(3, 3));
  out.push_back({Region::of(3, {Vertex::canonical({1, 1, 1, 0}),
                                Vertex::canonical({1, 1, 2, 0})}),
                 flat3});
  out.push_back({Region::of(3, {Vertex::canonical({1, 1, 1, 0})}), flat3});
  out.push_back({Region::of(3, {Vertex::canonical({1, 2, 1, 0}),
                                Vertex::canonical({2, 2, 1, 0}),
                                Vertex::canonical({2, 2, 2, 0})}),
                 flat3});
  return out;
}

bool criterion4() {
  const auto t0 = std::chrono::steady_clock::now();
  Criterion c(4, "variance identity: Var_w f(x) = (d+1)^2/2 E_w d_LSD(0,x), "
                 "exact rational equality on 20+ instances");
  std::mt19937 rng(424242);
  int instances = 0;
  for (const FixedBoundary& bc : identity_instances()) {
    const int d = bc.dim();
    std::vector<Vertex> probes{bc.region.verts.front(),
                               bc.region.verts.back()};
    for (const WeightFunction& w :
         {WeightFunction{}, random_weights(bc, rng)}) {
      for (const Vertex& x : probes) {
        const IdentityReport rep = variance_identity_exact(bc, w, x);
        if (!rep.equal) {
          c.require(false, "variance identity failed (d=" +
                               std::to_string(d) + ", x=" + x.str() + ")");
        }
      }
      ++instances;
    }
  }
  c.require(instances >= 20, "fewer than 20 instances");
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  const bool ok = c.finish(std::cout, secs);
  return ok && secs < 300.0;
}

bool criterion5() {
  const auto t0 = std::chrono::steady_clock::now();
  Criterion c(5, "covariance identity: exact equality with 3 probe pairs "
                 "per instance");
  std::mt19937 rng(535353);
  int instances = 0;
  for (const FixedBoundary& bc : identity_instances()) {
    const Vertex far = Vertex::origin(bc.dim());  // outside R
    const Vertex a = bc.region.verts.front();
    const Vertex b = bc.region.verts.back();
    const std::vector<std::pair<Vertex, Vertex>> pairs{
        {a, b}, {a, a}, {b, far}};
    for (const WeightFunction& w :
         {WeightFunction{}, random_weights(bc, rng, 3)}) {
      for (const auto& [x, y] : pairs) {
        const IdentityReport rep = covariance_identity_exact(bc, w, x, y);
        if (!rep.equal) c.require(false, "covariance identity failed");
        if (x == y) {
          const IdentityReport var = variance_identity_exact(bc, w, x);
          if (!(rep.lhs == var.lhs && rep.rhs == var.rhs))
            c.require(false, "diagonal covariance differs from variance");
        }
      }
      ++instances;
    }
  }
  c.require(instances >= 20, "fewer than 20 instances");
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  const bool ok = c.finish(std::cout, secs);
  return ok && secs < 300.0;
}

bool criterion6() {
  const auto t0 = std::chrono::steady_clock::now();
  Criterion c(6, "cluster boundary swap: 10^4 random swaps preserve sums, "
                 "validity, involution and the unoriented tree");
  std::mt19937 rng(606060);
  uint64_t swaps = 0, violations = 0;

  for (int d : {2, 3}) {
    const FixedBoundary bc = flat_box(d, d == 2 ? 4 : 3);
    std::vector<HeightField> pool;
    for (uint64_t i = 0; i < 40; ++i)
      pool.push_back(cftp_sample(bc, 777000 + 100 * uint64_t(d) + i).sample);
    std::uniform_int_distribution<size_t> pick(0, pool.size() - 1);

    const uint64_t target = (d == 2) ? 5000 : 10000;
    while (swaps < target) {
      const HeightField& f1 = pool[pick(rng)];
      const HeightField& f2 = pool[pick(rng)];
      const LevelSetDecomposition lsd = build_lsd(bc, f1, f2);
      SwapMask mask;
      for (size_t b = 0; b < lsd.graph.boundary_count(); ++b)
        if (rng() & 1) mask.insert(int(b));
      const auto [g1, g2] = swap_pair(bc, f1, f2, mask);
      ++swaps;

      bool ok = is_height_function(g1) && is_height_function(g2);
      for (const Vertex& v : bc.region.verts)
        ok &= (g1.value(v) + g2.value(v) == f1.value(v) + f2.value(v));
      const auto [h1, h2] = swap_pair(bc, g1, g2, mask);
      ok &= (h1 == f1) && (h2 == f2);
      const LevelSetDecomposition after = build_lsd(bc, g1, g2);
      ok &= (after.graph.support == lsd.graph.support) &&
            (after.graph.boundaries == lsd.graph.boundaries);
      if (!ok) ++violations;
    }
  }
  c.require(violations == 0,
            std::to_string(violations) + " violations in " +
                std::to_string(swaps) + " swaps");
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return c.finish(std::cout, secs);
}

struct CftpRegionSpec {
  const char* name;
  FixedBoundary bc;
};

std::vector<CftpRegionSpec> cftp_regions() {
  std::vector<CftpRegionSpec> out;
  out.push_back({"d2 box4", flat_box(2, 4)});
  out.push_back(
      {"d2 rect2x4", {rect_region(2, 4), floor_field(Slope::zero(2), Rat(0))}});
  out.push_back({"d3 box3", flat_box(3, 3)});
  return out;
}

bool criterion7() {
  const auto t0 = std::chrono::steady_clock::now();
  Criterion c(7, "CFTP uniformity: chi-square at alpha=0.01 with 10^5 "
                 "samples on three regions (|Omega| in [10,60])");
  uint64_t stream = 0;
  for (const auto& spec : cftp_regions()) {
    const auto fields = collect_fields(spec.bc);
    c.require(fields.size() >= 10 && fields.size() <= 60,
              std::string(spec.name) + ": ensemble size out of range");
    std::map<std::vector<Value>, size_t> index;
    for (size_t i = 0; i < fields.size(); ++i)
      index[key_of(spec.bc, fields[i])] = i;

    const uint64_t m = 100000;
    std::vector<uint64_t> hits(fields.size(), 0);
    for (uint64_t i = 0; i < m; ++i) {
      const HeightField f =
          cftp_sample(spec.bc, 888000000 + stream * m + i).sample;
      ++hits[index.at(key_of(spec.bc, f))];
    }
    ++stream;
    const double expected = double(m) / double(fields.size());
    double chi2 = 0;
    for (uint64_t h : hits) {
      const double dlt = double(h) - expected;
      chi2 += dlt * dlt / expected;
    }
    const double crit =
        oracle::chi2_critical(int(fields.size()) - 1, oracle::kZ99);
    std::ostringstream note;
    note << spec.name << ": chi2=" << chi2 << " crit=" << crit;
    c.require(chi2 < crit, note.str());
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  const bool ok = c.finish(std::cout, secs);
  return ok && secs < 600.0;
}

bool criterion8() {
  const auto t0 = std::chrono::steady_clock::now();
  Criterion c(8, "monotone coupling: sandwich holds after each of 10^5 "
                 "coupled steps with comparable boundaries");
  std::mt19937 rng(808080);
  const FixedBoundary bc1 = flat_box(2, 4);
  const HeightField wide =
      oracle::pinned(Slope::zero(2), Rat(0), oracle::ball(2, 8));
  const auto ring = region_boundary(bc1.region);
  try {
    for (int trial = 0; trial < 4; ++trial) {
      HeightField b2 = oracle::random_field(wide, ring, 5, rng);
      const FixedBoundary bc2{bc1.region, b2};
      // coupled_run asserts the sandwich after every step and throws on any
      // violation.
      const CoupledResult r =
          coupled_run(bc1, bc2, WeightFunction{}, 25000, 99000 + trial);
      for (const Vertex& v : bc1.region.verts) {
        const Value diff = r.f1.value(v) - r.f2.value(v);
        c.require(diff >= r.a_minus && diff <= r.a_plus,
                  "final state outside the sandwich");
      }
    }
  } catch (const ValidationError& e) {
    c.require(false, std::string("sandwich violation: ") + e.what());
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return c.finish(std::cout, secs);
}

bool criterion9() {
  const auto t0 = std::chrono::steady_clock::now();
  Criterion c(9, "variance bound: empirical Var f(x) <= (d+1)^2 d(x, R^c) "
                 "with 3 sigma slack in all sampler experiments");
  uint64_t stream = 0;
  for (const auto& spec : cftp_regions()) {
    std::vector<Vertex> probes{spec.bc.region.verts.front(),
                               spec.bc.region.verts[spec.bc.region.size() / 2],
                               spec.bc.region.verts.back()};
    const uint64_t m = 20000;
    std::vector<std::vector<Value>> samples(probes.size());
    for (uint64_t i = 0; i < m; ++i) {
      const HeightField f =
          cftp_sample(spec.bc, 777000000 + stream * m + i).sample;
      for (size_t p = 0; p < probes.size(); ++p)
        samples[p].push_back(f.value(probes[p]));
    }
    ++stream;
    for (size_t p = 0; p < probes.size(); ++p) {
      const VarianceBoundReport rep =
          empirical_variance_bound_check(samples[p], probes[p], spec.bc);
      std::ostringstream note;
      note << spec.name << " at " << probes[p].str()
           << ": var=" << rep.empirical_variance << " bound=" << rep.bound;
      c.require(rep.consistent, note.str());
    }
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return c.finish(std::cout, secs);
}

bool criterion10() {
  const auto t0 = std::chrono::steady_clock::now();
  Criterion c(10, "surface tension: range, supermultiplicativity, frozen "
                  "extremes, midpoint probe");
  for (int n : {2, 3, 4, 5}) {
    const SigmaResult r = sigma_n(Slope::zero(2), n, 2);
    c.require(r.sigma <= 1e-12 && r.sigma >= -std::log(2.0) - 1e-12,
              "sigma out of range at n=" + std::to_string(n));
  }
  const SigmaResult r3 = sigma_n(Slope::zero(3), 2, 3);
  c.require(r3.sigma <= 1e-12 && r3.sigma >= -std::log(2.0) - 1e-12,
            "sigma out of range in d=3");

  // Exact big-integer supermultiplicativity at (d=2, n=2, k=2).
  const SupermultiplicativeReport sup =
      check_supermultiplicative(Slope::zero(2), 2, 2, 2);
  c.require(sup.holds, "supermultiplicative comparison failed");

  for (int i = 1; i <= 3; ++i)
    for (int n : {2, 3, 4}) {
      const SigmaResult r = sigma_n(Slope::extreme(2, i), n, 2);
      c.require(r.best_count == 1 && r.sigma == 0.0,
                "extreme slope not frozen");
    }

  // Midpoint probe at n=4 for +-1/2 along g_1; informational values, but
  // they must exist and stay in range.
  const Slope s1{{Rat(1, 2), Rat(-1, 4), Rat(-1, 4)}};
  const Slope s2{{Rat(-1, 2), Rat(1, 4), Rat(1, 4)}};
  const MidpointProbe probe = midpoint_convexity_probe(s1, s2, 4, 2);
  for (double v : {probe.sigma_s1, probe.sigma_s2, probe.sigma_mid})
    c.require(std::isfinite(v) && v <= 1e-12 && v >= -std::log(2.0) - 1e-12,
              "midpoint probe value out of range");
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  const bool ok = c.finish(std::cout, secs);
  std::cout << "    midpoint probe: sigma(s1)=" << probe.sigma_s1
            << " sigma(mid)=" << probe.sigma_mid
            << " sigma(s2)=" << probe.sigma_s2 << "\n";
  return ok;
}

bool criterion11() {
  const auto t0 = std::chrono::steady_clock::now();
  Criterion c(11, "periodic mean slope: E[f(x) - f(0)] = 0 within 3 SE on "
                  "the 9-periodic d=2 torus, 10^5 samples");
  PeriodicBoundary pbc{2, 3, Slope::zero(2)};  // n(d+1) = 9
  TorusState st = TorusState::initial(pbc);
  const size_t sites = st.size();
  const uint64_t burn_sweeps = 3000, samples = 100000;
  uint64_t counter = 0;
  const uint64_t seed = 1111;

  st = periodic_glauber_from(st, burn_sweeps * sites, seed, counter);
  counter += burn_sweeps * sites;

  const size_t batches = 100, per_batch = samples / batches;
  std::vector<std::vector<double>> batch_mean(
      sites, std::vector<double>(batches, 0.0));
  for (size_t b = 0; b < batches; ++b) {
    for (size_t s = 0; s < per_batch; ++s) {
      st = periodic_glauber_from(st, sites, seed, counter);  // one sweep
      counter += sites;
      const Value at0 = st.value_at(st.index_of({0, 0}));
      for (size_t i = 0; i < sites; ++i)
        batch_mean[i][b] += double(st.value_at(i) - at0);
    }
    for (size_t i = 0; i < sites; ++i) batch_mean[i][b] /= double(per_batch);
  }
  size_t worst_idx = 0;
  double worst_ratio = 0;
  for (size_t i = 0; i < sites; ++i) {
    double mean = 0;
    for (double v : batch_mean[i]) mean += v;
    mean /= double(batches);
    double var = 0;
    for (double v : batch_mean[i]) var += (v - mean) * (v - mean);
    var /= double(batches - 1);
    const double se = std::sqrt(var / double(batches));
    const double ratio = se > 0 ? std::abs(mean) / se : std::abs(mean);
    if (ratio > worst_ratio) {
      worst_ratio = ratio;
      worst_idx = i;
    }
  }
  std::ostringstream note;
  note << "worst |mean|/SE = " << worst_ratio << " at site " << worst_idx;
  c.require(worst_ratio <= 3.0, note.str());
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return c.finish(std::cout, secs);
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc)
      only = std::atoi(argv[i + 1]);
  }
  using Fn = bool (*)();
  const Fn criteria[] = {criterion1, criterion2, criterion3, criterion4,
                         criterion5, criterion6, criterion7, criterion8,
                         criterion9, criterion10, criterion11};
  bool all_ok = true;
  for (int k = 1; k <= 11; ++k) {
    if (only != 0 && only != k) continue;
    try {
      all_ok &= criteria[k - 1]();
    } catch (const std::exception& e) {
      std::cout << "criterion " << k << ": FAIL  unhandled error: " << e.what()
                << "\n";
      all_ok = false;
    }
  }
  return all_ok ? 0 : 1;
}
