#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "shf/io.hpp"
#include "shf/render.hpp"
#include "shf/sampler.hpp"
#include "shf/tension.hpp"

namespace {

constexpr const char* kVersion = "shf 0.1.0";

struct Output {
  std::string path;  // empty = stdout

  void write(const std::string& text) const {
    if (path.empty()) {
      std::cout << text;
      return;
    }
    std::ofstream os(path, std::ios::binary);
    if (!os) throw shf::ValidationError("cannot open output file: " + path);
    os << text;
  }
};

shf::Json read_json_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw shf::ValidationError("cannot open input file: " + path);
  try {
    return shf::Json::parse(is);
  } catch (const nlohmann::json::parse_error& e) {
    throw shf::ValidationError("malformed JSON in " + path + ": " + e.what());
  }
}

shf::Json meta(int d, uint64_t seed) {
  return shf::Json{{"tool", kVersion}, {"d", d}, {"seed", seed}};
}

void log_elapsed(const char* what,
                 std::chrono::steady_clock::time_point start) {
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - start)
                      .count();
  std::cerr << what << " finished in " << ms << " ms\n";
}

shf::FixedBoundary load_bc(const std::string& path) {
  return shf::fixed_boundary_from_json(read_json_file(path));
}

shf::WeightFunction load_weights(const std::string& path) {
  if (path.empty()) return shf::WeightFunction();
  return shf::weights_from_json(read_json_file(path));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"height functions, tilings and samplers on the simplicial "
               "lattice"};
  app.set_version_flag("--version", kVersion);
  app.set_config("--config", "", "flat key=value configuration file");
  app.require_subcommand(1);

  std::string bc_path, weights_path, out_path, field_path;
  std::string slope_text, nlist_text, x_text, y_text;
  uint64_t seed = 1;
  uint64_t steps = 10000, burnin = 0, chains = 1;
  size_t cap = shf::kDefaultEnumerationCap;
  bool use_cftp = false;
  int window_n = 4;
  uint64_t pairs = 100;

  auto* c_enum = app.add_subcommand("enumerate", "list Omega(R, b) as ndjson");
  c_enum->add_option("--bc", bc_path, "boundary condition file")->required();
  c_enum->add_option("--cap", cap, "free-vertex cap");
  c_enum->add_option("-o,--output", out_path, "output path");

  auto* c_count = app.add_subcommand("count", "exact |Omega(R, b)|");
  c_count->add_option("--bc", bc_path)->required();
  c_count->add_option("--cap", cap);
  c_count->add_option("-o,--output", out_path);

  auto* c_kast = app.add_subcommand("kasteleyn-verify",
                                    "check Z_w against the hyperdeterminant");
  c_kast->add_option("--bc", bc_path)->required();
  c_kast->add_option("--weights", weights_path);
  c_kast->add_option("--cap", cap);
  c_kast->add_option("-o,--output", out_path);

  auto* c_sample = app.add_subcommand("sample", "Glauber / CFTP sampling");
  c_sample->add_option("--bc", bc_path)->required();
  c_sample->add_option("--weights", weights_path);
  c_sample->add_option("--steps", steps, "steps per chain");
  c_sample->add_option("--burnin", burnin, "discarded prefix steps");
  c_sample->add_option("--chains", chains, "number of chains");
  c_sample->add_option("--seed", seed);
  c_sample->add_flag("--cftp", use_cftp, "exact sampling via CFTP");
  c_sample->add_option("-o,--output", out_path);

  auto* c_pairs = app.add_subcommand(
      "pair-stats", "per-pair level-set summaries of sampled pairs (CSV)");
  c_pairs->alias("swap-stats");
  c_pairs->add_option("--bc", bc_path)->required();
  c_pairs->add_option("--pairs", pairs, "number of sampled pairs");
  c_pairs->add_option("--seed", seed);
  c_pairs->add_option("--x", x_text, "vertex as comma-separated coordinates");
  c_pairs->add_option("-o,--output", out_path);

  auto* c_ident = app.add_subcommand(
      "identity-check", "exact variance/covariance identity check");
  c_ident->add_option("--bc", bc_path)->required();
  c_ident->add_option("--weights", weights_path);
  c_ident->add_option("--x", x_text)->required();
  c_ident->add_option("--y", y_text);
  c_ident->add_option("--cap", cap);
  c_ident->add_option("-o,--output", out_path);

  auto* c_tension = app.add_subcommand("tension", "surface tension table");
  c_tension->add_option("--slope", slope_text, "slope as p/q,p/q,...")
      ->required();
  c_tension->add_option("--n-list", nlist_text, "comma-separated sizes")
      ->required();
  c_tension->add_option("--cap", cap);
  c_tension->add_option("-o,--output", out_path);

  auto* c_render = app.add_subcommand("render", "SVG of a d=2 lozenge tiling");
  c_render->add_option("--field", field_path, "height field file")->required();
  c_render->add_option("--window-box", window_n,
                       "closed box size for the render window");
  c_render->add_option("-o,--output", out_path);

  CLI11_PARSE(app, argc, argv);
  const Output out{out_path};
  const auto start = std::chrono::steady_clock::now();

  try {
    if (*c_enum) {
      const shf::FixedBoundary bc = load_bc(bc_path);
      std::ostringstream os;
      os << shf::Json{{"meta", meta(bc.dim(), 0)}}.dump() << "\n";
      shf::enumerate_fields(
          bc, [&](const shf::HeightField& f) { os << to_json(f).dump() << "\n"; },
          cap);
      out.write(os.str());
      log_elapsed("enumerate", start);
    } else if (*c_count) {
      const shf::FixedBoundary bc = load_bc(bc_path);
      shf::Json j{{"meta", meta(bc.dim(), 0)},
                  {"count", shf::int_to_string(shf::count_fields(bc, cap))}};
      out.write(j.dump(2) + "\n");
      log_elapsed("count", start);
    } else if (*c_kast) {
      const shf::FixedBoundary bc = load_bc(bc_path);
      const shf::WeightFunction w = load_weights(weights_path);
      const shf::KasteleynReport rep = shf::verify_kasteleyn(bc, w, cap);
      shf::Json j = to_json(rep);
      j["meta"] = meta(bc.dim(), 0);
      out.write(j.dump(2) + "\n");
      log_elapsed("kasteleyn-verify", start);
    } else if (*c_sample) {
      const shf::FixedBoundary bc = load_bc(bc_path);
      const shf::WeightFunction w = load_weights(weights_path);
      std::ostringstream os;
      os << shf::Json{{"meta", meta(bc.dim(), seed)}}.dump() << "\n";
      for (uint64_t c = 0; c < chains; ++c) {
        shf::HeightField f;
        if (use_cftp) {
          f = shf::cftp_sample(bc, seed + c, w).sample;
        } else {
          f = shf::glauber_run(bc, w, burnin + steps, seed + c);
        }
        os << to_json(f).dump() << "\n";
      }
      out.write(os.str());
      log_elapsed("sample", start);
    } else if (*c_pairs) {
      const shf::FixedBoundary bc = load_bc(bc_path);
      const shf::Vertex x = x_text.empty()
                                ? shf::Vertex::origin(bc.dim())
                                : shf::vertex_from_json(
                                      shf::Json::parse("[" + x_text + "]"));
      std::ostringstream os;
      os << "# " << shf::Json{{"meta", meta(bc.dim(), seed)}}.dump() << "\n";
      os << "pair,boundaries,dist_x\n";
      for (uint64_t i = 0; i < pairs; ++i) {
        const shf::HeightField f1 = shf::cftp_sample(bc, seed + 2 * i).sample;
        const shf::HeightField f2 =
            shf::cftp_sample(bc, seed + 2 * i + 1).sample;
        const shf::LevelSetDecomposition lsd = shf::build_lsd(bc, f1, f2);
        os << i << "," << lsd.graph.boundary_count() << ","
           << shf::lsd_distance(lsd, x) << "\n";
      }
      out.write(os.str());
      log_elapsed("pair-stats", start);
    } else if (*c_ident) {
      const shf::FixedBoundary bc = load_bc(bc_path);
      const shf::WeightFunction w = load_weights(weights_path);
      const shf::Vertex x =
          shf::vertex_from_json(shf::Json::parse("[" + x_text + "]"));
      shf::Json j{{"meta", meta(bc.dim(), 0)}};
      j["variance"] = to_json(shf::variance_identity_exact(bc, w, x, cap));
      if (!y_text.empty()) {
        const shf::Vertex y =
            shf::vertex_from_json(shf::Json::parse("[" + y_text + "]"));
        j["covariance"] =
            to_json(shf::covariance_identity_exact(bc, w, x, y, cap));
      }
      out.write(j.dump(2) + "\n");
      log_elapsed("identity-check", start);
    } else if (*c_tension) {
      const shf::Slope s = shf::slope_from_string(slope_text);
      const int d = s.dim();
      std::ostringstream os;
      os << "# " << shf::Json{{"meta", meta(d, 0)}}.dump() << "\n";
      os << "n,a,count,sigma_n\n";
      std::stringstream ns(nlist_text);
      std::string item;
      while (std::getline(ns, item, ',')) {
        const int n = std::stoi(item);
        const shf::SigmaResult r = shf::sigma_n(s, n, d, cap);
        os << n << "," << shf::rat_to_string(r.best_offset) << ","
           << shf::int_to_string(r.best_count) << "," << std::setprecision(15)
           << r.sigma << "\n";
      }
      out.write(os.str());
      log_elapsed("tension", start);
    } else if (*c_render) {
      const shf::HeightField f =
          shf::field_from_json(read_json_file(field_path));
      const shf::Region window =
          shf::make_box(shf::BoxKind::ClosedBox, window_n, f.dim());
      out.write(shf::render_svg(f, window));
      log_elapsed("render", start);
    }
  } catch (const shf::CapExceeded& e) {
    std::cerr << "cap exceeded: " << e.what() << "\n";
    return 3;
  } catch (const shf::ValidationError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
