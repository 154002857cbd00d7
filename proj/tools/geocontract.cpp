#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "geocontract/pipeline.hpp"

namespace fs = std::filesystem;
using namespace geocontract;

namespace {

struct Flags {
  std::string out;
  std::string config_file;
  std::string render;
  std::optional<std::string> mesh, preset, loop;
  std::optional<double> epsilon, radius, rho, stall_tol, block_width, sp;
  std::optional<int> samples, X, stall_window, n, budget, diameter_samples, cover_trials, z_trials;
  std::optional<std::uint64_t> seed;
  bool skip_hypothesis = false;
};

void add_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--out", f.out, "Run directory")->required();
  cmd->add_option("--config", f.config_file, "JSON file with run settings");
  cmd->add_option("--mesh", f.mesh, "Mesh file (.off/.obj) or fixture name");
  cmd->add_option("--epsilon", f.epsilon, "Geodesic accuracy in (0, 1]");
  cmd->add_option("--samples,-K", f.samples, "Samples per loop");
  cmd->add_option("--radius", f.radius, "Cover radius (default D/3)");
  cmd->add_option("--seed", f.seed, "Random seed");
  cmd->add_option("--X", f.X, "Simplicial length cap (default 2 Z)");
  cmd->add_option("--rho", f.rho, "Curve shortening anchor spacing");
  cmd->add_option("--stall-window", f.stall_window, "Steps compared by the stall test");
  cmd->add_option("--stall-tol", f.stall_tol, "Relative decrease counted as a stall");
  cmd->add_option("--budget", f.budget, "Seed loops for the geodesic search");
  cmd->add_option("--preset", f.preset, "Constant preset to compare against")->check(CLI::IsMember({"lemma2_10"}));
  cmd->add_option("--n", f.n, "Connectivity index for the length bound");
  cmd->add_option("--loop", f.loop, "plane:nx,ny,nz,c | file:PATH | geodesic");
  cmd->add_option("--diameter-samples", f.diameter_samples, "Source vertices for the diameter estimate");
  cmd->add_option("--cover-trials", f.cover_trials, "Sampled pairs and loops per cover check");
  cmd->add_option("--z-trials", f.z_trials, "Vertex pairs behind Z_hat");
  cmd->add_option("--block-width", f.block_width, "Width budget of one shortening block");
  cmd->add_option("--sp", f.sp, "Override S_p in the report");
  cmd->add_flag("--skip-hypothesis", f.skip_hypothesis, "Contract without the short geodesic check");
  cmd->add_option("--render", f.render, "Also write figures")->check(CLI::IsMember({"svg"}));
}

template <class T>
void set(std::optional<T>& dst, const std::optional<T>& src) {
  if (src) dst = src;
}
template <class T>
void set(T& dst, const std::optional<T>& src) {
  if (src) dst = *src;
}

RunConfig resolve(const Flags& f) {
  RunConfig cfg;
  const fs::path dir(f.out);
  if (fs::exists(dir / artifact::config)) cfg.merge_json(read_file(dir / artifact::config));
  if (!f.config_file.empty()) {
    if (!fs::exists(f.config_file)) throw Error(ErrorCode::ConfigError, "config file " + f.config_file + " not found");
    cfg.merge_json(read_file(f.config_file));
  }
  set(cfg.mesh, f.mesh);
  set(cfg.epsilon, f.epsilon);
  set(cfg.samples, f.samples);
  set(cfg.radius, f.radius);
  set(cfg.seed, f.seed);
  set(cfg.X, f.X);
  set(cfg.rho, f.rho);
  set(cfg.stall_window, f.stall_window);
  set(cfg.stall_tol, f.stall_tol);
  set(cfg.preset, f.preset);
  set(cfg.n, f.n);
  set(cfg.budget, f.budget);
  set(cfg.loop, f.loop);
  set(cfg.diameter_samples, f.diameter_samples);
  set(cfg.cover_trials, f.cover_trials);
  set(cfg.z_trials, f.z_trials);
  set(cfg.block_width, f.block_width);
  set(cfg.sp, f.sp);
  if (f.skip_hypothesis) cfg.check_hypothesis = false;
  cfg.validate();
  return cfg;
}

using Command = std::string (*)(const RunConfig&, const fs::path&);

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Good covers, curve shortening and contraction width bounds on triangle meshes"};
  app.require_subcommand(1);

  const std::map<std::string, std::pair<Command, std::string>> commands = {
      {"ingest", {cmd_ingest, "Load a mesh and estimate its diameter"}},
      {"cover", {cmd_cover, "Build and certify a ball cover"}},
      {"nerve", {cmd_nerve, "Build the nerve graph and pick X"}},
      {"geodesic", {cmd_geodesic, "Search for a short closed geodesic"}},
      {"contract", {cmd_contract, "Contract a loop and write the report"}},
      {"bounds", {cmd_bounds, "Evaluate every bound into report.json"}},
      {"render", {cmd_render, "Draw SVG figures of the run"}},
  };
  std::map<std::string, Flags> flags;
  for (const auto& [name, entry] : commands) add_flags(app.add_subcommand(name, entry.second), flags[name]);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  for (const auto& [name, entry] : commands) {
    if (!app.got_subcommand(name)) continue;
    const Flags& f = flags[name];
    try {
      const RunConfig cfg = resolve(f);
      const fs::path dir(f.out);
      fs::create_directories(dir);
      write_file(dir / artifact::config, cfg.to_json());
      std::cout << entry.first(cfg, dir);
      if (f.render == "svg" && name != "render") std::cout << cmd_render(cfg, dir);
      return 0;
    } catch (const Error& e) {
      std::cerr << "error: " << e.what() << "\n";
      return exit_code(e.code());
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 1;
    }
  }
  return 1;
}
