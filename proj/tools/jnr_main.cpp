#include <iostream>

#include "CLI11.hpp"

#include "jnr/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Joint numerical ranges, boundary generating sets and dual varieties"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("jnr ") + jnr::kVersion);

  jnr::RunConfig config;
  const char* names[][2] = {
      {"charpoly", "Characteristic polynomial det(x0 I + sum xi Ai)"},
      {"trace", "Eigenvector contact points over a direction grid"},
      {"verify", "Compare the support of W with the hull of the traced cloud"},
      {"dual-fit", "Interpolate the dual form of a hypersurface"},
      {"central", "Centrality probe for candidate dual points"},
      {"four-ellipses", "Dual conics of four ellipses and their convex hull"},
  };
  for (const auto& [name, help] : names) {
    CLI::App* sub = app.add_subcommand(name, help);
    auto* in = sub->add_option("--input", config.input, "Pencil or polynomial JSON file");
    auto* bi = sub->add_option("--builtin", config.builtin,
                               "cayley | drop | chien-nakazato | four-ellipses | qubit-disk");
    in->excludes(bi);
    sub->add_option("--trace-grid", config.trace_grid, "Number of trace directions (>= 8)");
    sub->add_option("--test-grid", config.test_grid, "Number of test directions (>= 8)");
    sub->add_option("--tol", config.tol, "Upper gap tolerance");
    sub->add_option("--seed", config.seed, "Random seed");
    sub->add_option("--format", config.format, "csv | json | svg");
    sub->add_option("--out", config.out, "Output path (default stdout)");
    sub->add_flag("--advisory", config.advisory, "Allow an advisory verdict for n >= 4");
    sub->add_flag("--no-refine{false}", config.refine, "n = 2 verify: use the uniform trace grid only");
    sub->add_option("--candidates", config.candidates, "Points 'y1,y2,y3;...' or bare y1 values");
    sub->add_option("--radius", config.radius, "Centrality probe radius");
    sub->add_option("--max-degree", config.max_degree, "Largest dual degree tried");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : jnr::exit_code::parse;
  }
  config.subcommand = app.get_subcommands().front()->get_name();
  return jnr::run_command(config, std::cout, std::cerr);
}
