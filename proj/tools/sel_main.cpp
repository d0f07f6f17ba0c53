#include <CLI11.hpp>
#include <iostream>

#include "sel/harness.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Stochastic damped Euler simulation lab"};
  app.require_subcommand(1, 1);

  sel::CommandOptions opt;
  long paths = 0;
  std::uint64_t seed = 0;
  const char* commands[] = {"simulate", "ensemble",      "decay-fit",       "pme",
                            "compare",  "entropy-check", "invariants-check"};
  for (const char* name : commands) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", opt.config_path, "key=value run configuration")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--out", opt.out_dir, "output directory")->capture_default_str();
    sub->add_option("--paths", paths, "override the ensemble size")->check(CLI::PositiveNumber);
    sub->add_option("--seed", seed, "override the base seed");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? sel::kExitOk : sel::kExitError;
  }

  CLI::App* chosen = app.get_subcommands().front();
  if (chosen->count("--paths")) opt.paths = paths;
  if (chosen->count("--seed")) opt.seed = seed;
  return sel::run_command(chosen->get_name(), opt, std::cout, std::cerr);
}
