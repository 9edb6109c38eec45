#include <CLI11.hpp>

#include <string>

#include "ssam/exp/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Sparse sharpness-aware minimization experiments"};
  app.require_subcommand(1);

  struct Raw {
    std::string config, out;
    std::uint64_t seed = 0;
    int threads = 1;
  };
  Raw raw;
  const char* names[][2] = {{"train", "Train one configuration and write per-step rows"},
                            {"ablate", "Run an ablation grid and write a summary table"},
                            {"spectrum", "Top Hessian eigenvalues at the trained weights"},
                            {"landscape", "Filter-normalized 2-D loss slice at the trained weights"},
                            {"ratio", "Histogram of the SAM/SGD gradient-difference ratio"},
                            {"theory", "Numerical checks of the lemma and theorem inequalities"},
                            {"flops", "Relative per-step cost model"}};
  for (const auto& [name, help] : names) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", raw.config, "JSON configuration file");
    sub->add_option("--out", raw.out, "Output directory");
    sub->add_option("--seed", raw.seed, "Seed (overrides the configuration)");
    sub->add_option("--threads", raw.threads, "Worker threads")->check(CLI::PositiveNumber);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ssam::kExitOk : ssam::kExitConfig;
  }

  CLI::App* sub = app.get_subcommands().front();
  ssam::CommandOptions opts;
  if (sub->count("--config")) opts.config = raw.config;
  if (sub->count("--out")) opts.out = raw.out;
  if (sub->count("--seed")) opts.seed = raw.seed;
  if (sub->count("--threads")) opts.threads = raw.threads;
  return ssam::run_command(sub->get_name(), opts);
}
