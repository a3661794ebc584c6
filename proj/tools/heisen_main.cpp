#include <CLI11.hpp>

#include "heisen/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Circle-bundle dynamics over interval exchange suspensions"};
  app.require_subcommand(1);

  std::string configPath;
  heisen::cli::RunOptions opts;
  std::uint64_t seed = 0;
  bool seedSet = false;
  std::string outDir, format;

  for (const char* name : heisen::cli::kSubcommands) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", configPath, "experiment configuration file")
        ->required();
    sub->add_option("--seed", seed, "override the bundle seed")
        ->each([&](const std::string&) { seedSet = true; });
    sub->add_option("--threads", opts.threads,
                    "cap worker threads (results do not depend on this)");
    sub->add_option("--out", outDir, "output directory");
    sub->add_option("--format", format, "artifact formats: json | csv | both")
        ->check(CLI::IsMember({"json", "csv", "both"}));
  }

  CLI11_PARSE(app, argc, argv);

  const std::string command = app.get_subcommands().front()->get_name();
  if (seedSet) opts.seed = seed;
  if (!outDir.empty()) opts.outDir = outDir;
  if (!format.empty()) opts.format = format;

  try {
    auto cfg = heisen::cli::parseConfig(configPath);
    return heisen::cli::runSubcommand(command, std::move(cfg), opts);
  } catch (const heisen::Error& e) {
    std::cerr << e.what() << "\n";
    return heisen::isValidationError(e.kind()) ? 2 : 3;
  }
}
