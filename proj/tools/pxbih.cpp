#include <iostream>

#include "CLI11.hpp"
#include "pxbih/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Variable-exponent singular Navier problem: verification and solver"};
  app.require_subcommand(1);

  pxbih::CommandLine cl;
  std::string out, field;
  std::uint64_t seed = 0;

  for (const char* name : {"verify", "solve", "valley", "sweep", "norm"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", cl.config, "Run config (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out, "Output directory (overrides the config)");
    sub->add_option("--seed", seed, "Sampling seed (overrides the config)");
    if (std::string(name) == "norm") {
      sub->add_option("field", field, "Field file")->required()->check(CLI::ExistingFile);
    }
    sub->callback([&cl, name] { cl.command = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : pxbih::kExitUsage;
  }
  for (auto* sub : app.get_subcommands()) {
    if (sub->count("--out")) cl.out = out;
    if (sub->count("--seed")) cl.seed = seed;
    if (!field.empty()) cl.field = field;
  }
  return pxbih::run_command(cl, std::cout, std::cerr);
}
