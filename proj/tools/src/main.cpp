#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "octk/cli/run.hpp"
#include "octk/error.hpp"

namespace {

using namespace octk::cli;

struct Args {
  std::string config;
  std::string out = "octk-out";
  std::optional<std::uint64_t> seed;
  std::string figure;
};

int report(const RunResult& r, const Args& args) {
  write_artifacts(args.out, r.artifacts);
  std::cout << r.summary << "\n";
  std::cout << "wrote " << r.artifacts.size() << " files to " << args.out << "\n";
  return r.status;
}

int execute(const std::string& command, const Args& args) {
  try {
    if (command == "reproduce") return report(reproduce(args.figure, args.seed.value_or(0)), args);
    RunConfig cfg = load_config_file(args.config, parse_command(command));
    if (args.seed) cfg.seed = *args.seed;
    return report(run(cfg), args);
  } catch (const octk::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const octk::DomainError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const octk::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUnexpected;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bifurcation and regime analysis for organized neuronal circuits", "octk"};
  app.set_version_flag("--version", std::string(version()));
  app.require_subcommand(1);

  Args args;
  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", args.out, "Artifact directory")->capture_default_str();
    sub->add_option("--seed", args.seed, "Seed for initial-condition sampling");
  };
  for (const char* name : {"recognize", "trace", "simulate", "classify", "scan"}) {
    auto* sub = app.add_subcommand(name, std::string("Run ") + name + " from a JSON config");
    sub->add_option("--config", args.config, "Config file (JSON)")->required();
    add_common(sub);
  }
  auto* rep = app.add_subcommand("reproduce", "Run a canned figure protocol and check its regimes");
  rep->add_option("figure", args.figure, "fig4, fig5, fig6 or fig7")
      ->required()
      ->check(CLI::IsMember({"fig4", "fig5", "fig6", "fig7"}));
  add_common(rep);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }
  return execute(app.get_subcommands().front()->get_name(), args);
}
