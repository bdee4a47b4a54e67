// Command-line front end: one subcommand per experiment mode.
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "tvm/errors.hpp"
#include "tvm/harness.hpp"

namespace {

constexpr int kValidation = 2;
constexpr int kCapacity = 3;
constexpr int kIo = 4;

struct Flags {
  std::map<std::string, std::string> values;
  std::string config;
};

void add_flags(CLI::App* cmd, Flags& flags) {
  const std::pair<const char*, const char*> options[] = {
      {"d", "dimension, or comma-separated list"},
      {"r", "side length"},
      {"p", "initial density, or comma-separated list"},
      {"T", "time horizon"},
      {"replicas", "number of replicas"},
      {"seed", "base seed"},
      {"grid", "number of reporting intervals on [0, T]"},
      {"out", "output directory"},
      {"init", "fixed initial state as a 0/1 string in vertex order"},
      {"p2", "upper density (couple: selects the monotone coupling)"},
      {"workers", "worker threads, 0 = available parallelism"},
  };
  for (const auto& [name, help] : options) {
    cmd->add_option(std::string("--") + name, flags.values[name], help);
  }
  cmd->add_option("--config", flags.config, "key=value file; flags override it");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Threshold voter model experiments"};
  app.require_subcommand(1);
  Flags flags;
  const char* modes[] = {"simulate", "couple", "sweep", "ballgame", "oracle", "ldp"};
  for (const char* m : modes) add_flags(app.add_subcommand(m, std::string("run ") + m), flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kValidation;
  }

  CLI::App* cmd = app.get_subcommands().front();
  try {
    tvm::ExperimentSpec spec;
    if (!flags.config.empty()) spec = tvm::load_config(flags.config);
    spec.mode = tvm::parse_mode(cmd->get_name());
    for (const auto& [name, value] : flags.values) {
      if (cmd->count("--" + name) > 0) tvm::apply_setting(spec, name, value);
    }
    const auto result = tvm::run_experiment(spec);
    tvm::write_result(result, spec.out);
    std::cout << "wrote " << result.rows.rows.size() << " rows to " << spec.out << "\n";
    return 0;
  } catch (const tvm::IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kIo;
  } catch (const tvm::CapacityError& e) {
    std::cerr << "capacity error: " << e.what() << "\n";
    return kCapacity;
  } catch (const std::invalid_argument& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kValidation;
  } catch (const std::domain_error& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kValidation;
  }
}
