#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "si_euler/cli/config.hpp"
#include "si_euler/cli/dispatch.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw si_euler::ConfigError("cannot read config file '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"si-euler: scale-invariant 2-D Euler lab"};
  app.require_subcommand(1);
  std::string config_path;
  std::string out_dir = "out";
  std::vector<std::string> overrides;
  const std::pair<const char*, const char*> commands[] = {
      {"simulate", "Lagrangian flow with diagnostics, snapshots and marker traces"},
      {"contour", "exact jump-position evolution for piecewise-constant data"},
      {"steady", "solve and verify a rotating piecewise-constant steady state"},
      {"ode", "shoot and classify the forced Riccati-type ODE"},
      {"selfcheck", "fast oracle and invariant checks"}};
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    auto* opt = sub->add_option("--config", config_path, "run configuration (key = value)");
    if (std::string(name) != "selfcheck") opt->required();
    sub->add_option("--out", out_dir, "output directory (replaced atomically)");
    sub->add_option("--override", overrides, "key=value, applied after the file");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    const std::string text = config_path.empty() ? std::string() : read_file(config_path);
    const auto cfg = si_euler::cli::parse_config(text, overrides, command);
    auto result = si_euler::cli::dispatch(cfg);
    result.bundle.commit(out_dir, si_euler::cli::manifest(cfg, result));
    std::cout << result.summary << "\n";
    return result.exit_code;
  } catch (const si_euler::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(e.category());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(si_euler::ErrorCategory::numerical);
  }
}
