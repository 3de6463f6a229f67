#include <exception>
#include <iostream>

#include "twqkd/cli.hpp"
#include "twqkd/engine.hpp"

// Exit codes: 0 success, 2 configuration error, 3 I/O error.
int main(int argc, char** argv) {
  twqkd::Invocation inv;
  try {
    inv = twqkd::parse_invocation(argc, argv);
  } catch (const twqkd::CliHelp& help) {
    std::cout << help.what();
    return 0;
  } catch (const twqkd::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }

  try {
    const twqkd::Report report = twqkd::run_simulation(inv.config, inv.threads);
    std::map<std::string, double> exact;
    if (inv.run_exact) {
      exact = twqkd::exact_enumerate(twqkd::ExactScenario{inv.config});
    }
    const std::string text = twqkd::emit_report(
        report, inv.format, inv.run_exact ? &exact : nullptr);
    twqkd::write_output(text, inv.out_path);
  } catch (const twqkd::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const twqkd::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
