// spinflow CLI: flow | toy2d | verify | symbol.
//
// usage: spinflow <subcommand> [--config <path>] [key=value ...]
// Overrides win over the config file; the resolved configuration is echoed
// into the run manifest. Exit codes: 0 success, 1 verification failure,
// 2 config error, 3 runtime divergence.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "spinflow/config.hpp"
#include "spinflow/flow.hpp"
#include "spinflow/io.hpp"
#include "spinflow/symbol.hpp"
#include "spinflow/toy2d.hpp"
#include "spinflow/verify.hpp"
#include "spinflow/version.hpp"

namespace {

void usage(std::ostream& os) {
  os << "spinflow " << SPINFLOW_VERSION << "\n"
     << "usage: spinflow <flow|toy2d|symbol|verify> [--config <path>] [key=value ...]\n"
     << "       spinflow verify [group]        run named property checks\n"
     << "keys: mode nx ny nz lx ly lz n L t_end dt cfl_safety epsilon rho_floor\n"
     << "      gauge alpha init init_r0 init_amp seed snapshot_every outdir\n";
}

std::string read_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw spinflow::ConfigError("cannot read config file: " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  using namespace spinflow;
  if (argc < 2) {
    usage(std::cerr);
    return 2;
  }
  const std::string cmd = argv[1];
  if (cmd == "--help" || cmd == "-h" || cmd == "help") {
    usage(std::cout);
    return 0;
  }
  if (cmd == "--version") {
    std::cout << SPINFLOW_VERSION << "\n";
    return 0;
  }

  if (cmd == "verify") {
    const std::string filter = argc > 2 ? argv[2] : "";
    const int failures = run_checks(filter, std::cout);
    return failures == 0 ? 0 : 1;
  }

  if (cmd != "flow" && cmd != "toy2d" && cmd != "symbol") {
    std::cerr << "unknown subcommand '" << cmd << "'\n";
    usage(std::cerr);
    return 2;
  }

  std::string config_text;
  std::vector<std::string> overrides;
  for (int i = 2; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--config") {
      if (i + 1 >= argc) {
        std::cerr << "--config needs a path\n";
        return 2;
      }
      try {
        config_text = read_file(argv[++i]);
      } catch (const ConfigError& e) {
        std::cerr << e.what() << "\n";
        return 2;
      }
    } else {
      overrides.push_back(arg);
    }
  }

  ParsedConfig cfg;
  try {
    const Mode want = cmd == "flow" ? Mode::Flow : cmd == "toy2d" ? Mode::Toy2d : Mode::Symbol;
    cfg = parse_config(config_text, overrides, &want);
  } catch (const ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  try {
    if (cfg.mode == Mode::Flow) {
      const RunResult rr = run(cfg.flow);
      std::cout << "status: " << rr.status << "\n"
                << "steps: " << rr.final_state.step << "\n"
                << "sup |C(t)|: " << format_double(rr.sup_weighted_c) << "\n"
                << "wrote " << cfg.flow.outdir << "/diagnostics.csv\n";
      if (rr.status.rfind("diverged", 0) == 0) return 3;
    } else if (cfg.mode == Mode::Toy2d) {
      const ToyResult tr = toy_run(cfg.toy);
      std::cout << "status: " << tr.status << "\n"
                << "steps: " << tr.rows.back().step << "\n"
                << "final Linf error: " << format_double(tr.rows.back().linf_err) << "\n"
                << "wrote " << cfg.toy.outdir << "/diagnostics.csv\n";
      if (tr.status.rfind("diverged", 0) == 0) return 3;
    } else {
      run_symbol(cfg.symbol);
      std::cout << "wrote " << cfg.symbol.outdir << "/symbol.csv\n";
    }
  } catch (const ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const DivergenceError& e) {
    std::cerr << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
  return 0;
}
