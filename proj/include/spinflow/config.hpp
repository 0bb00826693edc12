#pragma once

// `key = value` run configuration with `#` comments. Unknown keys are hard
// errors naming the offending line; so are type mismatches and constraint
// violations. Overrides (CLI key=value tokens) win over file values.

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "spinflow/flow.hpp"
#include "spinflow/toy2d.hpp"

namespace spinflow {

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

enum class Mode { Flow, Toy2d, Symbol };

struct SymbolConfig {
  int n = 128;
  double length = 1.0;
  int base_mode = 4;
  int octaves = 3;
  std::string outdir = "out";
};

struct ParsedConfig {
  Mode mode = Mode::Flow;
  bool mode_explicit = false;  // true when the text or an override set `mode`
  FlowConfig flow;
  ToyConfig toy;
  SymbolConfig symbol;
};

// force_mode, when non-null, pins the mode (the CLI subcommand); an explicit
// conflicting `mode` in the text is then a config error.
ParsedConfig parse_config(const std::string& text);
ParsedConfig parse_config(const std::string& text, const std::vector<std::string>& overrides,
                          const Mode* force_mode = nullptr);

// Fully resolved parameters, for the manifest echo.
std::vector<std::pair<std::string, std::string>> config_echo(const ParsedConfig& cfg);

std::string mode_name(Mode m);

}  // namespace spinflow
