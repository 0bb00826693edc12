#include <filesystem>
#include <functional>

#include "spinflow/config.hpp"
#include "spinflow/flow.hpp"
#include "spinflow/io.hpp"
#include "spinflow/toy2d.hpp"
#include "spinflow/version.hpp"

namespace spinflow {

namespace {

Manifest base_manifest(const std::vector<std::pair<std::string, std::string>>& echo) {
  Manifest m;
  m.set("version", SPINFLOW_VERSION);
  for (const auto& [k, v] : echo) m.set(k, v);
  m.set("started", timestamp_utc());
  m.set("status", "running");
  return m;
}

}  // namespace

RunResult run(const FlowConfig& cfg) {
  std::filesystem::create_directories(cfg.outdir);
  ParsedConfig pc;
  pc.mode = Mode::Flow;
  pc.flow = cfg;
  Manifest m = base_manifest(config_echo(pc));
  const std::string manifest_path = cfg.outdir + "/manifest.txt";
  write_text_file(manifest_path, m.to_string());

  const std::function<void(const FlowState&)> on_step = [&](const FlowState& s) {
    if (cfg.snapshot_every > 0 && s.step % cfg.snapshot_every == 0)
      write_snapshot(s.psi, cfg.outdir + "/snap_" + std::to_string(s.step) + ".sghf");
  };
  RunResult result = run_with_callback(cfg, nullptr, &on_step);

  write_diagnostics_csv(result.rows, cfg.outdir + "/diagnostics.csv");
  if (cfg.snapshot_every > 0 && result.final_state.step % cfg.snapshot_every != 0)
    write_snapshot(result.final_state.psi,
                   cfg.outdir + "/snap_" + std::to_string(result.final_state.step) + ".sghf");

  m.set("status", result.status);
  m.set("sup_weighted_C", format_double(result.sup_weighted_c));
  m.set("finished", timestamp_utc());
  write_text_file(manifest_path, m.to_string());
  return result;
}

ToyResult toy_run(const ToyConfig& cfg) {
  std::filesystem::create_directories(cfg.outdir);
  ParsedConfig pc;
  pc.mode = Mode::Toy2d;
  pc.toy = cfg;
  Manifest m = base_manifest(config_echo(pc));
  const std::string manifest_path = cfg.outdir + "/manifest.txt";
  write_text_file(manifest_path, m.to_string());

  const std::function<void(long long, const ScalarField&)> on_step =
      [&](long long step, const ScalarField& u) {
        if (cfg.snapshot_every > 0 && step % cfg.snapshot_every == 0)
          write_snapshot(u, cfg.outdir + "/snap_" + std::to_string(step) + ".sghf");
      };
  ToyResult result = toy_run_with_callback(cfg, &on_step);

  write_toy_csv(result.rows, cfg.outdir + "/diagnostics.csv");
  if (cfg.snapshot_every > 0 && result.rows.back().step % cfg.snapshot_every != 0)
    write_snapshot(result.u,
                   cfg.outdir + "/snap_" + std::to_string(result.rows.back().step) + ".sghf");

  m.set("status", result.status);
  m.set("finished", timestamp_utc());
  write_text_file(manifest_path, m.to_string());
  return result;
}

}  // namespace spinflow
