#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <optional>

#include "quditsqueeze/cli_commands.hpp"
#include "quditsqueeze/errors.hpp"

namespace {

struct CommonOpts {
  std::string config_path;
  std::string out_path = "-";
  std::optional<double> dt;
  std::optional<double> duration;
  int threads = 1;
};

qsq::RunConfigFile load_with_overrides(const CommonOpts& o) {
  qsq::RunConfigFile cfg = qsq::load_config(o.config_path);
  if (o.dt) cfg.base.dt = *o.dt;
  if (o.duration) cfg.base.duration = *o.duration;
  qsq::validate_config(cfg.base);
  return cfg;
}

void with_output(const std::string& path,
                 const std::function<void(std::ostream&)>& emit) {
  if (path == "-") {
    emit(std::cout);
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open output file '" + path + "'");
  emit(file);
}

void add_common(CLI::App* cmd, CommonOpts& o, bool with_threads) {
  cmd->add_option("--config", o.config_path, "run configuration (JSON)")
      ->required();
  cmd->add_option("--out", o.out_path, "output file, '-' for stdout");
  cmd->add_option("--dt", o.dt, "override the time step");
  cmd->add_option("--duration", o.duration, "override the run duration");
  if (with_threads)
    cmd->add_option("--threads", o.threads, "worker threads for sweep points")
        ->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"collective spin squeezing simulator for qudit ensembles"};
  app.require_subcommand(1);

  CommonOpts sim_opts, sweep_opts, peak_opts;
  std::optional<std::string> validate_config_path;
  int exit_code = 0;

  CLI::App* simulate =
      app.add_subcommand("simulate", "run one protocol and emit the trace");
  add_common(simulate, sim_opts, false);
  simulate->callback([&] {
    const qsq::RunConfigFile cfg = load_with_overrides(sim_opts);
    with_output(sim_opts.out_path,
                [&](std::ostream& out) { qsq::cmd_simulate(cfg, out); });
  });

  CLI::App* sweep =
      app.add_subcommand("sweep", "run every sweep-axis combination");
  add_common(sweep, sweep_opts, true);
  sweep->callback([&] {
    const qsq::RunConfigFile cfg = load_with_overrides(sweep_opts);
    with_output(sweep_opts.out_path, [&](std::ostream& out) {
      qsq::cmd_sweep(cfg, out, sweep_opts.threads);
    });
  });

  CLI::App* peak =
      app.add_subcommand("peak", "peak squeezing table over the sweep axes");
  add_common(peak, peak_opts, true);
  peak->callback([&] {
    const qsq::RunConfigFile cfg = load_with_overrides(peak_opts);
    with_output(peak_opts.out_path, [&](std::ostream& out) {
      qsq::cmd_peak(cfg, out, peak_opts.threads);
    });
  });

  CLI::App* validate =
      app.add_subcommand("validate", "run the built-in invariant suites");
  validate->add_option("--config", validate_config_path,
                       "also vet this config's coefficients");
  validate->callback(
      [&] { exit_code = qsq::cmd_validate(validate_config_path, std::cout); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const qsq::GuardError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return exit_code;
}
