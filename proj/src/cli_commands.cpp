#include "quditsqueeze/cli_commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>
#include <vector>

#include "quditsqueeze/errors.hpp"
#include "quditsqueeze/oracle_exact.hpp"

namespace qsq {

namespace {

void write_header(std::ostream& out, const RunConfigFile& cfg,
                  const std::string& columns) {
  out << "# " << config_to_json(cfg).dump() << "\n";
  out << "# zeta_db = -10*log10(zeta); positive dB means squeezing below the "
         "standard quantum limit\n";
  out << columns << "\n";
}

std::string trace_rows(const SqueezingTrace& trace, const ProtocolConfig& b,
                       int prec) {
  std::ostringstream os;
  for (const auto& s : trace.samples) {
    os << format_double(s.t, prec) << ',' << format_double(s.zeta, prec) << ','
       << format_double(s.zeta_db, prec) << ',' << to_string(b.prep) << ','
       << format_double(b.f.f(), prec) << ',' << format_double(b.od, prec)
       << ',' << to_string(b.final_map) << '\n';
  }
  return os.str();
}

int trace_steps(const ProtocolConfig& cfg) {
  return static_cast<int>(std::ceil(cfg.duration / cfg.dt - 1e-9));
}

// first-occurrence order, duplicates dropped with a warning
template <typename T, typename Same>
std::vector<T> dedupe_axis(const std::vector<T>& in, const char* axis, Same same) {
  std::vector<T> out;
  for (const auto& v : in) {
    const bool dup = std::any_of(out.begin(), out.end(),
                                 [&](const T& u) { return same(u, v); });
    if (dup)
      std::cerr << "warning: duplicate value in sweep axis '" << axis
                << "' ignored\n";
    else
      out.push_back(v);
  }
  return out;
}

struct ResolvedAxes {
  std::vector<SpinQuantum> f;
  std::vector<Prep> prep;
  std::vector<double> od;
};

ResolvedAxes resolve_axes(const RunConfigFile& cfg) {
  if (!cfg.sweep) throw ConfigError("this subcommand needs a 'sweep' block");
  ResolvedAxes ax;
  ax.f = cfg.sweep->f.empty() ? std::vector<SpinQuantum>{cfg.base.f}
                              : cfg.sweep->f;
  ax.prep = cfg.sweep->prep.empty() ? std::vector<Prep>{cfg.base.prep}
                                    : cfg.sweep->prep;
  ax.od = cfg.sweep->od.empty() ? std::vector<double>{cfg.base.od}
                                : cfg.sweep->od;
  ax.f = dedupe_axis(ax.f, "f", [](const SpinQuantum& a, const SpinQuantum& b) {
    return a.twice_f == b.twice_f;
  });
  ax.prep = dedupe_axis(ax.prep, "prep",
                        [](Prep a, Prep b) { return a == b; });
  ax.od = dedupe_axis(ax.od, "od",
                      [](double a, double b) { return a == b; });
  return ax;
}

void run_pool(std::size_t njobs, int threads,
              const std::function<void(std::size_t)>& work) {
  const int n =
      std::max(1, std::min<int>(threads, static_cast<int>(njobs ? njobs : 1)));
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex mu;
  auto loop = [&] {
    std::size_t i;
    while ((i = next.fetch_add(1)) < njobs) {
      try {
        work(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < n; ++t) pool.emplace_back(loop);
  loop();
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace

void cmd_simulate(const RunConfigFile& cfg, std::ostream& out) {
  const SqueezingTrace trace = run_protocol(cfg.base);
  write_header(out, cfg, "t_gamma,zeta,zeta_db,prep,f,od,final_map");
  out << trace_rows(trace, cfg.base, cfg.precision);
}

void cmd_sweep(const RunConfigFile& cfg, std::ostream& out, int threads) {
  const ResolvedAxes ax = resolve_axes(cfg);
  std::vector<ProtocolConfig> points;
  for (const SpinQuantum& f : ax.f)
    for (Prep prep : ax.prep)
      for (double od : ax.od) {
        ProtocolConfig p = cfg.base;
        p.f = f;
        p.prep = prep;
        p.od = od;
        points.push_back(p);
      }
  std::vector<std::string> blocks(points.size());
  run_pool(points.size(), threads, [&](std::size_t i) {
    blocks[i] = trace_rows(run_protocol(points[i]), points[i], cfg.precision);
  });
  write_header(out, cfg, "t_gamma,zeta,zeta_db,prep,f,od,final_map");
  for (const auto& b : blocks) out << b;
}

void cmd_peak(const RunConfigFile& cfg, std::ostream& out, int threads) {
  ResolvedAxes ax = resolve_axes(cfg);
  if (ax.od.size() > 1)
    throw ConfigError("the peak table needs a single od value");
  std::sort(ax.f.begin(), ax.f.end(),
            [](const SpinQuantum& a, const SpinQuantum& b) {
              return a.twice_f < b.twice_f;
            });
  std::sort(ax.prep.begin(), ax.prep.end(), [](Prep a, Prep b) {
    return static_cast<int>(a) < static_cast<int>(b);
  });

  std::vector<ProtocolConfig> points;
  for (const SpinQuantum& f : ax.f)
    for (Prep prep : ax.prep) {
      ProtocolConfig p = cfg.base;
      p.f = f;
      p.prep = prep;
      p.od = ax.od.front();
      p.final_map = FinalMap::SCS_TARGET;
      if (trace_steps(p) < 500)
        throw ConfigError("peak search needs at least 500 samples per trace, "
                          "increase duration/dt");
      points.push_back(p);
    }

  std::vector<std::string> blocks(points.size());
  std::vector<std::string> warnings(points.size());
  const int prec = cfg.precision;
  run_pool(points.size(), threads, [&](std::size_t i) {
    const ProtocolConfig& p = points[i];
    const PeakResult peak = peak_squeezing(p);
    std::ostringstream os;
    os << format_double(p.f.f(), prec) << ',' << to_string(p.prep) << ",scs,"
       << format_double(-10.0 * std::log10(peak.zeta), prec) << ','
       << format_double(peak.t, prec) << '\n';
    if (p.f.integer()) {
      const double factor = yurke_internal_zeta(p.f, p.alpha);
      os << format_double(p.f.f(), prec) << ',' << to_string(p.prep)
         << ",yurke,"
         << format_double(-10.0 * std::log10(peak.zeta * factor), prec) << ','
         << format_double(peak.t, prec) << '\n';
    }
    blocks[i] = os.str();
    if (!peak.interior) {
      std::ostringstream ws;
      ws << "warning: no interior squeezing minimum for f="
         << format_double(p.f.f(), 6) << " prep=" << to_string(p.prep)
         << ", endpoint reported\n";
      warnings[i] = ws.str();
    }
  });
  for (const auto& w : warnings)
    if (!w.empty()) std::cerr << w;
  write_header(out, cfg, "f,prep,final_map,peak_db,t_peak");
  for (const auto& b : blocks) out << b;
}

namespace {

struct CheckResult {
  std::string name;
  bool pass;
  std::string detail;
};

double herm_dev(const Eigen::MatrixXcd& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

CheckResult check_spin_algebra() {
  double worst = 0.0;
  for (int tf = 1; tf <= 12; ++tf) {
    const SpinQuantum f = SpinQuantum::from_twice(tf);
    const SpinOperators ops = spin_operators(f);
    const complexd i1(0.0, 1.0);
    worst = std::max({worst, herm_dev(ops.fx), herm_dev(ops.fy), herm_dev(ops.fz)});
    worst = std::max(worst, (ops.fx * ops.fy - ops.fy * ops.fx - i1 * ops.fz)
                                .cwiseAbs()
                                .maxCoeff());
    worst = std::max(worst, (ops.fy * ops.fz - ops.fz * ops.fy - i1 * ops.fx)
                                .cwiseAbs()
                                .maxCoeff());
    const Eigen::MatrixXcd casimir =
        ops.fx * ops.fx + ops.fy * ops.fy + ops.fz * ops.fz -
        f.f() * (f.f() + 1.0) *
            Eigen::MatrixXcd::Identity(f.dim(), f.dim());
    worst = std::max(worst, casimir.cwiseAbs().maxCoeff());
  }
  return {"spin_algebra", worst < 1e-12,
          "max commutator/Casimir deviation " + format_double(worst, 3)};
}

CheckResult check_projection_noise() {
  double worst = 0.0;
  for (int tf = 1; tf <= 10; ++tf) {
    const SpinQuantum f = SpinQuantum::from_twice(tf);
    const double fv = f.f();
    worst = std::max(
        worst, std::abs(variance_fz(prepare_fiducial(Prep::SCS, f)) - fv / 2.0));
    worst = std::max(
        worst, std::abs(variance_fz(prepare_fiducial(Prep::CAT, f)) - fv * fv));
    if (f.integer())
      worst = std::max(worst,
                       std::abs(variance_fz(prepare_fiducial(Prep::ZERO_X, f)) -
                                fv * (fv + 1.0) / 2.0));
  }
  return {"projection_noise", worst < 1e-12,
          "max closed-form deviation " + format_double(worst, 3)};
}

CheckResult check_pumping_rates() {
  double worst = 0.0;
  bool ordered = true;
  for (int fi = 1; fi <= 5; ++fi) {
    const SpinQuantum f(static_cast<double>(fi));
    const PumpingRates scs = pumping_rates(Prep::SCS, f);
    const PumpingRates zx = pumping_rates(Prep::ZERO_X, f);
    const PumpingRates cat = pumping_rates(Prep::CAT, f);
    worst = std::max(worst, std::abs(scs.flip - 1.0 / (12.0 * fi)));
    worst = std::max(worst, std::abs(zx.flip - (fi + 1.0) / (18.0 * fi)));
    worst = std::max(worst, std::abs(cat.flip - 1.0 / 9.0));
    for (const auto& r : {scs, zx, cat})
      worst = std::max(worst, std::abs(r.flip + r.loss - 2.0 / 9.0));
    if (fi >= 2) ordered = ordered && scs.flip < zx.flip && zx.flip < cat.flip;
  }
  return {"pumping_rates", worst < 1e-15 && ordered,
          "max table deviation " + format_double(worst, 3) +
              (ordered ? ", ordering ok" : ", ordering violated")};
}

CheckResult check_channel_trace() {
  const SpinQuantum f(4.0);
  const double retain = channel_trace_error(pumping_rates(Prep::SCS, f),
                                            ThirdStatePolicy::RETAIN, 1e-3, 2000);
  const double remove = channel_trace_error(pumping_rates(Prep::CAT, f),
                                            ThirdStatePolicy::REMOVE, 1e-3, 2000);
  const double worst = std::max(retain, remove);
  return {"channel_trace", worst < 1e-10,
          "max trace drift " + format_double(worst, 3)};
}

CheckResult check_qnd_conditioning() {
  double worst = 0.0;
  for (double xi : {0.1, 1.0, 3.0}) {
    const GaussianState post = qnd_pulse(vacuum_state(false), xi);
    worst = std::max(worst, std::abs(post.var_x() - 0.5 / (1.0 + xi)));
    worst = std::max(worst, std::abs(post.var_p() - (0.5 + 0.5 * xi)));
  }
  const GaussianState split =
      qnd_pulse(qnd_pulse(vacuum_state(false), 0.7), 1.3);
  const GaussianState whole = qnd_pulse(vacuum_state(false), 2.0);
  worst = std::max(worst, std::abs(split.var_x() - whole.var_x()));
  return {"qnd_conditioning", worst < 1e-10,
          "max conditional-variance deviation " + format_double(worst, 3)};
}

CheckResult check_hpa_agreement() {
  const SpinQuantum f(1.0);
  const double xi = 0.1;
  const int n = 4;
  const EmbeddedTriple target =
      third_state(coupled_state(prepare_fiducial(Prep::SCS, f)));
  double worst = 0.0;
  for (Prep prep : {Prep::SCS, Prep::CAT, Prep::ZERO_X}) {
    EmbeddedTriple source = coupled_state(prepare_fiducial(prep, f));
    if (prep != Prep::CAT) source = third_state(source);
    const Eigen::MatrixXcd u = embedded_map(source, target);
    EnsembleState psi = product_state(prepare_fiducial(prep, f), n);
    psi = gaussian_kraus_measure(psi, xi, 0.0);
    psi = apply_local_unitary(u, psi);
    const double ze = exact_zeta(psi);
    const double zg = zeta_metrological(qnd_pulse(vacuum_state(false), xi), 1.0);
    worst = std::max(worst, std::abs(ze - zg) / zg);
  }
  const double band = 0.02 + 1.0 / n;
  return {"hpa_agreement", worst <= band,
          "max relative zeta deviation " + format_double(worst, 3) +
              " at xi=0.1, n=4 (band " + format_double(band, 3) + ")"};
}

CheckResult check_uncertainty_run() {
  ProtocolConfig cfg;
  cfg.f = SpinQuantum(4.0);
  cfg.prep = Prep::SCS;
  cfg.duration = 0.5;
  cfg.policy = ThirdStatePolicy::RETAIN;
  double worst_eig = 0.0;
  bool bounds_ok = true;
  run_protocol(cfg, [&](double, const GaussianState& s) {
    worst_eig = std::min(worst_eig, min_uncertainty_eigenvalue(s));
    bounds_ok = bounds_ok && s.survive > 0.0 && s.survive <= 1.0 &&
                s.meanspin > 0.0 && s.meanspin <= 1.0;
  });
  return {"uncertainty_relation", worst_eig >= -1e-10 && bounds_ok,
          "min symplectic eigenvalue margin " + format_double(worst_eig, 3)};
}

}  // namespace

int cmd_validate(const std::optional<std::string>& config_path,
                 std::ostream& out) {
  std::vector<CheckResult> checks;
  if (config_path) {
    try {
      load_config(*config_path);
      checks.push_back({"config_invariants", true, "config accepted"});
    } catch (const ConfigError& e) {
      checks.push_back({"config_invariants", false, e.what()});
    }
  }
  checks.push_back(check_spin_algebra());
  checks.push_back(check_projection_noise());
  checks.push_back(check_pumping_rates());
  checks.push_back(check_channel_trace());
  checks.push_back(check_qnd_conditioning());
  checks.push_back(check_hpa_agreement());
  checks.push_back(check_uncertainty_run());

  nlohmann::json report;
  bool all_pass = true;
  for (const auto& c : checks) {
    report["checks"].push_back(
        {{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    all_pass = all_pass && c.pass;
  }
  report["all_pass"] = all_pass;
  out << report.dump(2) << "\n";
  return all_pass ? 0 : 1;
}

}  // namespace qsq
