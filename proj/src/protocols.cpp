#include "quditsqueeze/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "quditsqueeze/errors.hpp"

namespace qsq {

std::string to_string(FinalMap m) {
  return m == FinalMap::SCS_TARGET ? "scs" : "yurke";
}

FinalMap final_map_from_string(const std::string& name) {
  std::string s = name;
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (s == "scs") return FinalMap::SCS_TARGET;
  if (s == "yurke") return FinalMap::YURKE_TARGET;
  throw ConfigError("unknown final map '" + name + "' (expected scs or yurke)");
}

std::string to_string(ProtocolKind k) {
  return k == ProtocolKind::COUNTERTWIST ? "countertwist" : "qnd";
}

ProtocolKind protocol_from_string(const std::string& name) {
  std::string s = name;
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (s == "countertwist") return ProtocolKind::COUNTERTWIST;
  if (s == "qnd") return ProtocolKind::QND;
  throw ConfigError("unknown protocol '" + name + "' (expected countertwist or qnd)");
}

void validate_config(const ProtocolConfig& cfg) {
  if (cfg.dt <= 0.0) throw ConfigError("dt must be positive");
  if (cfg.duration < 0.0) throw ConfigError("duration must be nonnegative");
  if (cfg.od < 0.0) throw ConfigError("od must be nonnegative");
  if (cfg.alpha < 0.0 || cfg.alpha >= std::numbers::pi / 2.0)
    throw ConfigError("alpha must lie in [0, pi/2)");
  if (cfg.final_map == FinalMap::YURKE_TARGET && !cfg.f.integer())
    throw ConfigError("the Yurke target map needs integer f");
  if (cfg.channel.w < 0.0) throw ConfigError("channel w must be nonnegative");
  if (cfg.channel.t_coh < 0.0 || cfg.channel.t_coh > 1.0)
    throw ConfigError("channel t_coh must lie in [0, 1]");
  if (cfg.channel.chain_rule != "flip" && cfg.channel.chain_rule != "none")
    throw ConfigError("channel chain_rule must be 'flip' or 'none'");
  if (cfg.flip_override) {
    if (*cfg.flip_override < 0.0 || *cfg.flip_override > 2.0 / 9.0)
      throw ConfigError("flip override must lie in [0, 2/9]");
  }
}

namespace {

PumpingRates resolve_rates(const ProtocolConfig& cfg) {
  PumpingRates r = pumping_rates(cfg.prep, cfg.f);
  if (cfg.flip_override) {
    r.flip = *cfg.flip_override;
    r.loss = r.total - r.flip;
    r.chain = r.flip;
  }
  return r;
}

void push_sample(SqueezingTrace& trace, double t, double zeta) {
  trace.samples.push_back({t, zeta, -10.0 * std::log10(zeta)});
}

void finish_trace(SqueezingTrace& trace) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < trace.samples.size(); ++i)
    if (trace.samples[i].zeta < trace.samples[best].zeta) best = i;
  trace.peak_t = trace.samples[best].t;
  trace.peak_zeta = trace.samples[best].zeta;
  trace.peak_interior = best > 0 && best + 1 < trace.samples.size();
}

}  // namespace

SqueezingTrace run_protocol(const ProtocolConfig& cfg,
                            const StepObserver& observer) {
  validate_config(cfg);

  const double internal_factor =
      cfg.final_map == FinalMap::YURKE_TARGET
          ? yurke_internal_zeta(cfg.f, cfg.alpha)
          : 1.0;

  const SpinState up = prepare_fiducial(
      cfg.prep, cfg.f,
      cfg.prep == Prep::YURKE ? std::optional<double>(cfg.alpha) : std::nullopt);
  const double dfz2 = variance_fz(up);
  const double fv = cfg.f.f();
  const double squeeze_rate = cfg.od * dfz2 / (9.0 * fv * fv);

  const bool retain = cfg.decoherence &&
                      cfg.policy == ThirdStatePolicy::RETAIN &&
                      has_third_state(cfg.prep, cfg.f);
  const ThirdStatePolicy policy =
      retain ? ThirdStatePolicy::RETAIN : ThirdStatePolicy::REMOVE;
  PumpingRates rates{cfg.prep, cfg.f, 0.0, 0.0, 0.0, 0.0};
  if (cfg.decoherence) rates = resolve_rates(cfg);

  GaussianState state = vacuum_state(retain);
  SqueezingTrace trace;
  push_sample(trace, 0.0, zeta_metrological(state, internal_factor));
  if (observer) observer(0.0, state);

  const int n_steps =
      static_cast<int>(std::ceil(cfg.duration / cfg.dt - 1e-9));

  if (cfg.protocol == ProtocolKind::QND) {
    const double xi =
        measurement_strength(cfg.od, cfg.duration, dfz2, cfg.f).xi;
    state = qnd_pulse(state, xi);
    if (!cfg.decoherence) {
      if (cfg.duration > 0.0) {
        push_sample(trace, cfg.duration, zeta_metrological(state, internal_factor));
        if (observer) observer(cfg.duration, state);
      }
    } else {
      for (int i = 1; i <= n_steps; ++i) {
        const double t = std::min(i * cfg.dt, cfg.duration);
        const double h = t - (i - 1) * cfg.dt;
        state = decohere_step(state, rates, policy, h, cfg.channel);
        push_sample(trace, t, zeta_metrological(state, internal_factor));
        if (observer) observer(t, state);
      }
    }
  } else {
    for (int i = 1; i <= n_steps; ++i) {
      const double t = std::min(i * cfg.dt, cfg.duration);
      const double h = t - (i - 1) * cfg.dt;
      state = countertwist_step(state, squeeze_rate * state.survive * h);
      if (cfg.decoherence)
        state = decohere_step(state, rates, policy, h, cfg.channel);
      push_sample(trace, t, zeta_metrological(state, internal_factor));
      if (observer) observer(t, state);
    }
  }

  finish_trace(trace);
  return trace;
}

PeakResult peak_squeezing(const ProtocolConfig& cfg) {
  const SqueezingTrace trace = run_protocol(cfg);
  const auto& s = trace.samples;
  std::size_t k = 0;
  for (std::size_t i = 1; i < s.size(); ++i)
    if (s[i].zeta < s[k].zeta) k = i;
  if (k == 0 || k + 1 == s.size())
    return PeakResult{s[k].t, s[k].zeta, false};

  // parabola through the three bracketing samples
  const double t0 = s[k - 1].t, t1 = s[k].t, t2 = s[k + 1].t;
  const double z0 = s[k - 1].zeta, z1 = s[k].zeta, z2 = s[k + 1].zeta;
  const double d01 = (z1 - z0) / (t1 - t0);
  const double d12 = (z2 - z1) / (t2 - t1);
  const double curv = (d12 - d01) / (t2 - t0);  // half the second derivative
  if (curv <= 0.0) return PeakResult{t1, z1, true};
  // vertex of a(t-t1)^2 + b(t-t1) + c with a = curv, b from the slopes
  const double b = d01 + curv * (t1 - t0);
  double t_star = t1 - b / (2.0 * curv);
  t_star = std::clamp(t_star, t0, t2);
  const double z_star = z1 - b * b / (4.0 * curv);
  if (z_star <= 0.0 || z_star > z1) return PeakResult{t1, z1, true};
  return PeakResult{t_star, z_star, true};
}

std::vector<PeakEntry> compare_preparations(const ProtocolConfig& base,
                                            const std::vector<Prep>& preps,
                                            const std::vector<SpinQuantum>& fs) {
  std::vector<PeakEntry> table;
  for (const SpinQuantum& f : fs) {
    for (Prep prep : preps) {
      ProtocolConfig cfg = base;
      cfg.f = f;
      cfg.prep = prep;
      cfg.final_map = FinalMap::SCS_TARGET;
      const PeakResult peak = peak_squeezing(cfg);
      table.push_back({prep, f, FinalMap::SCS_TARGET,
                       -10.0 * std::log10(peak.zeta), peak.t, peak.interior});
      if (f.integer()) {
        const double factor = yurke_internal_zeta(f, base.alpha);
        table.push_back({prep, f, FinalMap::YURKE_TARGET,
                         -10.0 * std::log10(peak.zeta * factor), peak.t,
                         peak.interior});
      }
    }
  }
  return table;
}

}  // namespace qsq
