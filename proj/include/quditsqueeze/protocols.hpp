#pragma once

// Protocol runners. The countertwisting run interleaves per-step squeezing
// with the pumping channel and samples the squeezing parameter on a uniform
// time grid; the QND run applies one probe pulse and then lets the channel
// act over the same exposure. Time is gamma_s * t.

#include <functional>
#include <optional>
#include <vector>

#include "quditsqueeze/decoherence.hpp"
#include "quditsqueeze/gaussian_core.hpp"
#include "quditsqueeze/spin_algebra.hpp"

namespace qsq {

enum class FinalMap { SCS_TARGET, YURKE_TARGET };
enum class ProtocolKind { COUNTERTWIST, QND };

std::string to_string(FinalMap m);
FinalMap final_map_from_string(const std::string& name);
std::string to_string(ProtocolKind k);
ProtocolKind protocol_from_string(const std::string& name);

// Probe detuning in linewidths. Bookkeeping only, the dynamics depend on
// nothing but OD and the scattering exposure.
struct DetuningMetadata {
  double delta_over_linewidth = 0.0;
};

struct ProtocolConfig {
  SpinQuantum f{4.0};
  Prep prep = Prep::SCS;
  double od = 300.0;
  double duration = 3.0;
  double dt = 1e-3;
  ThirdStatePolicy policy = ThirdStatePolicy::RETAIN;
  FinalMap final_map = FinalMap::SCS_TARGET;
  double alpha = 0.0;
  ProtocolKind protocol = ProtocolKind::COUNTERTWIST;
  bool decoherence = true;
  ChannelConfig channel;
  std::optional<double> flip_override;  // replaces the table flip rate
  std::optional<DetuningMetadata> detuning;
};

// Throws ConfigError when fields are out of range or inconsistent.
void validate_config(const ProtocolConfig& cfg);

struct TraceSample {
  double t;
  double zeta;
  double zeta_db;  // -10 log10(zeta), positive means squeezed
};

struct SqueezingTrace {
  std::vector<TraceSample> samples;
  double peak_t = 0.0;      // grid minimum of zeta over the samples
  double peak_zeta = 1.0;
  bool peak_interior = false;  // false when the minimum sits at an endpoint
};

// Called with the engine state at t = 0 and after every step; lets callers
// audit the evolution without rerunning it.
using StepObserver = std::function<void(double t, const GaussianState&)>;

// Time-stepped protocol run. The squeezing rate per step is
// od * dfz2 / (9 f^2) * survive(t), so the coupling fades as atoms leave.
// When the policy retains a third state the preparation actually has, the
// engine tracks the extra mode; otherwise the policy falls back to REMOVE.
SqueezingTrace run_protocol(const ProtocolConfig& cfg,
                            const StepObserver& observer = {});

struct PeakResult {
  double t;
  double zeta;
  bool interior;
};

// Grid scan plus 3-point parabolic refinement of the trace minimum. When
// zeta is still falling at the end of the run the endpoint is returned with
// interior = false.
PeakResult peak_squeezing(const ProtocolConfig& cfg);

struct PeakEntry {
  Prep prep;
  SpinQuantum f;
  FinalMap map;
  double peak_db;
  double t_peak;
  bool interior;
};

// Peak squeezing per (f, prep), with and without the Yurke target map.
// The map rows reuse the same trace: the target map is a multiplicative
// factor on zeta, so only the level shifts, not the peak position. Yurke
// rows are emitted for integer f only.
std::vector<PeakEntry> compare_preparations(const ProtocolConfig& base,
                                            const std::vector<Prep>& preps,
                                            const std::vector<SpinQuantum>& fs);

}  // namespace qsq
