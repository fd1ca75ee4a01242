#pragma once

// Optical-pumping decoherence for the Gaussian engine. Scattering events
// split into spin flips within the embedded qubit, loss out of the manifold,
// and the pumping chain one level further down. The total event rate is
// 2/9 of the scattering rate for every preparation; how the budget splits
// depends on the fiducial state.
//
// Time is measured in units of 1/gamma_s throughout.

#include "quditsqueeze/gaussian_core.hpp"
#include "quditsqueeze/spin_algebra.hpp"

namespace qsq {

struct PumpingRates {
  Prep prep;
  SpinQuantum f;
  double flip;   // qubit spin-flip rate, units of gamma_s
  double loss;   // departure from the embedded manifold
  double chain;  // down -> third pumping step
  double total;  // flip + loss = 2/9
};

// Known closed forms: flip = 1/(12f) for the SCS, (f+1)/(18f) for the m_x=0
// preparation, 1/9 for the cat. The chain reuses the preparation's flip
// formula for the next step down. loss keeps flip + loss = 2/9.
PumpingRates pumping_rates(Prep prep, SpinQuantum f);

enum class ThirdStatePolicy { REMOVE, RETAIN };

std::string to_string(ThirdStatePolicy p);
ThirdStatePolicy policy_from_string(const std::string& name);

// Channel coefficients surfaced in the run config so results are
// reproducible from their metadata.
//   w          noise quanta injected per flip event before any transfer
//              of coherence
//   t_coh      fraction of a scattering event's coherence that survives
//              into the neighboring level when the third state is retained
//   chain_rule "flip" couples the retained third mode at the preparation's
//              flip rate, "none" disables the chain
struct ChannelConfig {
  double w = 1.0;
  double t_coh = 0.97;
  std::string chain_rule = "flip";
};

// Coherence fraction retained through a flip event: t_coh when the policy
// keeps a third state that exists for this preparation, else 0. The cat
// preparation has none at any f.
double transfer_coherence_weight(Prep prep, SpinQuantum f,
                                 ThirdStatePolicy policy,
                                 const ChannelConfig& channel);

// One Euler step of the pumping channel:
//   (a) loss mixes the covariance toward vacuum and shrinks survive
//   (b) flips add w * (1 - t_coh_eff) population noise to the qubit mode
//   (c) under RETAIN the chain partially swaps the qubit and third modes,
//       weighted by the incoherent fraction of events
//   (d) meanspin decays at half the total event rate (amplitude decay)
// Requires total * dt <= 0.1.
GaussianState decohere_step(const GaussianState& state, const PumpingRates& rates,
                            ThirdStatePolicy policy, double dt,
                            const ChannelConfig& channel = {});

}  // namespace qsq
