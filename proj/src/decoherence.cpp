#include "quditsqueeze/decoherence.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "quditsqueeze/errors.hpp"

namespace qsq {

namespace {
constexpr double kTotalRate = 2.0 / 9.0;
}

PumpingRates pumping_rates(Prep prep, SpinQuantum f) {
  const double fv = f.f();
  double flip = 0.0;
  switch (prep) {
    case Prep::SCS: flip = 1.0 / (12.0 * fv); break;
    case Prep::ZERO_X:
      if (!f.integer())
        throw std::invalid_argument("the m_x = 0 preparation needs integer f");
      flip = (fv + 1.0) / (18.0 * fv);
      break;
    case Prep::CAT: flip = 1.0 / 9.0; break;
    default:
      throw std::invalid_argument("no pumping rates for this preparation");
  }
  PumpingRates r{prep, f, flip, kTotalRate - flip, flip, kTotalRate};
  if (r.loss < 0.0)
    throw std::invalid_argument("flip rate exceeds the total pumping rate");
  return r;
}

std::string to_string(ThirdStatePolicy p) {
  return p == ThirdStatePolicy::REMOVE ? "remove" : "retain";
}

ThirdStatePolicy policy_from_string(const std::string& name) {
  std::string s = name;
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (s == "remove") return ThirdStatePolicy::REMOVE;
  if (s == "retain") return ThirdStatePolicy::RETAIN;
  throw std::invalid_argument("unknown third-state policy '" + name + "'");
}

double transfer_coherence_weight(Prep prep, SpinQuantum f,
                                 ThirdStatePolicy policy,
                                 const ChannelConfig& channel) {
  if (policy == ThirdStatePolicy::REMOVE) return 0.0;
  if (prep == Prep::CAT) return 0.0;
  if (!has_third_state(prep, f)) return 0.0;
  if (channel.t_coh < 0.0 || channel.t_coh > 1.0)
    throw std::invalid_argument("t_coh must lie in [0, 1]");
  return channel.t_coh;
}

GaussianState decohere_step(const GaussianState& state, const PumpingRates& rates,
                            ThirdStatePolicy policy, double dt,
                            const ChannelConfig& channel) {
  if (dt < 0.0) throw std::invalid_argument("dt must be nonnegative");
  if (rates.total * dt > 0.1)
    throw GuardError("step too coarse for the pumping rates");
  const bool retain = policy == ThirdStatePolicy::RETAIN;
  if (retain && !state.tracks_third())
    throw std::invalid_argument("RETAIN policy needs a tracked third mode");

  GaussianState out = state;
  const int n = static_cast<int>(state.cov.rows());

  // (a) departing atoms take their correlations with them
  const double l = rates.loss * dt;
  out.cov = (1.0 - l) * out.cov + l * 0.5 * Eigen::MatrixXd::Identity(n, n);
  out.mean *= std::sqrt(1.0 - l);
  out.survive *= 1.0 - l;

  // (b) flip noise, reduced by whatever coherence the chain carries over
  const double t_coh = transfer_coherence_weight(rates.prep, rates.f, policy, channel);
  const double w_eff = channel.w * (1.0 - t_coh);
  out.cov(0, 0) += rates.flip * dt * w_eff;
  out.cov(1, 1) += rates.flip * dt * w_eff;

  // (c) incoherent part of the chain swaps qubit and third-mode fluctuations
  if (retain && channel.chain_rule != "none") {
    const double eps = rates.chain * dt * (1.0 - t_coh);
    const int perm[4] = {2, 3, 0, 1};
    Eigen::MatrixXd swapped(4, 4);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) swapped(i, j) = out.cov(perm[i], perm[j]);
    out.cov = (1.0 - eps) * out.cov + eps * swapped;
  }

  // (d) coherent mean amplitude decays at half the event rate
  out.meanspin *= 1.0 - rates.total * dt / 2.0;
  return out;
}

}  // namespace qsq
