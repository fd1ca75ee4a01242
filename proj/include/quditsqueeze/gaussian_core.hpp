#pragma once

// Gaussian engine for the collective-spin fluctuations in the
// Holstein-Primakoff picture. One bosonic mode (X_dn, P_dn) carries the
// embedded-qubit fluctuations; a second optional mode (X_T, P_T) tracks the
// third level when the pumping chain is retained.
//
// Conventions: [X, P] = i, vacuum variance 1/2 per quadrature. The
// metrological squeezing parameter is zeta = 2 Var(X_dn) for an undamaged
// mean spin, which fixes the normalization.

#include <Eigen/Dense>

#include "quditsqueeze/spin_algebra.hpp"

namespace qsq {

struct GaussianState {
  Eigen::MatrixXd cov;   // 2k x 2k over (X_dn, P_dn[, X_T, P_T])
  Eigen::VectorXd mean;
  double survive = 1.0;   // fraction of atoms still in the manifold
  double meanspin = 1.0;  // coherent amplitude factor of <F_x>

  int modes() const { return static_cast<int>(cov.rows()) / 2; }
  bool tracks_third() const { return modes() == 2; }

  double var_x() const { return cov(0, 0); }
  double var_p() const { return cov(1, 1); }
};

GaussianState vacuum_state(bool track_third);

struct MeasurementStrength {
  double xi;
  double od;
  double gamma_tau;
  double dfz2;
  SpinQuantum f;
};

// xi = OD * (gamma_s tau) * dfz2 / (9 f^2), the projection noise to shot
// noise ratio that sets both QND conditioning and the squeezing rate.
MeasurementStrength measurement_strength(double od, double gamma_tau,
                                         double dfz2, SpinQuantum f);

// Faraday probe pulse of strength xi followed by homodyne detection of the
// meter, conditioned on outcome 0. The light mode enters at vacuum, picks up
// kappa X_dn (kappa = sqrt(xi)), and kicks P_dn back; conditioning is the
// Gaussian Schur complement. From vacuum this gives Var(X_dn) = (1/2)/(1+xi).
GaussianState qnd_pulse(const GaussianState& state, double xi_pulse);

// One step of the countertwisting squeeze: X_dn -> e^{-dxi/2} X_dn,
// P_dn -> e^{+dxi/2} P_dn. Accumulating sum(dxi) = xi with no decoherence
// gives Var(X_dn) = (1/2) e^{-xi} exactly.
GaussianState countertwist_step(const GaussianState& state, double dxi);

// zeta = internal_factor * 2 Var(X_dn) / meanspin^2. The factor is 1 when
// the final map targets the SCS and yurke_internal_zeta(f, alpha) when it
// targets the Yurke family.
double zeta_metrological(const GaussianState& state, double internal_factor);

// Smallest eigenvalue of cov + (i/2) Omega; nonnegative (up to tolerance)
// for any physical state.
double min_uncertainty_eigenvalue(const GaussianState& state);
bool satisfies_uncertainty(const GaussianState& state, double tol = 1e-10);

}  // namespace qsq
