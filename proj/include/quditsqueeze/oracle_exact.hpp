#pragma once

// Brute-force few-atom reference calculations on the full tensor-product
// Hilbert space. Everything here is exact and deliberately small: the guards
// cap the state at d^n <= 1e5 amplitudes (n <= 4 atoms, d <= 9 levels) and
// materialized operators at 4096 rows. The Gaussian engine is the production
// path; this module exists to check it.

#include <Eigen/Dense>

#include <vector>

#include "quditsqueeze/decoherence.hpp"
#include "quditsqueeze/spin_algebra.hpp"

namespace qsq {

struct EnsembleState {
  int n_atoms;
  SpinQuantum f;
  Eigen::VectorXcd amps;  // tensor-product basis, site 0 slowest index
};

// |single>^{tensor n}
EnsembleState product_state(const SpinState& single, int n_atoms);

// Collective operator sum_i op^(i) materialized as a dense matrix.
Eigen::MatrixXcd collective_operator(const Eigen::MatrixXcd& single_op,
                                     int n_atoms);

// Matrix-free action of the collective operator on a state.
Eigen::VectorXcd apply_collective(const Eigen::MatrixXcd& single_op,
                                  const EnsembleState& state);

// Same-site unitary applied to every atom.
EnsembleState apply_local_unitary(const Eigen::MatrixXcd& u,
                                  const EnsembleState& state);

complexd collective_expectation(const Eigen::MatrixXcd& single_op,
                                const EnsembleState& state);
double collective_variance(const Eigen::MatrixXcd& single_op,
                           const EnsembleState& state);

// Overlap with a product of per-site states, <s_0 s_1 ... | state>.
complexd product_overlap(const EnsembleState& state,
                         const std::vector<SpinState>& sites);

// QND measurement of F_z with meter outcome y: Kraus operator
// K(y) ~ exp(-(y - F_z)^2 / (4 sigma^2)) with sigma^2 = Var(F_z)_in / xi,
// then renormalize. Diagonal in the z product basis, so exact and cheap.
EnsembleState gaussian_kraus_measure(const EnsembleState& state, double xi,
                                     double outcome);

// Wineland parameter 2 f n Var_min / <F_x>^2, minimizing the quadrature
// variance over angle in the (F_y, F_z) plane transverse to the mean spin.
double exact_zeta(const EnsembleState& state);

// Single-atom pumping channel on the abstract level set {up, down, third,
// lost}, run as a density-matrix Euler step. Returns the largest trace
// deviation over the requested number of steps; bookkeeping check for the
// rate tables.
double channel_trace_error(const PumpingRates& rates, ThirdStatePolicy policy,
                           double dt, int steps);

}  // namespace qsq
