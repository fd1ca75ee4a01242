#include "quditsqueeze/gaussian_core.hpp"

#include <cmath>
#include <stdexcept>

namespace qsq {

GaussianState vacuum_state(bool track_third) {
  const int n = track_third ? 4 : 2;
  GaussianState s;
  s.cov = 0.5 * Eigen::MatrixXd::Identity(n, n);
  s.mean = Eigen::VectorXd::Zero(n);
  return s;
}

MeasurementStrength measurement_strength(double od, double gamma_tau,
                                         double dfz2, SpinQuantum f) {
  if (od < 0.0 || gamma_tau < 0.0 || dfz2 < 0.0)
    throw std::invalid_argument("measurement strength inputs must be nonnegative");
  const double xi = od * gamma_tau * dfz2 / (9.0 * f.f() * f.f());
  return MeasurementStrength{xi, od, gamma_tau, dfz2, f};
}

GaussianState qnd_pulse(const GaussianState& state, double xi_pulse) {
  if (xi_pulse < 0.0)
    throw std::invalid_argument("pulse strength must be nonnegative");
  if (xi_pulse == 0.0) return state;

  const int n = static_cast<int>(state.cov.rows());
  const double kappa = std::sqrt(xi_pulse);

  // Joint covariance over (atoms..., x_L, p_L), light at vacuum.
  Eigen::MatrixXd joint = Eigen::MatrixXd::Zero(n + 2, n + 2);
  joint.topLeftCorner(n, n) = state.cov;
  joint(n, n) = joint(n + 1, n + 1) = 0.5;

  // Faraday interaction: x_L += kappa X_dn, P_dn -= kappa p_L.
  Eigen::MatrixXd S = Eigen::MatrixXd::Identity(n + 2, n + 2);
  S(n, 0) = kappa;
  S(1, n + 1) = -kappa;
  joint = S * joint * S.transpose();

  Eigen::VectorXd mean(n + 2);
  mean.head(n) = state.mean;
  mean(n) = mean(n + 1) = 0.0;
  mean = S * mean;

  // Homodyne of x_L at outcome 0: Schur complement over that row.
  const double vxl = joint(n, n);
  const Eigen::VectorXd cross = joint.block(0, n, n, 1);

  GaussianState out = state;
  out.cov = joint.topLeftCorner(n, n) - cross * cross.transpose() / vxl;
  out.cov = 0.5 * (out.cov + out.cov.transpose());  // keep exact symmetry
  out.mean = mean.head(n) + cross * (0.0 - mean(n)) / vxl;
  return out;
}

GaussianState countertwist_step(const GaussianState& state, double dxi) {
  if (dxi < 0.0)
    throw std::invalid_argument("squeeze step must be nonnegative");
  GaussianState out = state;
  const int n = static_cast<int>(state.cov.rows());
  Eigen::VectorXd scale = Eigen::VectorXd::Ones(n);
  scale(0) = std::exp(-0.5 * dxi);
  scale(1) = std::exp(0.5 * dxi);
  out.cov = scale.asDiagonal() * state.cov * scale.asDiagonal();
  out.mean = scale.asDiagonal() * state.mean;
  return out;
}

double zeta_metrological(const GaussianState& state, double internal_factor) {
  if (state.meanspin <= 0.0)
    throw std::invalid_argument("mean spin destroyed, zeta undefined");
  return internal_factor * 2.0 * state.var_x() / (state.meanspin * state.meanspin);
}

double min_uncertainty_eigenvalue(const GaussianState& state) {
  const int n = static_cast<int>(state.cov.rows());
  Eigen::MatrixXcd m = state.cov.cast<complexd>();
  for (int k = 0; k < n / 2; ++k) {
    m(2 * k, 2 * k + 1) += complexd(0.0, 0.5);
    m(2 * k + 1, 2 * k) += complexd(0.0, -0.5);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
  return es.eigenvalues().minCoeff();
}

bool satisfies_uncertainty(const GaussianState& state, double tol) {
  return min_uncertainty_eigenvalue(state) >= -tol;
}

}  // namespace qsq
