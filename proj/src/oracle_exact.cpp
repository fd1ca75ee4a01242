#include "quditsqueeze/oracle_exact.hpp"

#include <cmath>
#include <stdexcept>

#include "quditsqueeze/errors.hpp"

namespace qsq {

namespace {

long ensemble_dim(int d, int n_atoms) {
  if (n_atoms < 1 || n_atoms > 4)
    throw GuardError("ensemble size must be between 1 and 4 atoms");
  if (d > 9) throw GuardError("single-atom dimension capped at 9");
  long dim = 1;
  for (int i = 0; i < n_atoms; ++i) dim *= d;
  if (dim > 100000) throw GuardError("ensemble dimension capped at 1e5");
  return dim;
}

// digit of basis index i at the given site, site 0 slowest
int site_digit(long i, int site, int n_atoms, int d) {
  long stride = 1;
  for (int k = n_atoms - 1; k > site; --k) stride *= d;
  return static_cast<int>((i / stride) % d);
}

long site_stride(int site, int n_atoms, int d) {
  long stride = 1;
  for (int k = n_atoms - 1; k > site; --k) stride *= d;
  return stride;
}

}  // namespace

EnsembleState product_state(const SpinState& single, int n_atoms) {
  const int d = single.f.dim();
  const long dim = ensemble_dim(d, n_atoms);
  Eigen::VectorXcd amps = Eigen::VectorXcd::Ones(1);
  for (int k = 0; k < n_atoms; ++k) {
    Eigen::VectorXcd next(amps.size() * d);
    for (long i = 0; i < amps.size(); ++i)
      for (int a = 0; a < d; ++a) next(i * d + a) = amps(i) * single.amps(a);
    amps.swap(next);
  }
  (void)dim;
  return EnsembleState{n_atoms, single.f, amps};
}

Eigen::MatrixXcd collective_operator(const Eigen::MatrixXcd& single_op,
                                     int n_atoms) {
  const int d = static_cast<int>(single_op.rows());
  const long dim = ensemble_dim(d, n_atoms);
  if (dim > 4096)
    throw GuardError("materialized collective operator capped at 4096 rows");
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
  for (int site = 0; site < n_atoms; ++site) {
    const long stride = site_stride(site, n_atoms, d);
    for (long i = 0; i < dim; ++i) {
      const int a = site_digit(i, site, n_atoms, d);
      for (int b = 0; b < d; ++b)
        out(i + (b - a) * stride, i) += single_op(b, a);
    }
  }
  return out;
}

Eigen::VectorXcd apply_collective(const Eigen::MatrixXcd& single_op,
                                  const EnsembleState& state) {
  const int d = state.f.dim();
  const long dim = state.amps.size();
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(dim);
  for (int site = 0; site < state.n_atoms; ++site) {
    const long stride = site_stride(site, state.n_atoms, d);
    for (long i = 0; i < dim; ++i) {
      const int a = site_digit(i, site, state.n_atoms, d);
      for (int b = 0; b < d; ++b)
        out(i + (b - a) * stride) += single_op(b, a) * state.amps(i);
    }
  }
  return out;
}

EnsembleState apply_local_unitary(const Eigen::MatrixXcd& u,
                                  const EnsembleState& state) {
  const int d = state.f.dim();
  if (u.rows() != d || u.cols() != d)
    throw std::invalid_argument("unitary dimension does not match the atoms");
  EnsembleState out = state;
  const long dim = state.amps.size();
  for (int site = 0; site < state.n_atoms; ++site) {
    const long stride = site_stride(site, state.n_atoms, d);
    Eigen::VectorXcd next = Eigen::VectorXcd::Zero(dim);
    for (long i = 0; i < dim; ++i) {
      const int a = site_digit(i, site, state.n_atoms, d);
      for (int b = 0; b < d; ++b)
        next(i + (b - a) * stride) += u(b, a) * out.amps(i);
    }
    out.amps.swap(next);
  }
  return out;
}

complexd collective_expectation(const Eigen::MatrixXcd& single_op,
                                const EnsembleState& state) {
  return state.amps.dot(apply_collective(single_op, state));
}

double collective_variance(const Eigen::MatrixXcd& single_op,
                           const EnsembleState& state) {
  const Eigen::VectorXcd v = apply_collective(single_op, state);
  const complexd mean = state.amps.dot(v);
  return v.squaredNorm() - std::norm(mean);
}

complexd product_overlap(const EnsembleState& state,
                         const std::vector<SpinState>& sites) {
  if (static_cast<int>(sites.size()) != state.n_atoms)
    throw std::invalid_argument("need one reference state per atom");
  const int d = state.f.dim();
  complexd acc = 0.0;
  for (long i = 0; i < state.amps.size(); ++i) {
    complexd w = 1.0;
    for (int site = 0; site < state.n_atoms; ++site)
      w *= std::conj(sites[site].amps(site_digit(i, site, state.n_atoms, d)));
    acc += w * state.amps(i);
  }
  return acc;
}

EnsembleState gaussian_kraus_measure(const EnsembleState& state, double xi,
                                     double outcome) {
  if (xi < 0.0) throw std::invalid_argument("xi must be nonnegative");
  EnsembleState out = state;
  if (xi == 0.0) {
    out.amps.normalize();
    return out;
  }
  const SpinOperators ops = spin_operators(state.f);
  const double var_in = collective_variance(ops.fz, state);
  const double sigma2 = var_in / xi;  // shot-noise variance of the meter
  const int d = state.f.dim();
  const double fv = state.f.f();
  for (long i = 0; i < out.amps.size(); ++i) {
    double mz = 0.0;
    for (int site = 0; site < state.n_atoms; ++site)
      mz += fv - site_digit(i, site, state.n_atoms, d);
    const double dev = outcome - mz;
    out.amps(i) *= std::exp(-dev * dev / (4.0 * sigma2));
  }
  const double nrm = out.amps.norm();
  if (nrm < 1e-300) throw std::runtime_error("measurement weight underflow");
  out.amps /= nrm;
  return out;
}

double exact_zeta(const EnsembleState& state) {
  const SpinOperators ops = spin_operators(state.f);
  const Eigen::VectorXcd vx = apply_collective(ops.fx, state);
  const Eigen::VectorXcd vy = apply_collective(ops.fy, state);
  const Eigen::VectorXcd vz = apply_collective(ops.fz, state);
  const double mean_x = state.amps.dot(vx).real();
  if (std::abs(mean_x) < 1e-12)
    throw std::invalid_argument("zero mean spin, zeta undefined");
  const double my = state.amps.dot(vy).real();
  const double mz = state.amps.dot(vz).real();
  const double cyy = vy.squaredNorm() - my * my;
  const double czz = vz.squaredNorm() - mz * mz;
  const double cyz = vy.dot(vz).real() - my * mz;
  // smallest quadrature variance in the transverse plane
  const double tr = cyy + czz;
  const double det = cyy * czz - cyz * cyz;
  const double lam_min = 0.5 * (tr - std::sqrt(std::max(tr * tr - 4.0 * det, 0.0)));
  return 2.0 * state.f.f() * state.n_atoms * lam_min / (mean_x * mean_x);
}

double channel_trace_error(const PumpingRates& rates, ThirdStatePolicy policy,
                           double dt, int steps) {
  // levels: 0 up, 1 down, 2 third, 3 lost
  using M4 = Eigen::Matrix4cd;
  auto lower = [](int to, int from, double rate) {
    M4 l = M4::Zero();
    l(to, from) = std::sqrt(rate);
    return l;
  };
  std::vector<M4> jumps;
  jumps.push_back(lower(1, 0, rates.flip));
  for (int k = 0; k < 3; ++k) jumps.push_back(lower(3, k, rates.loss));
  if (policy == ThirdStatePolicy::RETAIN)
    jumps.push_back(lower(2, 1, rates.chain));

  M4 rho = M4::Zero();
  rho(0, 0) = 1.0;
  double worst = 0.0;
  for (int s = 0; s < steps; ++s) {
    M4 drho = M4::Zero();
    for (const M4& l : jumps) {
      const M4 ll = l.adjoint() * l;
      drho += l * rho * l.adjoint() - 0.5 * (ll * rho + rho * ll);
    }
    rho += dt * drho;
    worst = std::max(worst, std::abs(rho.trace().real() - 1.0) +
                                std::abs(rho.trace().imag()));
  }
  return worst;
}

}  // namespace qsq
