#include "quditsqueeze/spin_algebra.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace qsq {

namespace {

constexpr double kOrthoTol = 1e-10;

void check_normalized(const SpinState& s) {
  if (std::abs(s.amps.squaredNorm() - 1.0) > 1e-10)
    throw std::invalid_argument("spin state is not normalized");
}

// m value stored at amplitude index i
double m_of_index(SpinQuantum f, int i) { return f.f() - i; }

}  // namespace

SpinQuantum::SpinQuantum(double f) {
  twice_f = static_cast<int>(std::lround(2.0 * f));
  if (std::abs(2.0 * f - twice_f) > 1e-9 || twice_f < 1)
    throw std::invalid_argument("spin quantum number must be a half-integer >= 1/2");
}

SpinQuantum SpinQuantum::from_twice(int twice_f) {
  if (twice_f < 1)
    throw std::invalid_argument("spin quantum number must be a half-integer >= 1/2");
  SpinQuantum q{0.5 * twice_f};
  return q;
}

SpinOperators spin_operators(SpinQuantum f) {
  const int d = f.dim();
  const double fv = f.f();
  Eigen::MatrixXcd fp = Eigen::MatrixXcd::Zero(d, d);
  Eigen::MatrixXcd fz = Eigen::MatrixXcd::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    const double m = m_of_index(f, i);
    fz(i, i) = m;
    if (i > 0)  // raising m -> m+1 lands one index earlier
      fp(i - 1, i) = std::sqrt(fv * (fv + 1.0) - m * (m + 1.0));
  }
  const Eigen::MatrixXcd fm = fp.adjoint();
  SpinOperators ops{f, {}, {}, {}};
  ops.fx = 0.5 * (fp + fm);
  ops.fy = complexd(0.0, -0.5) * (fp - fm);
  ops.fz = fz;
  return ops;
}

std::string to_string(Prep p) {
  switch (p) {
    case Prep::SCS: return "scs";
    case Prep::CAT: return "cat";
    case Prep::ZERO_X: return "zero_x";
    case Prep::YURKE: return "yurke";
  }
  throw std::logic_error("unreachable");
}

Prep prep_from_string(const std::string& name) {
  std::string s = name;
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (s == "scs") return Prep::SCS;
  if (s == "cat") return Prep::CAT;
  if (s == "zero_x" || s == "0_x" || s == "0x") return Prep::ZERO_X;
  if (s == "yurke") return Prep::YURKE;
  throw std::invalid_argument("unknown preparation '" + name +
                              "' (expected scs, cat, zero_x or yurke)");
}

SpinState x_basis_state(SpinQuantum f, double m) {
  const int i = static_cast<int>(std::lround(f.f() - m));
  if (std::abs(f.f() - m - i) > 1e-9 || i < 0 || i >= f.dim())
    throw std::invalid_argument("m is not a magnetic sublevel of this spin");
  // exp(-i (pi/2) fy) applied to |f, m_z = m>, via the eigendecomposition of fy
  const SpinOperators ops = spin_operators(f);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(ops.fy);
  Eigen::VectorXcd phases(f.dim());
  for (int k = 0; k < f.dim(); ++k)
    phases(k) = std::exp(complexd(0.0, -std::numbers::pi / 2.0) * es.eigenvalues()(k));
  const Eigen::VectorXcd amps =
      es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint() *
      Eigen::VectorXcd::Unit(f.dim(), i);
  return SpinState{f, amps};
}

SpinState prepare_fiducial(Prep kind, SpinQuantum f, std::optional<double> alpha) {
  const int d = f.dim();
  switch (kind) {
    case Prep::SCS:
      return x_basis_state(f, f.f());
    case Prep::CAT: {
      Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(d);
      amps(0) = amps(d - 1) = 1.0 / std::numbers::sqrt2;
      return SpinState{f, amps};
    }
    case Prep::ZERO_X:
      if (!f.integer())
        throw std::invalid_argument("the m_x = 0 preparation needs integer f");
      return x_basis_state(f, 0.0);
    case Prep::YURKE: {
      if (!f.integer() || f.twice_f < 2)
        throw std::invalid_argument("the Yurke preparation needs integer f >= 1");
      if (!alpha)
        throw std::invalid_argument("the Yurke preparation needs an angle");
      Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(d);
      const int i0 = f.twice_f / 2;  // index of m_z = 0
      amps(i0 - 1) = std::sin(*alpha) / std::numbers::sqrt2;  // m_z = +1
      amps(i0) = std::cos(*alpha);
      amps(i0 + 1) = std::sin(*alpha) / std::numbers::sqrt2;  // m_z = -1
      return SpinState{f, amps};
    }
  }
  throw std::logic_error("unreachable");
}

complexd expectation(const Eigen::MatrixXcd& op, const SpinState& s) {
  check_normalized(s);
  return s.amps.dot(op * s.amps);
}

double variance_fz(const SpinState& s) {
  check_normalized(s);
  const double fv = s.f.f();
  double ex = 0.0, ex2 = 0.0;
  for (int i = 0; i < s.f.dim(); ++i) {
    const double m = fv - i;
    const double w = std::norm(s.amps(i));
    ex += w * m;
    ex2 += w * m * m;
  }
  return ex2 - ex * ex;
}

EmbeddedTriple coupled_state(const SpinState& up) {
  check_normalized(up);
  const SpinOperators ops = spin_operators(up.f);
  if (std::abs(expectation(ops.fz, up)) > kOrthoTol)
    throw std::invalid_argument("fiducial state must have <fz> = 0");
  const Eigen::VectorXcd v = ops.fz * up.amps;
  const double c = v.norm();
  if (c < 1e-12)
    throw std::invalid_argument("fz annihilates this state, no coupled partner");
  // <down|fz|up> = ||fz up|| > 0 with this choice, no extra phase needed
  return EmbeddedTriple{up, SpinState{up.f, v / c}, std::nullopt, c};
}

EmbeddedTriple third_state(EmbeddedTriple triple) {
  const SpinOperators ops = spin_operators(triple.up.f);
  Eigen::VectorXcd w = ops.fz * triple.down.amps;
  w -= triple.up.amps * triple.up.amps.dot(w);
  w -= triple.down.amps * triple.down.amps.dot(w);
  const double n = w.norm();
  if (n >= 1e-10)
    triple.third = SpinState{triple.up.f, w / n};
  return triple;
}

bool has_third_state(Prep prep, SpinQuantum f) {
  if (prep == Prep::CAT) return false;
  if ((prep == Prep::ZERO_X || prep == Prep::YURKE) && !f.integer()) return false;
  const SpinState up = prepare_fiducial(prep, f, prep == Prep::YURKE
                                                    ? std::optional<double>(0.0)
                                                    : std::nullopt);
  return third_state(coupled_state(up)).third.has_value();
}

namespace {

// Deterministic unitary completion: the triple's columns first, then
// Gram-Schmidt remainders of the z basis in order.
Eigen::MatrixXcd complete_basis(const std::vector<Eigen::VectorXcd>& span, int d) {
  Eigen::MatrixXcd basis(d, d);
  int cols = 0;
  for (const auto& v : span) basis.col(cols++) = v;
  for (int j = 0; j < d && cols < d; ++j) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Unit(d, j);
    for (int k = 0; k < cols; ++k) v -= basis.col(k) * basis.col(k).dot(v);
    const double n = v.norm();
    if (n > 1e-6) basis.col(cols++) = v / n;
  }
  if (cols != d) throw std::runtime_error("basis completion failed");
  return basis;
}

void check_triple(const EmbeddedTriple& t) {
  check_normalized(t.up);
  check_normalized(t.down);
  if (std::abs(t.up.amps.dot(t.down.amps)) > kOrthoTol)
    throw std::invalid_argument("triple states are not orthonormal");
  if (t.third) {
    check_normalized(*t.third);
    if (std::abs(t.up.amps.dot(t.third->amps)) > kOrthoTol ||
        std::abs(t.down.amps.dot(t.third->amps)) > kOrthoTol)
      throw std::invalid_argument("triple states are not orthonormal");
  }
}

}  // namespace

Eigen::MatrixXcd embedded_map(const EmbeddedTriple& source,
                              const EmbeddedTriple& target) {
  if (source.up.f.twice_f != target.up.f.twice_f)
    throw std::invalid_argument("embedded map needs matching spin dimensions");
  check_triple(source);
  check_triple(target);
  const bool use_third = source.third.has_value();
  if (use_third && !target.third)
    throw std::invalid_argument("source carries a third state but target does not");

  const int d = source.up.f.dim();
  std::vector<Eigen::VectorXcd> s_span{source.up.amps, source.down.amps};
  std::vector<Eigen::VectorXcd> t_span{target.up.amps, target.down.amps};
  if (use_third) {
    s_span.push_back(source.third->amps);
    t_span.push_back(target.third->amps);
  }
  const Eigen::MatrixXcd S = complete_basis(s_span, d);
  const Eigen::MatrixXcd T = complete_basis(t_span, d);
  return T * S.adjoint();
}

double yurke_internal_zeta(SpinQuantum f, double alpha) {
  if (!f.integer())
    throw std::invalid_argument("the Yurke factor needs integer f");
  const double c = std::cos(alpha);
  if (std::abs(c) < 1e-12)
    throw std::invalid_argument("Yurke factor diverges at alpha = pi/2");
  return 1.0 / ((1.0 + f.f()) * c * c);
}

}  // namespace qsq
