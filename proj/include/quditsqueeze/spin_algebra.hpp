#pragma once

// Single-atom spin-f algebra: angular momentum matrices, the fiducial state
// preparations, the coupled/third states that span the embedded qubit, and
// the unitary maps between embeddings.
//
// Basis convention: a spin-f ket is stored as a (2f+1)-vector of amplitudes
// ordered m = f, f-1, ..., -f (index 0 is the stretched state m = f).
// X-basis kets are defined by |f,m_x> = exp(-i(pi/2) fy) |f,m_z=m>, which
// keeps every amplitude real for integer f.

#include <Eigen/Dense>

#include <complex>
#include <optional>
#include <string>

namespace qsq {

using complexd = std::complex<double>;

// Spin quantum number, kept as 2f so half-integers stay exact.
struct SpinQuantum {
  int twice_f;

  explicit SpinQuantum(double f);
  static SpinQuantum from_twice(int twice_f);

  double f() const { return 0.5 * twice_f; }
  int dim() const { return twice_f + 1; }
  bool integer() const { return twice_f % 2 == 0; }

  friend bool operator==(const SpinQuantum&, const SpinQuantum&) = default;
};

struct SpinOperators {
  SpinQuantum f;
  Eigen::MatrixXcd fx, fy, fz;
};

// fx, fy, fz from the ladder construction
//   f+|f,m> = sqrt(f(f+1) - m(m+1)) |f,m+1>
// with fz diagonal in the stored basis.
SpinOperators spin_operators(SpinQuantum f);

enum class Prep { SCS, CAT, ZERO_X, YURKE };

std::string to_string(Prep p);
Prep prep_from_string(const std::string& name);

struct SpinState {
  SpinQuantum f;
  Eigen::VectorXcd amps;  // index 0 <-> m = f
};

// |f, m_x = m> in the z basis.
SpinState x_basis_state(SpinQuantum f, double m);

// Fiducial preparations:
//   SCS     |f, m_x = f>
//   CAT     (|f, f>_z + |f,-f>_z)/sqrt(2)
//   ZERO_X  |f, m_x = 0>            (integer f)
//   YURKE   cos(a)|0_z> + sin(a)(|1_z> + |-1_z>)/sqrt(2)   (integer f)
SpinState prepare_fiducial(Prep kind, SpinQuantum f,
                           std::optional<double> alpha = std::nullopt);

complexd expectation(const Eigen::MatrixXcd& op, const SpinState& s);
double variance_fz(const SpinState& s);

// Embedded qubit (plus optional third level) inside the spin-f manifold.
// down = fz|up> / ||fz|up>||, with the phase fixed so <down|fz|up> = c > 0.
// c^2 equals the fz variance of |up>.
struct EmbeddedTriple {
  SpinState up;
  SpinState down;
  std::optional<SpinState> third;
  double c;
};

EmbeddedTriple coupled_state(const SpinState& up);

// Fills in the third level: the component of fz|down> orthogonal to
// span{up, down}, normalized. Left absent when that component vanishes
// (norm < 1e-10), e.g. for the cat preparation at every f.
EmbeddedTriple third_state(EmbeddedTriple triple);

// Whether the given preparation supports a third level at this f.
bool has_third_state(Prep prep, SpinQuantum f);

// Unitary taking source.up -> target.up, source.down -> target.down and,
// when both triples carry one, source.third -> target.third. Completed on
// the orthogonal complement by Gram-Schmidt over the z basis so the result
// is reproducible.
Eigen::MatrixXcd embedded_map(const EmbeddedTriple& source,
                              const EmbeddedTriple& target);

// Single-atom squeezing factor of the Yurke family, (1+f)^-1 cos(alpha)^-2.
double yurke_internal_zeta(SpinQuantum f, double alpha);

}  // namespace qsq
