#include <doctest.h>

#include <cmath>
#include <vector>

#include "quditsqueeze/errors.hpp"
#include "quditsqueeze/oracle_exact.hpp"

using namespace qsq;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;

TEST_CASE("product states and overlaps") {
  const SpinState cat = prepare_fiducial(Prep::CAT, SpinQuantum(1.0));
  const EnsembleState psi = product_state(cat, 3);
  CHECK(psi.amps.size() == 27);
  CHECK(psi.amps.norm() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(product_overlap(psi, {cat, cat, cat}) - complexd(1.0, 0.0)) <
        1e-14);

  // site 0 is the slowest index
  VectorXcd probe = VectorXcd::Zero(3);
  probe(0) = 1.0;  // |m = 1>
  const SpinState up_z{SpinQuantum(1.0), probe};
  const complexd a = product_overlap(psi, {up_z, up_z, up_z});
  CHECK(std::abs(a - complexd(std::pow(0.5, 1.5), 0.0)) < 1e-14);
}

TEST_CASE("collective operators") {
  const SpinOperators half = spin_operators(SpinQuantum(0.5));
  const MatrixXcd fz2 = collective_operator(half.fz, 2);
  REQUIRE(fz2.rows() == 4);
  CHECK(std::abs(fz2(0, 0) - complexd(1.0, 0.0)) < 1e-15);
  CHECK(std::abs(fz2(1, 1)) < 1e-15);
  CHECK(std::abs(fz2(2, 2)) < 1e-15);
  CHECK(std::abs(fz2(3, 3) - complexd(-1.0, 0.0)) < 1e-15);
  CHECK(fz2.cwiseAbs().sum() == doctest::Approx(2.0).epsilon(1e-14));  // diagonal

  // matrix-free application agrees with the materialized operator
  const SpinOperators one = spin_operators(SpinQuantum(1.0));
  const EnsembleState s = product_state(prepare_fiducial(Prep::ZERO_X, SpinQuantum(1.0)), 2);
  const MatrixXcd fx2 = collective_operator(one.fx, 2);
  CHECK((fx2 * s.amps - apply_collective(one.fx, s)).norm() < 1e-13);
}

TEST_CASE("collective moments of product states") {
  const SpinQuantum f2(2.0);
  const SpinOperators ops = spin_operators(f2);
  for (Prep prep : {Prep::SCS, Prep::CAT, Prep::ZERO_X}) {
    const SpinState single = prepare_fiducial(prep, f2);
    const EnsembleState psi = product_state(single, 3);
    CHECK(std::abs(collective_expectation(ops.fz, psi)) < 1e-12);
    CHECK(collective_variance(ops.fz, psi) ==
          doctest::Approx(3.0 * variance_fz(single)).epsilon(1e-12));
  }
}

TEST_CASE("local unitaries act site by site") {
  const SpinQuantum f1(1.0);
  const EmbeddedTriple cat_t = coupled_state(prepare_fiducial(Prep::CAT, f1));
  const EmbeddedTriple scs_t = third_state(coupled_state(prepare_fiducial(Prep::SCS, f1)));
  const MatrixXcd u = embedded_map(cat_t, scs_t);
  const EnsembleState mapped =
      apply_local_unitary(u, product_state(cat_t.up, 3));
  const complexd ov = product_overlap(mapped, {scs_t.up, scs_t.up, scs_t.up});
  CHECK(std::abs(ov - complexd(1.0, 0.0)) < 1e-12);
  CHECK(mapped.amps.norm() == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("measurement at zero strength only renormalizes") {
  const EnsembleState psi =
      product_state(prepare_fiducial(Prep::SCS, SpinQuantum(1.0)), 2);
  const EnsembleState out = gaussian_kraus_measure(psi, 0.0, 1.3);
  CHECK((out.amps - psi.amps).norm() < 1e-14);
}

TEST_CASE("measurement pulls the collective spin toward the outcome") {
  const SpinQuantum f1(1.0);
  const SpinOperators ops = spin_operators(f1);
  const EnsembleState psi = product_state(prepare_fiducial(Prep::SCS, f1), 2);
  const EnsembleState out = gaussian_kraus_measure(psi, 0.5, 0.8);
  CHECK(out.amps.norm() == doctest::Approx(1.0).epsilon(1e-12));
  const double mean = collective_expectation(ops.fz, out).real();
  CHECK(mean > 0.0);
  CHECK(mean < 0.8);
  CHECK(collective_variance(ops.fz, out) < collective_variance(ops.fz, psi));
}

TEST_CASE("few-atom posterior variance from direct enumeration") {
  // cat, f = 1, n = 3: F_z takes values {+-3, +-1} with weights (1,3,3,1)/8.
  // Conditioning on outcome 0 at xi = 1 (sigma^2 = 3) reweights by
  // exp(-M^2/6); the posterior variance follows from the four terms alone.
  const EnsembleState psi =
      product_state(prepare_fiducial(Prep::CAT, SpinQuantum(1.0)), 3);
  const EnsembleState post = gaussian_kraus_measure(psi, 1.0, 0.0);
  const SpinOperators ops = spin_operators(SpinQuantum(1.0));
  const double w3 = std::exp(-1.5), w1 = std::exp(-1.0 / 6.0);
  const double expected = (9.0 * w3 + 3.0 * w1) / (w3 + 3.0 * w1);
  CHECK(collective_variance(ops.fz, post) ==
        doctest::Approx(expected).epsilon(1e-12));
  // the discrete posterior sits visibly above the Gaussian-limit value 3/2
  CHECK(expected > 1.5 + 0.1);
}

TEST_CASE("weak measurement writes pair correlations at order xi") {
  // Parity keeps odd excitation numbers at exactly zero; the pair amplitude
  // relative to the unexcited component is -xi/(2n) to leading order.
  const SpinQuantum f1(1.0);
  const int n = 3;
  const double xi = 0.01;
  const EmbeddedTriple t = coupled_state(prepare_fiducial(Prep::CAT, f1));
  const EnsembleState post =
      gaussian_kraus_measure(product_state(t.up, n), xi, 0.0);

  const complexd a0 = product_overlap(post, {t.up, t.up, t.up});
  const complexd a1 = product_overlap(post, {t.down, t.up, t.up});
  const complexd a2 = product_overlap(post, {t.down, t.down, t.up});
  const complexd a2p = product_overlap(post, {t.down, t.up, t.down});
  const complexd a3 = product_overlap(post, {t.down, t.down, t.down});

  CHECK(std::abs(a1) < 1e-13);
  CHECK(std::abs(a3) < 1e-13);
  CHECK(std::abs(a2 - a2p) < 1e-14);  // permutation symmetric

  const complexd ratio = a2 / a0;
  CHECK(std::abs(ratio.imag()) < 1e-13);
  CHECK(ratio.real() ==
        doctest::Approx(-xi / (2.0 * n)).epsilon(0.05));  // O(xi) corrections
}

TEST_CASE("Wineland parameter of a coherent product state is one") {
  for (int n = 2; n <= 3; ++n) {
    const EnsembleState psi =
        product_state(prepare_fiducial(Prep::SCS, SpinQuantum(2.0)), n);
    CHECK(exact_zeta(psi) == doctest::Approx(1.0).epsilon(1e-8));
  }
}

TEST_CASE("measured and remapped cat beats the projection noise") {
  const SpinQuantum f1(1.0);
  const int n = 3;
  const double xi = 0.05;
  const EmbeddedTriple cat_t = coupled_state(prepare_fiducial(Prep::CAT, f1));
  const EmbeddedTriple scs_t = third_state(coupled_state(prepare_fiducial(Prep::SCS, f1)));

  const EnsembleState post =
      gaussian_kraus_measure(product_state(cat_t.up, n), xi, 0.0);
  const EnsembleState mapped =
      apply_local_unitary(embedded_map(cat_t, scs_t), post);

  const double zeta = exact_zeta(mapped);
  CHECK(zeta < 1.0);
  // agreement band with the Gaussian limit widens as 1/n
  CHECK(std::abs(zeta - 1.0 / (1.0 + xi)) / (1.0 / (1.0 + xi)) <
        0.02 + 1.0 / n);
}

TEST_CASE("single-atom channel conserves trace") {
  const double dt = 1e-3;
  for (Prep prep : {Prep::SCS, Prep::CAT, Prep::ZERO_X}) {
    const PumpingRates r = pumping_rates(prep, SpinQuantum(4.0));
    CHECK(channel_trace_error(r, ThirdStatePolicy::REMOVE, dt, 500) < 1e-10);
    CHECK(channel_trace_error(r, ThirdStatePolicy::RETAIN, dt, 500) < 1e-10);
  }
}

TEST_CASE("size guards refuse runaway problems") {
  const SpinState big = prepare_fiducial(Prep::SCS, SpinQuantum(4.0));
  CHECK_THROWS_AS(product_state(big, 5), GuardError);
  CHECK_THROWS_AS(product_state(big, 0), GuardError);
  CHECK_NOTHROW(product_state(big, 4));  // 9^4 = 6561 amplitudes is fine
  // but materializing a 6561^2 operator is not
  const SpinOperators ops = spin_operators(SpinQuantum(4.0));
  CHECK_THROWS_AS(collective_operator(ops.fz, 4), GuardError);
}
