#include <doctest.h>

#include <cmath>

#include "entkit/povm.hpp"

using namespace entkit;

namespace {

double max_abs_diff(const CMatrix& a, const CMatrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

CMatrix element_sum(const Povm& m) {
  CMatrix s = CMatrix::Zero(m.dim(), m.dim());
  for (const auto& e : m.elements()) s += e;
  return s;
}

// Product-basis measurement after the fixed local rotation U ⊗ Ū.
Povm rotated_basis_povm(int d, const CMatrix& u) {
  const CMatrix w = kron(u, u.conjugate());
  std::vector<CMatrix> elems;
  for (int x = 0; x < d; ++x)
    for (int y = 0; y < d; ++y) elems.push_back(w * product_basis_state({d, d}, {x, y}).matrix() * w.adjoint());
  return Povm({d, d}, std::move(elems), MeasurementClass::LO);
}

}  // namespace

TEST_CASE("povm validation") {
  CMatrix half = CMatrix::Identity(2, 2) / 2.0;
  CHECK_THROWS_AS(Povm({2}, {half}, MeasurementClass::Generic), InvariantError);
  CMatrix neg = CMatrix::Zero(2, 2);
  neg(0, 0) = 1.5;
  neg(1, 1) = 1.0;
  CMatrix comp = CMatrix::Identity(2, 2) - neg;
  CHECK_THROWS_AS(Povm({2}, {neg, comp}, MeasurementClass::Generic), InvariantError);
  CHECK_NOTHROW(Povm({2}, {half, half}, MeasurementClass::Generic));
  CHECK(measurement_class_from_string("ONE_LOCC") == MeasurementClass::OneWayLocc);
  CHECK(to_string(MeasurementClass::PPT) == "PPT");
  CHECK_THROWS_AS(measurement_class_from_string("SEP"), ParseError);
}

TEST_CASE("apply_povm") {
  const ProbDist u = apply_povm(computational_basis_povm({3}), maximally_mixed({3}));
  for (std::size_t i = 0; i < 3; ++i) CHECK(u[i] == doctest::Approx(1.0 / 3.0));

  for (int d = 2; d <= 5; ++d) {
    const Povm m = iso_two_outcome_povm(d);
    const ProbDist on_phi = apply_povm(m, max_entangled(d));
    CHECK(on_phi[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(on_phi[1]) < 1e-12);
    const ProbDist on_sep = apply_povm(m, isotropic(d, 1.0 / (d + 1)));
    CHECK(on_sep[0] == doctest::Approx(2.0 / (d + 1)).epsilon(1e-12));
    CHECK(on_sep[1] == doctest::Approx((d - 1.0) / (d + 1)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(apply_povm(computational_basis_povm({3}), maximally_mixed({2})), ShapeError);

  Rng rng(1);
  for (int i = 0; i < 50; ++i) {
    const Povm m = onelocc_to_povm(random_onelocc_povm(2, 3, 3, 2, derive_seed(1, i)));
    const ProbDist p = apply_povm(m, random_density({2, 3}, 1 + i % 6, rng));
    double s = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) {
      CHECK(p[k] >= -1e-12);
      s += p[k];
    }
    CHECK(std::abs(s - 1.0) < 1e-9);
  }
}

TEST_CASE("measured relative entropy") {
  for (int d = 2; d <= 6; ++d) {
    const double expected = std::log2(d + 1.0) - 1.0;
    const DensityMatrix sep = isotropic(d, 1.0 / (d + 1));
    CHECK(measured_rel_entropy(twirl_basis_povm(d), max_entangled(d), sep).value() ==
          doctest::Approx(expected).epsilon(1e-10));
    CHECK(measured_rel_entropy(iso_two_outcome_povm(d), max_entangled(d), sep).value() ==
          doctest::Approx(expected).epsilon(1e-10));
  }
  Rng rng(2);
  const DensityMatrix rho = random_density({2, 2}, 4, rng);
  CHECK(std::abs(measured_rel_entropy(computational_basis_povm({2, 2}), rho, rho).value()) < 1e-12);
  const Povm trivial({2, 2}, {CMatrix::Identity(4, 4)}, MeasurementClass::LO);
  CHECK(measured_rel_entropy(trivial, rho, random_density({2, 2}, 4, rng)).value() == 0.0);
}

TEST_CASE("measured distance") {
  const std::vector<Povm> basis{computational_basis_povm({2})};
  CHECK(measured_distance(basis, product_basis_state({2}, {0}), maximally_mixed({2})) ==
        doctest::Approx(1.0));
  CHECK_THROWS_AS(measured_distance({}, maximally_mixed({2}), maximally_mixed({2})), DomainError);
  Rng rng(3);
  std::vector<Povm> family{computational_basis_povm({2, 2}), twirl_basis_povm(2), iso_two_outcome_povm(2)};
  for (int i = 0; i < 4; ++i) family.push_back(onelocc_to_povm(random_onelocc_povm(2, 2, 2, 2, derive_seed(3, i))));
  for (int i = 0; i < 30; ++i) {
    const DensityMatrix rho = random_density({2, 2}, 4, rng);
    const DensityMatrix sigma = random_density({2, 2}, 2, rng);
    CHECK(measured_distance(family, rho, rho) == 0.0);
    CHECK(measured_distance(family, rho, sigma) <= trace_norm(rho.matrix() - sigma.matrix()) + 1e-9);
  }
}

TEST_CASE("twirl") {
  for (int d = 2; d <= 4; ++d) {
    const CMatrix phi = max_entangled(d).matrix();
    CHECK(max_abs_diff(uu_bar_twirl(phi, d), phi) < 1e-14);
    const CMatrix tau = maximally_mixed({d, d}).matrix();
    CHECK(max_abs_diff(uu_bar_twirl(tau, d), tau) < 1e-14);
  }
  const CMatrix t00 = uu_bar_twirl(product_basis_state({2, 2}, {0, 0}).matrix(), 2);
  CHECK(max_abs_diff(t00, isotropic(2, 1.0 / 3.0).matrix()) < 1e-14);

  Rng rng(4);
  for (int i = 0; i < 20; ++i) {
    const CMatrix a = random_density({3, 3}, 9, rng).matrix();
    const CMatrix b = random_density({3, 3}, 2, rng).matrix();
    const CMatrix ta = uu_bar_twirl(a, 3);
    CHECK(max_abs_diff(uu_bar_twirl(ta, 3), ta) < 1e-12);
    CHECK(std::abs(ta.trace().real() - 1.0) < 1e-12);
    CHECK(max_abs_diff(uu_bar_twirl(0.3 * a + 0.7 * b, 3), 0.3 * ta + 0.7 * uu_bar_twirl(b, 3)) < 1e-12);
    // Twirled state is isotropic: commutes with every U ⊗ Ū.
    const CMatrix u = random_unitary(3, rng);
    const CMatrix w = kron(u, u.conjugate());
    CHECK(max_abs_diff(w * ta * w.adjoint(), ta) < 1e-12);
  }
  CHECK_THROWS_AS(uu_bar_twirl(CMatrix::Identity(6, 6), 2), ShapeError);
}

TEST_CASE("isotropic two-outcome povm") {
  for (int d = 2; d <= 6; ++d) {
    const Povm m = iso_two_outcome_povm(d);
    CHECK(m.tag() == MeasurementClass::PPT);
    CHECK(max_abs_diff(element_sum(m), CMatrix::Identity(d * d, d * d)) == 0.0);
    CHECK(is_ppt_povm(m));
  }
  CHECK(std::abs(min_pt_eigenvalue(iso_two_outcome_povm(2).elements()[0], {2, 2}, 1)) < 1e-12);
  CHECK_FALSE(is_ppt_povm(isotropic_two_outcome(2, 1.0, 0.0)));
  CHECK_THROWS_AS(iso_two_outcome_povm(1), DomainError);
}

TEST_CASE("one-way LOCC povms") {
  const Povm basis = onelocc_to_povm(product_basis_onelocc(2, 3));
  CHECK(basis.size() == 6);
  CHECK(basis.tag() == MeasurementClass::OneWayLocc);
  for (const auto& e : basis.elements()) CHECK(herm_eig(e).values(1) == doctest::Approx(0.0));

  std::vector<std::vector<CMatrix>> bob{{CMatrix::Zero(2, 2), CMatrix::Zero(2, 2)}};
  bob[0][0](0, 0) = 1.0;
  bob[0][1](1, 1) = 1.0;
  const Povm local_b = onelocc_to_povm(OneWayLoccPovm(2, 2, {CMatrix::Identity(2, 2)}, bob));
  CHECK(max_abs_diff(local_b.elements()[0], kron(CMatrix::Identity(2, 2), bob[0][0])) == 0.0);

  for (int i = 0; i < 25; ++i) {
    const OneWayLoccPovm m = random_onelocc_povm(2 + i % 2, 2, 1 + i % 3, 1 + i % 4, derive_seed(9, i));
    const Povm full = onelocc_to_povm(m);
    CHECK(max_abs_diff(element_sum(full), CMatrix::Identity(full.dim(), full.dim())) < 1e-10);
    for (const auto& e : full.elements()) CHECK(herm_eig(e).values.minCoeff() >= -tol::psd);
  }
  const OneWayLoccPovm a = random_onelocc_povm(2, 2, 2, 3, 77);
  const OneWayLoccPovm b = random_onelocc_povm(2, 2, 2, 3, 77);
  CHECK(max_abs_diff(a.bob()[1][2], b.bob()[1][2]) == 0.0);
  CHECK_THROWS_AS(random_onelocc_povm(2, 2, 0, 2, 1), DomainError);

  CMatrix bad = CMatrix::Identity(2, 2) * 0.9;
  CHECK_THROWS_AS(OneWayLoccPovm(2, 2, {bad}, bob), InvariantError);
}

TEST_CASE("twirl-then-measure against per-unitary measurements") {
  Rng rng(10);
  const int d = 2;
  const DensityMatrix phi = max_entangled(d);
  const DensityMatrix sep = isotropic(d, 1.0 / (d + 1));
  const double det = measured_rel_entropy(twirl_basis_povm(d), phi, sep).value();
  double avg = 0.0;
  for (int i = 0; i < 100; ++i) avg += measured_rel_entropy(rotated_basis_povm(d, random_unitary(d, rng)), phi, sep).value();
  avg /= 100.0;
  CHECK(std::abs(det - avg) <= 0.02);

  // Non-invariant inputs: the twirled measurement is the average of the
  // rotated ones, so joint convexity puts it below the per-unitary mean.
  for (int trial = 0; trial < 5; ++trial) {
    const DensityMatrix rho = random_density({d, d}, 4, rng);
    const DensityMatrix sigma = random_density({d, d}, 4, rng);
    const double twirled = measured_rel_entropy(twirl_basis_povm(d), rho, sigma).value();
    double mean = 0.0;
    for (int i = 0; i < 100; ++i) mean += measured_rel_entropy(rotated_basis_povm(d, random_unitary(d, rng)), rho, sigma).value();
    mean /= 100.0;
    CHECK(twirled <= mean + 0.02);
  }
}
