#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bgmac/gaussian.hpp"
#include "test_support.hpp"

#include <cmath>
#include <random>

using namespace bgmac;

TEST_CASE("thermal entropy identities") {
  CHECK(thermal_entropy(0.0) == 0.0);
  CHECK(thermal_entropy(1.0) == doctest::Approx(2.0).epsilon(1e-15));
  // direct evaluation of (x+1)log2(x+1) - x log2 x at x = 0.1
  CHECK(thermal_entropy(0.1) == doctest::Approx(0.483446685614).epsilon(1e-10));
  CHECK(thermal_entropy(0.5) == doctest::Approx(1.377443751082).epsilon(1e-10));
  CHECK(thermal_entropy(-1e-12) == 0.0);  // tiny negatives clamp
  CHECK_THROWS_AS(thermal_entropy(-1e-6), std::domain_error);
}

TEST_CASE("symplectic eigenvalues of basic states") {
  CHECK(symplectic_eigenvalues(thermal_cm(0.5, 1))[0] == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(symplectic_eigenvalues(CovarianceMatrix::vacuum(1))[0] == doctest::Approx(1.0));
  const auto nu = symplectic_eigenvalues(tmsv_cm(1.0));
  REQUIRE(nu.size() == 2);
  CHECK(nu[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(nu[1] == doctest::Approx(1.0).epsilon(1e-12));

  Eigen::Matrix2d bad;
  bad << 0.5, 0.0, 0.0, 0.5;  // below the vacuum limit
  CHECK_THROWS_AS(symplectic_eigenvalues(CovarianceMatrix(bad)), unphysical_error);
  CHECK_FALSE(is_physical(CovarianceMatrix(bad)));

  Eigen::Matrix2d asym;
  asym << 1.0, 0.5, -0.5, 1.0;
  CHECK_THROWS_AS(CovarianceMatrix{Eigen::MatrixXd(asym)}, std::invalid_argument);
}

TEST_CASE("entropies of thermal and TMSV states") {
  CHECK(von_neumann_entropy(thermal_cm(0.5, 1)) ==
        doctest::Approx(thermal_entropy(0.5)).epsilon(1e-12));
  CHECK(von_neumann_entropy(tmsv_cm(1.0)) == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(von_neumann_entropy(subsystem_cm(tmsv_cm(1.0), {0})) ==
        doctest::Approx(2.0).epsilon(1e-12));
  CHECK(von_neumann_entropy(CovarianceMatrix()) == 0.0);
}

TEST_CASE("tmsv construction") {
  CHECK((tmsv_cm(0.0).matrix() - Eigen::Matrix4d::Identity()).cwiseAbs().maxCoeff() <= 1e-15);
  const auto v = tmsv_cm(1.0);
  CHECK(v.matrix()(0, 0) == doctest::Approx(3.0));
  CHECK(v.matrix()(0, 2) == doctest::Approx(2.0 * std::sqrt(2.0)));
  CHECK(v.matrix()(1, 3) == doctest::Approx(-2.0 * std::sqrt(2.0)));
  CHECK(mean_photon(v, 0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(mean_photon(v, 1) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(tmsv_cm(-0.1), std::invalid_argument);

  // purity across the brightness range
  for (double ns : {0.0, 1e-3, 0.3, 7.0, 100.0}) {
    for (double nu : symplectic_eigenvalues(tmsv_cm(ns))) {
      CHECK(std::abs(nu - 1.0) <= 1e-9);
    }
  }
}

TEST_CASE("thermal cm and mean photon accounting") {
  CHECK((thermal_cm(0.0, 2).matrix() - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() ==
        0.0);
  CHECK(thermal_cm(0.1, 1).matrix()(0, 0) == doctest::Approx(1.2));
  CHECK(von_neumann_entropy(thermal_cm(0.3, 3)) ==
        doctest::Approx(3.0 * thermal_entropy(0.3)).epsilon(1e-12));
  CHECK(mean_photon(thermal_cm(0.7, 2), 1) == doctest::Approx(0.7).epsilon(1e-14));
  CHECK(mean_photon(CovarianceMatrix::vacuum(1), 0) == doctest::Approx(0.0));
  CHECK_THROWS_AS(thermal_cm(-0.5, 1), std::invalid_argument);
}

TEST_CASE("squeezer, phase rotation and beamsplitter are symplectic") {
  CHECK((squeezer(0.0, 0.7).mat - phase_rotation(0.7).mat).cwiseAbs().maxCoeff() <= 1e-15);
  CHECK((phase_rotation(0.0).mat - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(is_symplectic(squeezer(0.8, 1.1)));
  CHECK(is_symplectic(phase_rotation(2.3)));

  const auto bs = beamsplitter_array({std::sqrt(1.0 / 3.0), std::sqrt(2.0 / 3.0)});
  const Eigen::MatrixXd w = bs.mat * symplectic_form(2) * bs.mat.transpose();
  CHECK((w - symplectic_form(1)).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK_THROWS_AS(beamsplitter_array({1.0, 1.0}), std::invalid_argument);

  // squeezer convention: x -> exp(-r) x, p -> exp(r) p
  const auto s = squeezer(0.4, 0.0);
  CHECK(s.mat(0, 0) == doctest::Approx(std::exp(-0.4)));
  CHECK(s.mat(1, 1) == doctest::Approx(std::exp(0.4)));
}

TEST_CASE("random symplectics preserve the form and the entropy") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const int modes = 1 + trial % 4;
    const auto t = testsupport::random_symplectic(rng, modes, 1.0);
    const Eigen::MatrixXd w = symplectic_form(modes);
    CHECK((t.mat * w * t.mat.transpose() - w).cwiseAbs().maxCoeff() <= 1e-10);

    const auto v = testsupport::random_pure_cm(rng, modes, 0.8);
    const auto mixed = direct_sum(v, thermal_cm(0.4, 0 + 1));
    const auto big = testsupport::random_symplectic(rng, modes + 1, 0.7);
    const double before = von_neumann_entropy(mixed);
    const double after = von_neumann_entropy(apply_transform(big, mixed));
    CHECK(std::abs(before - after) <= 1e-9);
  }
}

TEST_CASE("entropy additivity under direct sums") {
  std::mt19937 rng(11);
  const auto a = testsupport::random_pure_cm(rng, 2, 0.9);
  const auto b = thermal_cm(0.25, 1);
  const auto mixed_a = subsystem_cm(a, {0});  // generally mixed reduction
  CHECK(von_neumann_entropy(direct_sum(mixed_a, b)) ==
        doctest::Approx(von_neumann_entropy(mixed_a) + von_neumann_entropy(b)).epsilon(1e-10));
}

TEST_CASE("apply_transform edge cases") {
  const auto v = tmsv_cm(0.7);
  const SymplecticTransform id(Eigen::MatrixXd::Identity(4, 4));
  CHECK((apply_transform(id, v).matrix() - v.matrix()).cwiseAbs().maxCoeff() == 0.0);

  // discarding the idler of a TMSV leaves a thermal state
  Eigen::MatrixXd keep = Eigen::MatrixXd::Zero(2, 4);
  keep.block<2, 2>(0, 0) = Eigen::Matrix2d::Identity();
  const auto reduced = apply_transform(SymplecticTransform(keep), v);
  CHECK((reduced.matrix() - thermal_cm(0.7, 1).matrix()).cwiseAbs().maxCoeff() <= 1e-12);

  CHECK_THROWS_AS(apply_transform(SymplecticTransform(Eigen::MatrixXd::Identity(2, 2)), v),
                  std::invalid_argument);
}

TEST_CASE("squeezed TMSV mean photon follows cosh(2r) N + sinh^2 r") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int trial = 0; trial < 25; ++trial) {
    const double n_source = 3.0 * uni(rng);
    const double r = 1.5 * (uni(rng) - 0.5);
    const double theta = 2.0 * M_PI * uni(rng);
    const auto local = direct_sum(squeezer(r, theta),
                                  SymplecticTransform(Eigen::MatrixXd::Identity(2, 2)));
    const auto out = apply_transform(local, tmsv_cm(n_source));
    const double expected = std::cosh(2.0 * r) * n_source + std::sinh(r) * std::sinh(r);
    CHECK(mean_photon(out, 0) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(mean_photon(out, 1) == doctest::Approx(n_source).epsilon(1e-12));
  }
}

TEST_CASE("single-mode purification") {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto big = testsupport::random_pure_cm(rng, 2, 1.0);
    const Eigen::Matrix2d reduced = big.matrix().block<2, 2>(0, 0);
    const auto pure = purify_single_mode(reduced);
    CHECK(is_physical(pure));
    for (double nu : symplectic_eigenvalues(pure)) CHECK(std::abs(nu - 1.0) <= 1e-8);
    CHECK((subsystem_cm(pure, {0}).matrix() - reduced).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("mode layout lookups") {
  const auto in = ModeLayout::ea_input(2);
  CHECK(in.modes() == 4);
  CHECK(in.index_of("A1") == 0);
  CHECK(in.index_of("A2'") == 3);
  const auto out = ModeLayout::ea_output(2);
  CHECK(out.index_of("B") == 0);
  CHECK_THROWS_AS(out.index_of("E"), std::out_of_range);
  CHECK_THROWS_AS(ModeLayout({"a", "a"}), std::invalid_argument);
}
