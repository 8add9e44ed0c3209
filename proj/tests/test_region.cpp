#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bgmac/region.hpp"
#include "test_support.hpp"

#include <cmath>
#include <random>

using namespace bgmac;

namespace {

PhaseInsensitiveBgmac fig4_channel() {
  return interference_bgmac({1.0 / 3.0, 2.0 / 3.0}, {false, 0.1, 0.1});
}

const EnergyBudget kBright{{1.0, 2.0}};
const EnergyBudget kWeak{{1e-3, 2e-3}};

GaussianEncoding random_encoding(std::mt19937& rng, const EnergyBudget& budget, double scale) {
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
  GaussianEncoding enc = GaussianEncoding::tmsv(budget.senders());
  for (int k = 0; k < budget.senders(); ++k) {
    enc.r(k) = scale * uni(rng) * max_squeezing(budget.photons[k]);
    enc.theta(k) = angle(rng);
  }
  return enc;
}

}  // namespace

TEST_CASE("squeezing bound and source brightness") {
  CHECK(max_squeezing(0.0) == doctest::Approx(0.0));
  const double ns = 0.7;
  const double r_star = max_squeezing(ns);
  CHECK(squeezed_tmsv_input_photons(ns, 0.0) == doctest::Approx(ns));
  CHECK(squeezed_tmsv_input_photons(ns, r_star) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(squeezed_tmsv_input_photons(ns, -r_star) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("gaussian input state meets the energy budget") {
  std::mt19937 rng(51);
  SUBCASE("tmsv at zero squeezing") {
    const auto v = gaussian_input_cm(GaussianEncoding::tmsv(2), kBright);
    const auto expected = direct_sum(tmsv_cm(1.0), tmsv_cm(2.0));
    CHECK((v.matrix() - expected.matrix()).cwiseAbs().maxCoeff() <= 1e-12);
  }
  SUBCASE("full squeezing leaves a squeezed vacuum signal") {
    GaussianEncoding enc = GaussianEncoding::tmsv(1);
    enc.r(0) = max_squeezing(0.5);
    const auto v = gaussian_input_cm(enc, EnergyBudget{{0.5}});
    CHECK(mean_photon(v, 0) == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(mean_photon(v, 1) == doctest::Approx(0.0).epsilon(1e-10));  // idler of vacuum source
    for (double nu : symplectic_eigenvalues(v)) CHECK(std::abs(nu - 1.0) <= 1e-9);
  }
  SUBCASE("random encodings") {
    for (int trial = 0; trial < 30; ++trial) {
      const auto enc = random_encoding(rng, kBright, 0.999);
      const auto v = gaussian_input_cm(enc, kBright);
      CHECK(mean_photon(v, 0) == doctest::Approx(1.0).epsilon(1e-10));
      CHECK(mean_photon(v, 2) == doctest::Approx(2.0).epsilon(1e-10));
    }
  }
  SUBCASE("squeezing beyond the bound is rejected") {
    GaussianEncoding enc = GaussianEncoding::tmsv(1);
    enc.r(0) = max_squeezing(0.5) + 1e-3;
    CHECK_THROWS_AS(gaussian_input_cm(enc, EnergyBudget{{0.5}}), std::invalid_argument);
  }
}

TEST_CASE("boundary values at zero squeezing") {
  const auto ch = fig4_channel();
  CHECK(rate_functional(ch, GaussianEncoding::tmsv(2), kBright, SenderSet::empty(2)) == 0.0);
  CHECK(rate_functional(ch, GaussianEncoding::tmsv(2), kBright, SenderSet::universe(2)) ==
        ea_total_rate_capacity(ch, kBright));

  // single sender at zero squeezing reproduces the closed form
  const PointToPointBgc bgc{false, 0.6, 0.2};
  const auto single = PhaseInsensitiveBgmac::from_bgc(bgc);
  CHECK(rate_functional(single, GaussianEncoding::tmsv(1), EnergyBudget{{0.5}},
                        SenderSet::universe(1)) ==
        doctest::Approx(ea_bgc_capacity(bgc, 0.5)).epsilon(1e-12));
}

TEST_CASE("squeezer-phase degeneracy of the two-sender boundaries") {
  std::mt19937 rng(53);
  const auto ch = fig4_channel();
  for (int trial = 0; trial < 10; ++trial) {
    const auto enc = random_encoding(rng, kBright, 0.8);
    GaussianEncoding mirrored = enc;
    mirrored.r(1) = -enc.r(1);
    mirrored.theta(1) = enc.theta(1) + M_PI / 2.0;
    for (std::uint32_t mask = 1; mask < 4; ++mask) {
      const double a = rate_functional(ch, enc, kBright, {mask, 2});
      const double b = rate_functional(ch, mirrored, kBright, {mask, 2});
      CHECK(a == doctest::Approx(b).epsilon(1e-11));
    }
  }
}

TEST_CASE("gauge symmetry under the channel phase rotation") {
  std::mt19937 rng(57);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
  for (int trial = 0; trial < 15; ++trial) {
    const int s = 1 + trial % 3;
    const auto ch = testsupport::random_channel(rng, s);
    EnergyBudget budget;
    for (int k = 0; k < s; ++k) budget.photons.push_back(0.2 + 1.5 * (trial % 5) / 4.0);
    const auto enc = random_encoding(rng, budget, 0.7);
    const double theta = angle(rng);
    GaussianEncoding shifted = enc;
    for (int k = 0; k < s; ++k) {
      shifted.theta(k) += (ch.conjugated[k] ? -1.0 : 1.0) * theta;
    }
    for (std::uint32_t mask = 1; mask < (1u << s); ++mask) {
      const double a = rate_functional(ch, enc, budget, {mask, s});
      const double b = rate_functional(ch, shifted, budget, {mask, s});
      CHECK(std::abs(a - b) <= 1e-10);
    }
  }
}

TEST_CASE("boundaries are equivariant under sender relabeling") {
  std::mt19937 rng(59);
  const auto setting = testsupport::random_interference(rng, 2);
  PhaseInsensitiveBgmac swapped = setting.channel;
  std::swap(swapped.weights[0], swapped.weights[1]);
  std::swap(swapped.conjugated[0], swapped.conjugated[1]);
  EnergyBudget swapped_budget{{setting.budget.photons[1], setting.budget.photons[0]}};
  const auto enc = random_encoding(rng, setting.budget, 0.6);
  GaussianEncoding swapped_enc = GaussianEncoding::tmsv(2);
  swapped_enc.r << enc.r(1), enc.r(0);
  swapped_enc.theta << enc.theta(1), enc.theta(0);
  CHECK(rate_functional(setting.channel, enc, setting.budget, SenderSet::single(0, 2)) ==
        doctest::Approx(rate_functional(swapped, swapped_enc, swapped_budget,
                                        SenderSet::single(1, 2)))
            .epsilon(1e-11));
  CHECK(rate_functional(setting.channel, enc, setting.budget, SenderSet::universe(2)) ==
        doctest::Approx(rate_functional(swapped, swapped_enc, swapped_budget,
                                        SenderSet::universe(2)))
            .epsilon(1e-11));
}

TEST_CASE("one-shot region basics") {
  const auto ch = fig4_channel();
  const auto rc = one_shot_region(ch, GaussianEncoding::tmsv(2), kBright);
  CHECK(rc.bound[0] == 0.0);
  CHECK(rc.bound_for(SenderSet::universe(2)) ==
        doctest::Approx(ea_total_rate_capacity(ch, kBright)));
  // total boundary dominates the partial ones
  CHECK(rc.bound[1] <= rc.bound[3] + 1e-12);
  CHECK(rc.bound[2] <= rc.bound[3] + 1e-12);

  const auto zero = one_shot_region(ch, GaussianEncoding::tmsv(2), EnergyBudget::zero(2));
  for (double b : zero.bound) CHECK(std::abs(b) <= 1e-12);

  PhaseInsensitiveBgmac single = PhaseInsensitiveBgmac::from_bgc({false, 0.5, 0.1});
  const auto rc1 = one_shot_region(single, GaussianEncoding::tmsv(1), EnergyBudget{{1.0}});
  CHECK(rc1.bound.size() == 2);
  CHECK(rc1.bound[0] == 0.0);
}

TEST_CASE("gradient vanishes at zero squeezing") {
  for (const auto& bgc : {PointToPointBgc{false, 0.1, 0.1}, PointToPointBgc{false, 1.0, 0.1},
                          PointToPointBgc{false, 1.1, 0.2}, PointToPointBgc{true, 0.1, 0.2}}) {
    const auto ch = interference_bgmac({1.0 / 3.0, 2.0 / 3.0}, bgc);
    for (const auto& budget : {kBright, kWeak}) {
      for (std::uint32_t mask = 1; mask < 4; ++mask) {
        const auto grad =
            rate_gradient(ch, GaussianEncoding::tmsv(2), budget, {mask, 2}, 1e-4);
        CHECK(grad.head(2).norm() <= 1e-5);
      }
    }
  }
}

TEST_CASE("gradient symmetry and phase flatness") {
  // symmetric channel and budget: the gradient respects the sender swap
  const auto ch = interference_bgmac({0.5, 0.5}, {false, 0.3, 0.2});
  const EnergyBudget budget{{0.8, 0.8}};
  GaussianEncoding enc = GaussianEncoding::tmsv(2);
  enc.r << 0.2, 0.2;
  enc.theta << 0.3, 0.3;
  const auto grad = rate_gradient(ch, enc, budget, SenderSet::universe(2));
  CHECK(grad(0) == doctest::Approx(grad(1)).epsilon(1e-6));
  CHECK(grad(2) == doctest::Approx(grad(3)).epsilon(1e-6));

  // single-sender noiseless channel: the phase never matters
  PhaseInsensitiveBgmac identity = PhaseInsensitiveBgmac::from_bgc({false, 1.0, 0.0});
  GaussianEncoding enc1 = GaussianEncoding::tmsv(1);
  enc1.r(0) = 0.4;
  enc1.theta(0) = 1.3;
  const auto g1 = rate_gradient(identity, enc1, EnergyBudget{{0.6}}, SenderSet::universe(1));
  CHECK(std::abs(g1(1)) <= 1e-9);
}

TEST_CASE("gradient clips to one-sided differences at the squeezing bound") {
  PhaseInsensitiveBgmac single = PhaseInsensitiveBgmac::from_bgc({false, 0.5, 0.1});
  const EnergyBudget budget{{0.5}};
  GaussianEncoding enc = GaussianEncoding::tmsv(1);
  enc.r(0) = max_squeezing(0.5);  // on the boundary
  const auto grad = rate_gradient(single, enc, budget, SenderSet::universe(1));
  CHECK(std::isfinite(grad(0)));
  CHECK(grad(0) < 0.0);  // the boundary value falls off toward full squeezing
}

TEST_CASE("ray optimization converges to the unsqueezed encoding") {
  const auto ch = fig4_channel();
  RayConfig config;
  config.seed = 5;
  SUBCASE("weak illumination, diagonal ray") {
    const auto ray = ray_maximize(ch, kWeak, Eigen::Vector2d(1.0, 1.0), config);
    CHECK(ray.converged);
    CHECK(ray.encoding.r.norm() <= 1e-3);
    CHECK(feasible(ray.point, ray.constraints, 1e-9));
    CHECK_FALSE(ray.squeeze_trace.empty());
    const auto tmsv_region = one_shot_region(ch, GaussianEncoding::tmsv(2), kWeak);
    const double t_tmsv = std::min({tmsv_region.bound[1], tmsv_region.bound[2],
                                    tmsv_region.bound[3] / 2.0});
    CHECK(ray.point.rates(0) == doctest::Approx(t_tmsv).epsilon(1e-3));
  }
  SUBCASE("single sender recovers the total-rate capacity") {
    PhaseInsensitiveBgmac single = PhaseInsensitiveBgmac::from_bgc({false, 0.4, 0.3});
    const EnergyBudget budget{{0.9}};
    const auto ray = ray_maximize(single, budget, Eigen::VectorXd::Ones(1), config);
    CHECK(ray.encoding.r.norm() <= 1e-3);
    CHECK(ray.norm == doctest::Approx(ea_total_rate_capacity(single, budget)).epsilon(1e-6));
  }
  SUBCASE("zero budget gives a zero-length step") {
    const auto ray = ray_maximize(ch, EnergyBudget::zero(2), Eigen::Vector2d(1.0, 1.0), config);
    CHECK(ray.norm == doctest::Approx(0.0));
    CHECK(ray.point.rates.norm() == doctest::Approx(0.0));
  }
  SUBCASE("direction validation") {
    CHECK_THROWS_AS(ray_maximize(ch, kBright, Eigen::Vector2d(-1.0, 1.0), config),
                    std::invalid_argument);
    CHECK_THROWS_AS(ray_maximize(ch, kBright, Eigen::Vector2d(0.0, 0.0), config),
                    std::invalid_argument);
  }
}

TEST_CASE("union region rays stay within a hair of the TMSV region") {
  const auto ch = fig4_channel();
  RayConfig config;
  config.seed = 11;
  const auto result = union_region(ch, kBright, 6, config);
  REQUIRE(result.rays.size() == 6);

  const auto tmsv_region = one_shot_region(ch, GaussianEncoding::tmsv(2), kBright);
  for (const auto& ray : result.rays) {
    CHECK(ray.converged);
    CHECK(feasible(ray.point, ray.constraints, 1e-9));
    // achieved point within 1e-3 relative of the step the TMSV region allows
    double t_tmsv = std::numeric_limits<double>::infinity();
    for (std::uint32_t mask = 1; mask < 4; ++mask) {
      double d = 0.0;
      for (int k = 0; k < 2; ++k) {
        if ((mask >> k) & 1u) d += ray.direction(k);
      }
      if (d > 0.0) t_tmsv = std::min(t_tmsv, tmsv_region.bound[mask] / d);
    }
    const double t_ray = ray.point.rates.norm() / ray.direction.norm();
    CHECK(t_ray == doctest::Approx(t_tmsv).epsilon(1e-3));
    // the coherent-state region sits inside the EA region along every ray
    const auto universe = SenderSet::universe(2);
    double t_coh = std::numeric_limits<double>::infinity();
    for (std::uint32_t mask = 1; mask < 4; ++mask) {
      double d = 0.0;
      for (int k = 0; k < 2; ++k) {
        if ((mask >> k) & 1u) d += ray.direction(k);
      }
      const double bound = coherent_bound(ch, kBright, {mask, 2});
      if (d > 0.0) t_coh = std::min(t_coh, bound / d);
    }
    CHECK(t_coh <= t_ray + 1e-9);
  }

  // hull contains the origin and the ray endpoints up to convexity
  REQUIRE(result.hull.size() >= 3);

  // a single axis-aligned ray degenerates to the sender-1 boundary
  const auto single = union_region(ch, kBright, 1, config);
  CHECK(single.rays[0].direction(1) == doctest::Approx(0.0));
  CHECK(single.rays[0].point.rates(1) == doctest::Approx(0.0));
  CHECK(single.rays[0].point.rates(0) ==
        doctest::Approx(tmsv_region.bound[1]).epsilon(1e-3));
}

TEST_CASE("pentagons of probed encodings nest inside the TMSV pentagon") {
  std::mt19937 rng(61);
  const auto ch = fig4_channel();
  for (const auto& budget : {kBright, kWeak}) {
    const auto reference = one_shot_region(ch, GaussianEncoding::tmsv(2), budget);
    for (int trial = 0; trial < 12; ++trial) {
      const auto enc = random_encoding(rng, budget, 0.8);
      const auto probed = one_shot_region(ch, enc, budget);
      for (std::uint32_t mask = 1; mask < 4; ++mask) {
        CHECK(probed.bound[mask] <= reference.bound[mask] * (1.0 + 1e-3) + 1e-12);
      }
    }
  }
}

TEST_CASE("subadditivity of the total rate over two channel uses") {
  std::mt19937 rng(67);
  SUBCASE("product inputs are additive") {
    for (int trial = 0; trial < 10; ++trial) {
      const int s = 1 + trial % 3;
      const auto ch1 = testsupport::random_channel(rng, s);
      const auto ch2 = testsupport::random_channel(rng, s);
      TwoUseInput input;
      for (int k = 0; k < s; ++k) {
        const auto pair = direct_sum(tmsv_cm(0.3 + 0.2 * k), tmsv_cm(0.5));
        input.per_sender.push_back(subsystem_cm(pair, {0, 2, 1, 3}));
      }
      const auto sample = subadditivity_sample(ch1, ch2, input);
      CHECK(sample.joint_bits == doctest::Approx(sample.split_bits).epsilon(1e-10));
    }
  }
  SUBCASE("random correlated inputs satisfy the inequality") {
    for (int trial = 0; trial < 50; ++trial) {
      const int s = 1 + trial % 2;
      const auto ch1 = testsupport::random_channel(rng, s);
      const auto ch2 = testsupport::random_channel(rng, s);
      TwoUseInput input;
      for (int k = 0; k < s; ++k) {
        input.per_sender.push_back(testsupport::random_pure_cm(rng, 4, 0.8));
      }
      const auto sample = subadditivity_sample(ch1, ch2, input);
      CHECK(sample.joint_bits <= sample.split_bits + 1e-9);
    }
  }
  SUBCASE("entangling the uses without idlers is strictly worse") {
    const auto ch = fig4_channel();
    TwoUseInput input;
    for (int k = 0; k < 2; ++k) {
      input.per_sender.push_back(direct_sum(tmsv_cm(0.5), CovarianceMatrix::vacuum(2)));
    }
    const auto sample = subadditivity_sample(ch, ch, input);
    CHECK(sample.joint_bits == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(sample.split_bits > 0.01);
  }
  SUBCASE("impure per-sender states are rejected") {
    const auto ch = fig4_channel();
    TwoUseInput input;
    input.per_sender.push_back(direct_sum(thermal_cm(0.5, 2), CovarianceMatrix::vacuum(2)));
    CHECK_THROWS_AS(subadditivity_sample(ch, ch, input), std::invalid_argument);
  }
}
