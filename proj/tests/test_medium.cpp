#include <cmath>

#include "doctest.h"
#include "tmx/error.hpp"
#include "tmx/identities.hpp"
#include "tmx/medium.hpp"

using namespace tmx;

TEST_SUITE("medium") {
  TEST_CASE("matched media at normal incidence") {
    const auto k = make_kinematics(HalfSpaceMedium(1.0), 1.0, {0.0, 0.0}, Side::Left);
    CHECK(k.K_i == doctest::Approx(1.0));
    CHECK(k.K_t.real() == doctest::Approx(1.0));
    CHECK(k.K_t.imag() == 0.0);
  }

  TEST_CASE("left and right kinematics of the reference medium") {
    const HalfSpaceMedium m(std::sqrt(2.0));
    const Vec2 kp{std::sqrt(2.0), 0.0};
    const auto l = make_kinematics(m, std::sqrt(3.0), kp, Side::Left);
    CHECK(l.K_i == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(l.K_t.real() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(l.X_i == doctest::Approx(1.0));
    CHECK(l.X_t.real() == doctest::Approx(1.0));

    const auto r = make_kinematics(m, std::sqrt(3.0), kp, Side::Right);
    CHECK(r.K_i == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(r.K_t.real() == doctest::Approx(-2.0).epsilon(1e-14));
    CHECK(r.n_i == 1.0);
  }

  TEST_CASE("evanescent branch decays") {
    const HalfSpaceMedium m(std::sqrt(2.0));
    const auto k = make_kinematics(m, 1.0, {std::sqrt(1.5), 0.0}, Side::Left);
    CHECK(k.K_i == doctest::Approx(std::sqrt(0.5)));
    CHECK(k.K_t.real() == 0.0);
    CHECK(k.K_t.imag() == doctest::Approx(std::sqrt(0.5)));
    CHECK(k.evanescent());
  }

  TEST_CASE("refractive index by position") {
    const HalfSpaceMedium m(1.5);
    CHECK(refractive_index_at(m, {0, 0, -1}) == 1.5);
    CHECK(refractive_index_at(m, {0, 0, 1}) == 1.0);
    CHECK(refractive_index_at(m, {3, -2, 0}) == 1.0);
  }

  TEST_CASE("guards") {
    CHECK_THROWS_AS(HalfSpaceMedium(1.0, 1.5), Error);
    CHECK_NOTHROW(HalfSpaceMedium(1.0, 1.5, true));
    CHECK_THROWS_AS(HalfSpaceMedium(0.0), Error);
    const HalfSpaceMedium m(1.5);
    CHECK_THROWS_AS(make_kinematics(m, 0.0, {0, 0}, Side::Left), Error);
    CHECK_THROWS_AS(make_kinematics(m, 1.0, {1.5, 0.0}, Side::Left), Error);
    CHECK_THROWS_AS(make_kinematics(m, 1.0, {2.0, 0.0}, Side::Left), Error);
    CHECK_THROWS_AS(kinematics_from_normal(m, {0.1, 0.0}, -1.0, Side::Left), Error);
  }

  TEST_CASE("dispersion relations hold for random kinematics") {
    KinematicsSampler s(11);
    for (int i = 0; i < 1000; ++i) {
      const auto k = s.single(KinematicsSampler::Regime::Any, i % 2 ? Side::Right : Side::Left);
      const double kp2 = k.k_parallel.norm2();
      const double w2 = k.omega * k.omega;
      CHECK(std::abs(kp2 + k.K_i * k.K_i - k.n_i * k.n_i * w2) <= 1e-12 * k.n_i * k.n_i * w2);
      CHECK(std::abs(kp2 + k.K_t * k.K_t - k.n_t * k.n_t * w2) <= 1e-12 * k.n_i * k.n_i * w2);
      const double sign = k.side == Side::Left ? 1.0 : -1.0;
      CHECK(sign * k.K_i > 0.0);
      if (k.evanescent()) {
        CHECK(sign * k.K_t.imag() > 0.0);
      } else {
        CHECK(sign * k.K_t.real() > 0.0);
      }
    }
  }
}
