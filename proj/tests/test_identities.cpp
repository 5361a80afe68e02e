#include <cmath>

#include "doctest.h"
#include "tmx/error.hpp"
#include "tmx/exact.hpp"
#include "tmx/identities.hpp"
#include "tmx/identity_algebra.hpp"

using namespace tmx;
namespace al = tmx::algebra;

namespace {

const HalfSpaceMedium kRef(std::sqrt(2.0));
const Vec2 kKpar{std::sqrt(2.0), 0.0};

ModeKinematics left(double omega) { return make_kinematics(kRef, omega, kKpar, Side::Left); }

ExactKinematics exact_ref() {
  ExactKinematics k;
  k.n_left2 = 2;
  k.kpar2 = 2;
  k.omega2 = 3;
  k.K_i = QI(2);
  k.K_t = QI(1);
  return k;
}

}  // namespace

TEST_SUITE("identities") {
  TEST_CASE("TE and TM brackets at the reference mode, exactly") {
    const auto k = al::lift(exact_ref());
    REQUIRE(exact_ref().consistent());
    CHECK(al::te_bracket(k).is_zero());
    CHECK(al::tm_bracket(k).is_zero());
    CHECK(check_te_bracket(left(std::sqrt(3.0))) <= 1e-15);
  }

  TEST_CASE("matched media brackets") {
    const auto k = make_kinematics(HalfSpaceMedium(1.0), 1.3, {0.4, 0.1}, Side::Left);
    CHECK(check_te_bracket(k) <= 1e-15);
    CHECK(check_tm_bracket(k) <= 1e-15);
  }

  TEST_CASE("literal transmission rule breaks the TE bracket") {
    const auto k = al::lift(exact_ref());
    CHECK(!al::te_bracket(k, TransmissionRule::SwappedNumerator).is_zero());
    CHECK(check_te_bracket(left(std::sqrt(3.0)), TransmissionRule::SwappedNumerator) > 0.1);
  }

  TEST_CASE("evanescent unimodularity") {
    const auto k = make_kinematics(kRef, 1.0, {std::sqrt(1.5), 0.0}, Side::Left);
    CHECK(check_evanescent_unimodular(k) <= 1e-15);
    const HalfSpaceMedium m(std::sqrt(2.0));
    // K_i = 3, K_t = 0.5 i
    const double kp2 = (9.0 + 0.25 * 2.0) / (2.0 - 1.0);
    const auto k2 = kinematics_from_normal(m, {std::sqrt(kp2), 0.0}, 3.0, Side::Left);
    CHECK(k2.K_t.imag() == doctest::Approx(0.5));
    CHECK(check_evanescent_unimodular(k2) <= 1e-15);
  }

  TEST_CASE("principal cancellation at hand-checked kinematics") {
    const auto a = left(std::sqrt(3.0));
    const auto b = left(std::sqrt(6.0));
    CHECK(b.K_i == doctest::Approx(std::sqrt(10.0)));
    CHECK(b.K_t.real() == doctest::Approx(2.0));
    CHECK(check_principal_cancellation(a, b) <= 1e-13);
  }

  TEST_CASE("counter cancellation at hand-checked kinematics") {
    const auto l = left(std::sqrt(3.0));
    const auto r = make_kinematics(kRef, 2.0, kKpar, Side::Right);
    CHECK(r.K_i == doctest::Approx(-std::sqrt(2.0)));
    CHECK(r.K_t.real() == doctest::Approx(-std::sqrt(6.0)));
    CHECK(check_counter_cancellation(l, r) <= 1e-13);
  }

  TEST_CASE("Jacobian factor") {
    CHECK(delta_jacobian(left(std::sqrt(3.0)), JacobianForm::TE) == doctest::Approx(1.0));
    const auto matched = make_kinematics(HalfSpaceMedium(1.0), 1.0, {0.3, 0.0}, Side::Left);
    CHECK(delta_jacobian(matched, JacobianForm::TE) == doctest::Approx(1.0));
    CHECK(check_delta_jacobian(left(std::sqrt(3.0)), JacobianForm::TE) <= 1e-8);
    CHECK(check_delta_jacobian(left(std::sqrt(3.0)), JacobianForm::TM) <= 1e-8);
  }

  TEST_CASE("surface identity value at the hand-checked pair") {
    const auto a = left(std::sqrt(3.0));
    const auto b = left(std::sqrt(6.0));
    const cplx lhs = (1.0 + std::conj(te_coefficients(a).reflection)) * (1.0 - te_coefficients(b).reflection);
    CHECK(lhs.real() == doctest::Approx(16.0 / (3.0 * (std::sqrt(10.0) + 2.0))).epsilon(1e-14));
    CHECK(lhs.real() == doctest::Approx(1.03313).epsilon(1e-5));
    CHECK(check_surface_identity(a, b) <= 1e-13);
    CHECK(check_surface_identity(a, a) <= 1e-13);
    CHECK(check_surface_identity(a, b, TransmissionRule::SwappedNumerator) > 0.1);
    CHECK(check_tm_te_substitution(a, b) <= 1e-13);
  }

  TEST_CASE("exact fixtures satisfy every identity with zero residual") {
    for (const auto& p : exact_copropagating_pairs()) {
      const auto a = al::lift(p.a);
      const auto b = al::lift(p.b);
      CHECK(al::surface_identity(a, b).is_zero());
      CHECK(al::surface_identity_tm(a, b).is_zero());
    }
  }

  TEST_CASE("full suite passes and the literal rule fails exactly two identities") {
    IdentitySuiteConfig cfg;
    cfg.samples = 2000;
    const auto reports = run_identity_suite(cfg);
    REQUIRE(reports.size() == 8);
    for (const auto& r : reports) {
      CHECK_MESSAGE(r.passed(), r.name);
      CHECK(r.exact_points >= 10);
      CHECK(r.samples == 2000);
    }

    cfg.rule = TransmissionRule::SwappedNumerator;
    int failed = 0;
    for (const auto& r : run_identity_suite(cfg)) {
      if (!r.passed()) {
        ++failed;
        CHECK((r.name == "te_bracket" || r.name == "surface_identity"));
      }
    }
    CHECK(failed == 2);
  }

  TEST_CASE("suite is deterministic for a seed") {
    IdentitySuiteConfig cfg;
    cfg.samples = 500;
    cfg.seed = 42;
    const auto a = run_identity_suite(cfg);
    const auto b = run_identity_suite(cfg);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].max_abs_residual == b[i].max_abs_residual);
  }

  TEST_CASE("zero samples rejected") {
    IdentitySuiteConfig cfg;
    cfg.samples = 0;
    CHECK_THROWS_AS(run_identity_suite(cfg), Error);
  }
}
