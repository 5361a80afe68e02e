#include <cmath>
#include <random>

#include "doctest.h"
#include "json.hpp"
#include "tmx/error.hpp"
#include "tmx/expansion.hpp"
#include "tmx/fields.hpp"

using namespace tmx;

namespace {

PacketSpectrum single_sample(Vec3 k, Side side, cplx u) {
  PacketSpectrum s{HalfSpaceMedium(1.5), Bandwidth{k, 0.0}, false, {}};
  s.samples.push_back(SpectrumSample{k, side, Polarization::TE, u, 1.0});
  return s;
}

}  // namespace

TEST_SUITE("expansion") {
  TEST_CASE("amplitude factor") {
    const double c = 2.0 * std::pow(2.0 * M_PI, 3);
    CHECK(amplitude_factor({c, 0.0, 0.0}) == doctest::Approx(1.0));
    CHECK(amplitude_factor({0.0, 0.0, 1.0}) == doctest::Approx(0.0449).epsilon(1e-3));
    CHECK(amplitude_factor({0.0, 0.0, 1.0}) == doctest::Approx(1.0 / std::sqrt(c)));
    CHECK_THROWS_AS(amplitude_factor({0.0, 0.0, 0.0}), Error);
  }

  TEST_CASE("empty spectra") {
    PacketSpectrum s{HalfSpaceMedium(1.5), Bandwidth{{0.0, 0.0, 1.0}, 0.0}, false, {}};
    const RealFields f = synthesize_field(s, 0.0, {0.1, 0.2, 0.3});
    CHECK(f.E.norm() == 0.0);
    CHECK(f.B.norm() == 0.0);
    CHECK(diagonal_energy(s) == 0.0);
  }

  TEST_CASE("diagonal energy arithmetic") {
    PacketSpectrum s = single_sample({0.0, 0.0, 2.0}, Side::Left, cplx(1.0, std::sqrt(2.0)));
    CHECK(diagonal_energy(s) == doctest::Approx(6.0));
  }

  TEST_CASE("single real sample field is -2 E Im(F)") {
    const Vec3 k{0.5, 0.0, 1.2};
    const PacketSpectrum s = single_sample(k, Side::Left, 0.7);
    const Vec3 x{0.3, -0.4, -0.8};
    const RealFields f = synthesize_field(s, 0.0, x);
    const TripleMode m = sample_mode(s, s.samples[0]);
    const double scale = amplitude_factor(k) * 0.7;
    const CVec3 E = eval_electric(m, x);
    CHECK(f.E.x == doctest::Approx(-2.0 * scale * E.x.imag()));
    CHECK(f.E.y == doctest::Approx(-2.0 * scale * E.y.imag()));
    CHECK(f.E.z == doctest::Approx(-2.0 * scale * E.z.imag()));
  }

  TEST_CASE("labels follow the sign of K") {
    PacketSpectrum s = single_sample({0.0, 0.0, -1.0}, Side::Left, 1.0);
    CHECK_THROWS_AS(validate(s), Error);
    s.samples[0].side = Side::Right;
    CHECK_NOTHROW(validate(s));
    CHECK_THROWS_AS(validate(s, DomainLabeling::Literal), Error);
  }

  TEST_CASE("JSON round trip") {
    const PacketSpectrum p = gaussian_packet(GaussianPacketConfig{});
    const nlohmann::json j = p;
    CHECK(j.at("schema") == 1);
    const PacketSpectrum q = j.get<PacketSpectrum>();
    REQUIRE(q.samples.size() == p.samples.size());
    CHECK(q.collapsed_y == p.collapsed_y);
    for (std::size_t i = 0; i < p.samples.size(); ++i) {
      CHECK(q.samples[i].k == p.samples[i].k);
      CHECK(q.samples[i].u == p.samples[i].u);
      CHECK(q.samples[i].w == p.samples[i].w);
    }
    CHECK(nlohmann::json(q).dump() == j.dump());
  }

  TEST_CASE("Gaussian packet fields are real") {
    GaussianPacketConfig c;
    c.collapse_y = false;
    c.min_samples = 6;
    const PacketSpectrum p = gaussian_packet(c);
    REQUIRE(p.samples.size() >= 32);
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    for (int i = 0; i < 100; ++i) {
      const Vec3 x{u(gen), u(gen), u(gen)};
      const AnalyticFields a = synthesize_analytic(p, 0.3, x);
      const RealFields r = synthesize_field(p, 0.3, x);
      // i(S - S*) is real by construction; the real part of i(S - S*) is -2 Im S.
      CHECK(std::abs(r.E.x + 2.0 * a.E.x.imag()) <= 1e-13 * std::max(1.0, std::abs(a.E.x)));
      CHECK(std::abs(r.B.y + 2.0 * a.B.y.imag()) <= 1e-13 * std::max(1.0, std::abs(a.B.y)));
    }
  }

  TEST_CASE("resolution and tail guards") {
    const PacketSpectrum p = gaussian_packet(GaussianPacketConfig{});
    CHECK_THROWS_AS(field_energy(p, Box{35.0, 4.0}), Error);
    try {
      field_energy(p, Box{3.0, 8.0});
      FAIL("expected TailTooLarge");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kTailTooLarge);
    }
  }

  TEST_CASE("energy matches the diagonal form") {
    GaussianPacketConfig c;
    c.box_half_extent = 35.0;
    for (Side side : {Side::Left, Side::Right}) {
      for (Polarization pol : {Polarization::TE, Polarization::TM}) {
        c.side = side;
        c.pol = pol;
        const EnergyReport r = energy_report(gaussian_packet(c), Box{35.0, 8.0});
        CHECK(r.ratio == doctest::Approx(1.0).epsilon(0.02));
      }
    }
  }

  TEST_CASE("three-dimensional packet energy") {
    GaussianPacketConfig c;
    c.collapse_y = false;
    c.relative_bandwidth = 0.08;
    c.box_half_extent = 10.0;
    const PacketSpectrum p = gaussian_packet(c);
    const EnergyReport r = energy_report(p, Box{10.0, 8.0});
    CHECK(r.ratio == doctest::Approx(1.0).epsilon(0.02));
  }

  TEST_CASE("superposition requires matching geometry") {
    GaussianPacketConfig c;
    const PacketSpectrum a = gaussian_packet(c);
    c.collapse_y = false;
    CHECK_THROWS_AS(superpose(a, gaussian_packet(c)), Error);
  }
}
