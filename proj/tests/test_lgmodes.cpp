#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "lghom/lgmodes.hpp"
#include "oracles.hpp"

using namespace lghom;

namespace {
const double kWavenumber = 2.0 * std::numbers::pi / 795e-9;
}

TEST_CASE("mode index and geometry invariants") {
    CHECK_THROWS_AS(ModeIndex(2, -1), std::invalid_argument);
    CHECK(ModeIndex(-3, 2).order() == 7);

    CHECK_THROWS_AS(BeamGeometry(-1e-3, 0.0, kWavenumber), std::invalid_argument);
    CHECK_THROWS_AS(BeamGeometry(1e-3, 0.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(FieldPoint(-1e-6, 0.0), std::invalid_argument);

    const BeamGeometry geom(1e-3, 0.0, kWavenumber);
    CHECK(geom.rayleigh() == doctest::Approx(0.5 * kWavenumber * 1e-6).epsilon(1e-15));
    CHECK(geom.width() == doctest::Approx(1e-3));
    CHECK(geom.curvature() == 0.0);  // regular at the waist plane

    const BeamGeometry far(1e-3, geom.rayleigh(), kWavenumber);
    CHECK(far.width() == doctest::Approx(1e-3 * std::sqrt(2.0)).epsilon(1e-12));
    CHECK(far.curvature() == doctest::Approx(1.0 / (2.0 * geom.rayleigh())).epsilon(1e-12));
}

TEST_CASE("laguerre closed forms") {
    CHECK(laguerre(0, 3, 7.2) == 1.0);
    CHECK(laguerre(1, 2, 1.0) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK_THROWS_AS(laguerre(-1, 0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(laguerre(2, -1, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(laguerre(2, 1, std::nan("")), std::invalid_argument);
}

TEST_CASE("laguerre recurrence matches the direct series") {
    CHECK(laguerre(5, 2, 3.7) ==
          doctest::Approx(oracles::laguerre_series(5, 2, 3.7)).epsilon(1e-12));
    for (int p = 0; p <= 12; ++p)
        for (int alpha = 0; alpha <= 12; alpha += 3)
            for (double x : {0.0, 0.37, 1.0, 4.2, 11.0, 26.5, 50.0}) {
                const double expected = oracles::laguerre_series(p, alpha, x);
                const double got = laguerre(p, alpha, x);
                CHECK(std::abs(got - expected) <=
                      1e-10 * std::max(1.0, std::abs(expected)));
            }
}

TEST_CASE("lg_field special points") {
    const BeamGeometry geom(1e-3, 0.0, kWavenumber);

    // vortex core: rho^|l| kills the field for l != 0
    CHECK(lg_field(ModeIndex(3, 0), geom, FieldPoint(0.0, 1.3)) == std::complex<double>(0.0, 0.0));

    // fundamental mode on axis at the waist: sqrt(2/pi)/w0, purely real
    const auto center = lg_field(ModeIndex(0, 0), geom, FieldPoint(0.0, 0.0));
    CHECK(center.real() ==
          doctest::Approx(std::sqrt(2.0 / std::numbers::pi) / 1e-3).epsilon(1e-14));
    CHECK(center.imag() == 0.0);
}

TEST_CASE("lg_field unit norm by radial quadrature") {
    // l=1, p=2, w0 = 1 mm, z = zR, k = 2 pi / 795 nm
    const BeamGeometry waist(1e-3, 0.0, kWavenumber);
    const BeamGeometry geom(1e-3, waist.rayleigh(), kWavenumber);
    const ModeIndex mode(1, 2);

    const auto intensity = [&](double rho) {
        return std::norm(lg_field(mode, geom, FieldPoint(rho, 0.0))) * rho;
    };
    const double total =
        2.0 * std::numbers::pi * oracles::simpson(intensity, 0.0, 8.0 * geom.width(), 4000);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("gouy phase consistency on axis") {
    const BeamGeometry waist(0.7e-3, 0.0, kWavenumber);
    const double rho = 1e-9 * waist.w0;
    for (int p : {0, 1, 3}) {
        for (double z_frac : {-1.5, -0.4, 0.3, 1.0, 2.0}) {
            const BeamGeometry geom(waist.w0, z_frac * waist.rayleigh(), kWavenumber);
            const ModeIndex mode(0, p);
            const double arg_z = std::arg(lg_field(mode, geom, FieldPoint(rho, 0.0)));
            const double arg_0 = std::arg(lg_field(mode, waist, FieldPoint(rho, 0.0)));
            const double expected = (2 * p + 1) * std::atan(geom.z / geom.rayleigh());
            CHECK(std::remainder(arg_z - arg_0 - expected, 2.0 * std::numbers::pi) ==
                  doctest::Approx(0.0).epsilon(1e-9));
        }
    }
}

TEST_CASE("curvature phase grows as k rho^2 C / 2") {
    const BeamGeometry waist(1e-3, 0.0, kWavenumber);
    const BeamGeometry geom(1e-3, waist.rayleigh(), kWavenumber);
    const ModeIndex mode(0, 0);  // L_0 = 1, no sign flips along rho
    const double rho = 0.3 * geom.width();
    const double shift = std::arg(lg_field(mode, geom, FieldPoint(rho, 0.0))) -
                         std::arg(lg_field(mode, geom, FieldPoint(0.0, 0.0)));
    const double expected = 0.5 * kWavenumber * rho * rho * geom.curvature();
    CHECK(std::remainder(shift - expected, 2.0 * std::numbers::pi) ==
          doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("abcd propagation") {
    const BeamGeometry geom(1e-3, 0.0, kWavenumber);

    SUBCASE("free space shifts z") {
        const double length = 0.75;
        const auto moved = abcd_propagate(geom, {{{1.0, length}, {0.0, 1.0}}});
        CHECK(moved.z == doctest::Approx(length).epsilon(1e-15));
        CHECK(moved.w0 == doctest::Approx(geom.w0).epsilon(1e-15));
        CHECK(moved.k == geom.k);
    }

    SUBCASE("identity leaves the geometry alone") {
        const auto same = abcd_propagate(geom, {{{1.0, 0.0}, {0.0, 1.0}}});
        CHECK(same.z == geom.z);
        CHECK(same.w0 == doctest::Approx(geom.w0).epsilon(1e-15));
    }

    SUBCASE("thin lens matches hand-coded q arithmetic") {
        const double f = 0.2;
        const auto out = abcd_propagate(geom, {{{1.0, 0.0}, {-1.0 / f, 1.0}}});

        const std::complex<double> q(geom.z, geom.rayleigh());
        const std::complex<double> q_prime = q / (-q / f + 1.0);
        CHECK(out.z == doctest::Approx(q_prime.real()).epsilon(1e-12));
        CHECK(out.rayleigh() == doctest::Approx(q_prime.imag()).epsilon(1e-12));
    }

    SUBCASE("composition of free-space segments") {
        const double l1 = 0.35, l2 = 1.2;
        const auto step = abcd_propagate(abcd_propagate(geom, {{{1.0, l1}, {0.0, 1.0}}}),
                                         {{{1.0, l2}, {0.0, 1.0}}});
        const auto whole = abcd_propagate(geom, {{{1.0, l1 + l2}, {0.0, 1.0}}});
        CHECK(step.z == doctest::Approx(whole.z).epsilon(1e-12));
        CHECK(step.w0 == doctest::Approx(whole.w0).epsilon(1e-12));
    }

    SUBCASE("non-unit determinant is rejected") {
        CHECK_THROWS_AS(abcd_propagate(geom, {{{2.0, 0.0}, {0.0, 1.0}}}), std::invalid_argument);
    }
}

TEST_CASE("intensity profile coherent vs incoherent") {
    const BeamGeometry geom(1e-3, 0.0, kWavenumber);
    const std::vector<std::pair<ModeIndex, BeamGeometry>> pair_modes{
        {ModeIndex(0, 0), geom}, {ModeIndex(2, 0), geom}};
    const std::vector<std::complex<double>> equal{{1.0 / std::numbers::sqrt2, 0.0},
                                                  {1.0 / std::numbers::sqrt2, 0.0}};

    SUBCASE("single mode gives |LG|^2 under both flags") {
        const std::vector<std::pair<ModeIndex, BeamGeometry>> one{{ModeIndex(1, 1), geom}};
        const std::vector<std::complex<double>> amp{{1.0, 0.0}};
        const FieldPoint pt(0.4e-3, 1.1);
        const double expected = std::norm(lg_field(ModeIndex(1, 1), geom, pt));
        CHECK(intensity_profile(one, true, amp, pt) == doctest::Approx(expected).epsilon(1e-14));
        CHECK(intensity_profile(one, false, amp, pt) == doctest::Approx(expected).epsilon(1e-14));
    }

    SUBCASE("identical modes make both flags agree") {
        const std::vector<std::pair<ModeIndex, BeamGeometry>> twice{{ModeIndex(2, 0), geom},
                                                                    {ModeIndex(2, 0), geom}};
        const FieldPoint pt(0.7e-3, 0.3);
        CHECK(intensity_profile(twice, true, equal, pt) ==
              doctest::Approx(intensity_profile(twice, false, equal, pt) * 2.0).epsilon(1e-12));
        // coherent: |2 * (1/sqrt2) LG|^2 = 2 |LG|^2; incoherent: 2 * (1/2) |LG|^2 = |LG|^2
    }

    SUBCASE("azimuthal structure on a 64x64 polar grid") {
        double coherent_min = 1e300, coherent_max = 0.0;
        double incoherent_min = 1e300, incoherent_max = 0.0;
        const double rho = 0.8e-3;
        for (int i = 0; i < 64; ++i) {
            const double phi = 2.0 * std::numbers::pi * i / 64;
            const FieldPoint pt(rho, phi);
            const double coh = intensity_profile(pair_modes, true, equal, pt);
            const double inc = intensity_profile(pair_modes, false, equal, pt);
            coherent_min = std::min(coherent_min, coh);
            coherent_max = std::max(coherent_max, coh);
            incoherent_min = std::min(incoherent_min, inc);
            incoherent_max = std::max(incoherent_max, inc);
        }
        CHECK(incoherent_max - incoherent_min <= 1e-12 * incoherent_max);
        CHECK(coherent_max - coherent_min > 0.1 * coherent_max);
    }

    SUBCASE("empty and mismatched inputs are rejected") {
        const std::vector<std::pair<ModeIndex, BeamGeometry>> none;
        const std::vector<std::complex<double>> amps{{1.0, 0.0}};
        CHECK_THROWS_AS(intensity_profile(none, true, amps, FieldPoint(0.0, 0.0)),
                        std::invalid_argument);
        CHECK_THROWS_AS(intensity_profile(pair_modes, true, amps, FieldPoint(0.0, 0.0)),
                        std::invalid_argument);
    }
}
