#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "curveflow/curve.hpp"
#include "curveflow/presets.hpp"
#include "curveflow/support.hpp"

using namespace curveflow;

namespace {
constexpr double kPi = 3.141592653589793238462643383279;
}

TEST_CASE("support function and width of a circle") {
    const double radius = 1.5;
    const SampledCurve curve = circle_curve(radius, 512);
    const SupportData data = support_and_width(curve);
    REQUIRE(data.size() > 0);
    REQUIRE(data.size() % 2 == 0);
    for (std::size_t l = 0; l < data.size(); ++l) {
        CHECK(data.h[l] == doctest::Approx(radius).epsilon(5e-5));
        CHECK(data.w[l] == doctest::Approx(2.0 * radius).epsilon(5e-5));
    }
    CHECK(support_identity_residual(curve, data) < 5e-3);
}

TEST_CASE("support oval recovers its generating support function") {
    const SampledCurve curve = support_oval(2.0, {0.0, 0.2}, 512);
    const SupportData data = support_and_width(curve);
    for (std::size_t l = 0; l < data.size(); ++l) {
        const double theta = 2.0 * kPi * static_cast<double>(l) / static_cast<double>(data.size());
        CHECK(data.h[l] == doctest::Approx(2.0 + 0.2 * std::cos(2.0 * theta)).epsilon(5e-4));
        // Width of h0 + c2 cos(2 theta): the even harmonic doubles.
        CHECK(data.w[l] == doctest::Approx(4.0 + 0.4 * std::cos(2.0 * theta)).epsilon(5e-4));
    }
}

TEST_CASE("support oval pinned geometry") {
    const CurveGeometry geom = geometry(support_oval(2.0, {0.0, 0.2}, 512));
    CHECK(geom.length == doctest::Approx(12.566291761650689).epsilon(1e-14));
    const auto [kmin_it, kmax_it] =
        std::minmax_element(geom.curvature.begin(), geom.curvature.end());
    CHECK(*kmin_it == doctest::Approx(0.38462225354356305).epsilon(1e-13));
    CHECK(*kmax_it == doctest::Approx(0.71427482952171384).epsilon(1e-13));
    // Radius relation 1/k = h + h'' at the extremes: 2.6 and 1.4.
    CHECK(*kmin_it == doctest::Approx(1.0 / 2.6).epsilon(1e-4));
    CHECK(*kmax_it == doctest::Approx(1.0 / 1.4).epsilon(1e-4));
}

TEST_CASE("support identity residual is second order") {
    const double r256 = [] {
        const SampledCurve c = support_oval(2.0, {0.0, 0.2}, 256);
        return support_identity_residual(c, support_and_width(c));
    }();
    const double r4096 = [] {
        const SampledCurve c = support_oval(2.0, {0.0, 0.2}, 4096);
        return support_identity_residual(c, support_and_width(c));
    }();
    // Grid step scales like N^{-1/2}: 16x the vertices is 4x finer,
    // so a second-order residual shrinks by about 16.
    CHECK(r4096 < r256 / 4.0);
}

TEST_CASE("width energy constant of the circle") {
    const double radius = 0.8, sigma1 = 1.0, sigma2 = 0.5;
    const SampledCurve curve = circle_curve(radius, 256);
    const CurveGeometry geom = geometry(curve);
    const SupportData data = support_and_width(curve);
    const double expected =
        2.0 * radius * std::exp(sigma1 * geom.length + sigma2 * geom.area);
    CHECK(width_energy_constant(curve, data, sigma1, sigma2) ==
          doctest::Approx(expected).epsilon(1e-3));
}

TEST_CASE("support function rejects nonconvex curves") {
    CHECK_THROWS_AS((void)support_and_width(flower_curve(1.0, 0.3, 3, 512)),
                    std::invalid_argument);
}

TEST_CASE("support oval preset rejects nonconvex support data") {
    CHECK_THROWS_AS((void)support_oval(1.0, {0.0, 0.6}, 256), std::invalid_argument);
}
