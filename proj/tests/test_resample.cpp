#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "curveflow/curve.hpp"
#include "curveflow/presets.hpp"
#include "curveflow/resample.hpp"
#include "curveflow/spline.hpp"

using namespace curveflow;

namespace {
constexpr double kPi = 3.141592653589793238462643383279;
}

TEST_CASE("periodic cubic spline interpolates smooth periodic data") {
    const std::size_t n = 64;
    std::vector<double> knots, values;
    for (std::size_t i = 0; i < n; ++i) {
        const double u = 2.0 * kPi * static_cast<double>(i) / static_cast<double>(n);
        knots.push_back(u);
        values.push_back(std::sin(u));
    }
    const PeriodicCubicSpline spline(knots, values, 2.0 * kPi);

    for (std::size_t i = 0; i < n; ++i)
        CHECK(spline(knots[i]) == doctest::Approx(values[i]).epsilon(1e-13));
    for (double u = 0.05; u < 2.0 * kPi; u += 0.31) {
        CHECK(spline(u) == doctest::Approx(std::sin(u)).epsilon(1e-6));
        CHECK(spline.derivative(u) == doctest::Approx(std::cos(u)).epsilon(1e-4));
        CHECK(spline(u + 2.0 * kPi) == doctest::Approx(spline(u)).epsilon(1e-12));
        CHECK(spline(u - 2.0 * kPi) == doctest::Approx(spline(u)).epsilon(1e-12));
    }
}

TEST_CASE("spline handles non-uniform knots") {
    std::vector<double> knots{0.0, 0.3, 1.1, 2.0, 3.4, 4.0, 5.5};
    std::vector<double> values;
    for (const double u : knots) values.push_back(std::cos(u));
    const PeriodicCubicSpline spline(knots, values, 2.0 * kPi);
    for (std::size_t i = 0; i < knots.size(); ++i)
        CHECK(spline(knots[i]) == doctest::Approx(values[i]).epsilon(1e-13));
}

TEST_CASE("resampling restores the polygon area exactly") {
    for (const SampledCurve& curve :
         {ellipse_curve(2.0, 1.0, 384), flower_curve(1.0, 0.3, 3, 512)}) {
        const double area_in = geometry(curve).area;
        const SampledCurve out = resample(curve, curve.size());
        const double area_out = geometry(out).area;
        CHECK(std::abs(area_out - area_in) <= 1e-14 * std::abs(area_in));
    }
}

TEST_CASE("resampling distributes vertices uniformly in arclength") {
    const SampledCurve out = resample(ellipse_curve(2.0, 1.0, 512), 512);
    const CurveGeometry geom = geometry(out);
    const auto [lo, hi] = std::minmax_element(geom.edge_len.begin(), geom.edge_len.end());
    CHECK(*hi / *lo < 1.0 + 5e-3);
    // Length is preserved to interpolation accuracy.
    CHECK(geom.length ==
          doctest::Approx(geometry(ellipse_curve(2.0, 1.0, 512)).length).epsilon(1e-5));
}

TEST_CASE("resampling changes the vertex count on request") {
    const SampledCurve out = resample(circle_curve(1.0, 128), 200);
    CHECK(out.size() == 200);
    for (const Vec2& p : out.points)
        CHECK(p.norm() == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("resampling is deterministic") {
    const SampledCurve curve = wobble_curve(1.0, 0.1, 5, 7, 256);
    const SampledCurve a = resample(curve, 256);
    const SampledCurve b = resample(curve, 256);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].x == b[i].x);
        CHECK(a[i].y == b[i].y);
    }
}

TEST_CASE("resampling rejects degenerate output sizes") {
    CHECK_THROWS_AS((void)resample(circle_curve(1.0, 64), 7), std::invalid_argument);
}
