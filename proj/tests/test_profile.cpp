#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "curveflow/curve.hpp"
#include "curveflow/presets.hpp"
#include "curveflow/profile.hpp"

using namespace curveflow;

namespace {
constexpr double kPi = 3.141592653589793238462643383279;
}

TEST_CASE("angle profile grid accessors") {
    const AngleProfile profile = circle_profile(1.0, 32);
    CHECK(profile.size() == 32);
    CHECK(profile.grid_step() == doctest::Approx(2.0 * kPi / 32.0).epsilon(1e-16));
    CHECK(profile.theta(8) == doctest::Approx(kPi / 2.0).epsilon(1e-15));
}

TEST_CASE("profile validation") {
    AngleProfile small;
    small.k.assign(8, 1.0);
    CHECK_THROWS_AS(validate(small), std::invalid_argument);

    AngleProfile flat = circle_profile(1.0, 32);
    flat.k[5] = 0.0;
    CHECK_THROWS_AS(validate(flat), std::invalid_argument);

    AngleProfile bad = circle_profile(1.0, 32);
    bad.k[5] = std::nan("");
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
}

TEST_CASE("circle profile closes and reconstructs a circle") {
    const double radius = 1.5;
    const AngleProfile profile = circle_profile(radius, 256);

    const auto [rx, ry] = closure_residual(profile);
    CHECK(std::abs(rx) < 1e-12);
    CHECK(std::abs(ry) < 1e-12);
    CHECK(profile_length(profile) == doctest::Approx(2.0 * kPi * radius).epsilon(1e-14));

    const SampledCurve curve = reconstruct_from_curvature(profile);
    Vec2 center{0.0, 0.0};
    for (const Vec2& p : curve.points) center += p;
    center = center / static_cast<double>(curve.size());
    for (const Vec2& p : curve.points)
        CHECK((p - center).norm() == doctest::Approx(radius).epsilon(5e-4));
}

TEST_CASE("ellipse profile pinned values and closed forms") {
    const AngleProfile profile = ellipse_profile(2.0, 1.0, 512);

    // Perimeter: frozen, and against 4 a E(e) with e^2 = 1 - b^2/a^2.
    const double length = profile_length(profile);
    CHECK(length == doctest::Approx(9.6884482205476825).epsilon(1e-15));
    CHECK(std::abs(length - 8.0 * std::comp_ellint_2(std::sqrt(3.0) / 2.0)) < 1e-12);

    // Entropy integral log k dtheta = 6 pi log(3/2) - 2 pi log 4.
    const double entropy = entropy_theta(profile);
    const double closed = 6.0 * kPi * std::log(1.5) - 2.0 * kPi * std::log(4.0);
    CHECK(entropy == doctest::Approx(-1.0675071316968052).epsilon(1e-13));
    CHECK(std::abs(entropy - closed) < 1e-12);
    CHECK(normalized_entropy(profile) == doctest::Approx(entropy / (2.0 * kPi)).epsilon(1e-15));
    CHECK(length_normalized_entropy(profile) ==
          doctest::Approx(entropy / length).epsilon(1e-15));

    // Median curvature: every pi-window spans a full period of k, so
    // k* is the global minimum b / a^2 exactly.
    CHECK(median_curvature(profile) == 0.25);
}

TEST_CASE("ellipse profile reconstructs the implicit ellipse") {
    const AngleProfile profile = ellipse_profile(2.0, 1.0, 512);
    const SampledCurve curve = reconstruct_from_curvature(profile, ellipse_anchor(2.0, 1.0));
    for (const Vec2& p : curve.points) {
        const double implicit = (p.x / 2.0) * (p.x / 2.0) + p.y * p.y;
        CHECK(implicit == doctest::Approx(1.0).epsilon(2e-3));
    }
}

TEST_CASE("closure projection restores the closure conditions") {
    AngleProfile skewed = ellipse_profile(2.0, 1.0, 128);
    for (std::size_t j = 0; j < skewed.size(); ++j)
        skewed.k[j] += 0.02 * std::cos(skewed.theta(j));
    const auto [rx, ry] = closure_residual(skewed);
    CHECK(std::abs(rx) + std::abs(ry) > closure_tolerance(skewed));
    CHECK_THROWS_AS((void)reconstruct_from_curvature(skewed), std::invalid_argument);

    const AngleProfile projected = project_closure(skewed);
    const auto [px, py] = closure_residual(projected);
    CHECK(std::abs(px) < 1e-12);
    CHECK(std::abs(py) < 1e-12);
    CHECK_NOTHROW((void)reconstruct_from_curvature(projected));
}

TEST_CASE("median curvature of the circle profile") {
    CHECK(median_curvature(circle_profile(2.0, 64)) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("profile from polygon matches the exact ellipse profile") {
    const ProfileFromPolygon converted =
        profile_from_polygon(ellipse_curve(2.0, 1.0, 2048), 512);
    const AngleProfile exact = ellipse_profile(2.0, 1.0, 512);
    REQUIRE(converted.profile.size() == exact.size());
    for (std::size_t j = 0; j < exact.size(); ++j)
        CHECK(converted.profile.k[j] == doctest::Approx(exact.k[j]).epsilon(2e-3));
    CHECK(converted.anchor.x == doctest::Approx(0.0).epsilon(1e-3));
    CHECK(converted.anchor.y == doctest::Approx(-1.0).epsilon(1e-3));
}

TEST_CASE("profile from polygon requires strict convexity") {
    CHECK_THROWS_AS((void)profile_from_polygon(flower_curve(1.0, 0.3, 3, 512), 128),
                    std::invalid_argument);
}
