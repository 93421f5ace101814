#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "curveflow/curve.hpp"
#include "curveflow/flow.hpp"
#include "curveflow/presets.hpp"
#include "curveflow/profile.hpp"
#include "curveflow/runner.hpp"

using namespace curveflow;

namespace {

constexpr double kPi = 3.141592653589793238462643383279;

FlowParams params_with(double sigma1, double sigma2, double cfl) {
    FlowParams params;
    params.sigma1 = sigma1;
    params.sigma2 = sigma2;
    params.cfl_factor = cfl;
    return params;
}

}  // namespace

TEST_CASE("flow parameter validation") {
    CHECK_NOTHROW(validate(params_with(1.0, 0.0, 1.0)));
    CHECK_THROWS_AS(validate(params_with(0.0, 1.0, 0.5)), std::invalid_argument);
    CHECK_THROWS_AS(validate(params_with(1.0, -0.1, 0.5)), std::invalid_argument);
    CHECK_THROWS_AS(validate(params_with(1.0, 1.0, 0.0)), std::invalid_argument);
    CHECK_THROWS_AS(validate(params_with(1.0, 1.0, 1.5)), std::invalid_argument);
}

TEST_CASE("default stop parameters") {
    FlowParams params;
    params.area_floor = 0.0;
    params.k_cap = 0.0;
    const FlowParams filled = with_default_stops(params, 10.0, 4.0);
    CHECK(filled.area_floor == doctest::Approx(4e-3).epsilon(1e-15));
    CHECK(filled.k_cap == doctest::Approx(1e3).epsilon(1e-15));

    params.area_floor = 0.25;
    params.k_cap = 77.0;
    const FlowParams kept = with_default_stops(params, 10.0, 4.0);
    CHECK(kept.area_floor == 0.25);
    CHECK(kept.k_cap == 77.0);
}

TEST_CASE("polygon time step formula") {
    const SampledCurve curve = circle_curve(1.0, 128);
    const CurveGeometry geom = geometry(curve);
    const FlowParams params = params_with(2.0, 0.5, 0.25);
    const double ds = *std::min_element(geom.edge_len.begin(), geom.edge_len.end());
    double fmax = 0.0;
    for (const double k : geom.curvature)
        fmax = std::max(fmax, std::abs(params.sigma1 * k + params.sigma2));
    const double expected =
        std::min(params.cfl_factor * ds * ds / (2.0 * params.sigma1), 0.2 * ds / fmax);
    CHECK(polygon_time_step(geom, params) == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("one polygon step moves a regular polygon radially") {
    const std::size_t n = 64;
    const double radius = 1.0;
    const SampledCurve curve = circle_curve(radius, n);
    const CurveGeometry geom = geometry(curve);
    const FlowParams params = params_with(1.0, 0.5, 0.5);
    const double dt = 1e-4;
    const SampledCurve next = step_polygon(curve, params, dt);
    const double k = geom.curvature[0];
    const double shrink = 1.0 - (params.sigma1 * k + params.sigma2) * dt / radius;
    for (std::size_t i = 0; i < n; ++i) {
        CHECK(next[i].x == doctest::Approx(curve[i].x * shrink).epsilon(1e-12));
        CHECK(next[i].y == doctest::Approx(curve[i].y * shrink).epsilon(1e-12));
    }
}

TEST_CASE("theta step on a uniform profile is the pointwise reaction update") {
    const AngleProfile profile = circle_profile(0.5, 64);
    const FlowParams params = params_with(1.5, 0.25, 0.5);
    const double dt = 1e-3;
    const AngleProfile next = step_theta(profile, params, dt);
    const double k = 2.0;
    const double expected = k + dt * (params.sigma1 * k * k * k + params.sigma2 * k * k);
    for (const double value : next.k)
        CHECK(value == doctest::Approx(expected).epsilon(1e-13));
}

TEST_CASE("theta time step formula") {
    const AngleProfile profile = ellipse_profile(2.0, 1.0, 64);
    const FlowParams params = params_with(1.0, 1.0, 0.004);
    const double kmax = *std::max_element(profile.k.begin(), profile.k.end());
    const double expected =
        params.cfl_factor / (4.0 * (params.sigma1 * kmax * kmax + params.sigma2 * kmax));
    CHECK(theta_time_step(profile, params) == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("anchor velocity of the circle profile") {
    const AngleProfile profile = circle_profile(2.0, 64);
    const FlowParams params = params_with(1.0, 0.5, 0.5);
    const Vec2 v = anchor_velocity(profile, params);
    CHECK(v.x == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(v.y == doctest::Approx(1.0 / 2.0 + 0.5).epsilon(1e-14));
}

TEST_CASE("maximal time upper bound") {
    const FlowParams params = params_with(2.0, 0.5, 0.5);
    CHECK(maximal_time_upper_bound(10.0, 4.0, params) ==
          doctest::Approx(std::min(10.0 / (2.0 * kPi * 0.5), 4.0 / (2.0 * kPi * 2.0)))
              .epsilon(1e-14));
    // sigma2 = 0 leaves only the area bound.
    CHECK(maximal_time_upper_bound(10.0, 4.0, params_with(1.0, 0.0, 0.5)) ==
          doctest::Approx(4.0 / (2.0 * kPi)).epsilon(1e-14));
}

TEST_CASE("nonconvex threshold closed form") {
    const FlowParams params = params_with(1.0, 1.0, 0.5);
    const double t_max = 0.5, alpha = 1.0;
    const double expected = (std::sqrt(25.0 + 14.0 * (2.0 - alpha) / t_max) - 5.0) / 14.0;
    CHECK(nonconvex_threshold(params, t_max, alpha) ==
          doctest::Approx(expected).epsilon(1e-14));
    CHECK(expected == doctest::Approx(0.16286499209146559).epsilon(1e-15));
    CHECK_THROWS_AS((void)nonconvex_threshold(params, t_max, 0.0), std::invalid_argument);
    CHECK_THROWS_AS((void)nonconvex_threshold(params, t_max, 2.0), std::invalid_argument);

    const CurveGeometry convex = geometry(flower_curve(1.0, 0.0015, 3, 1024));
    const double bound = nonconvex_threshold(
        params, maximal_time_upper_bound(convex.length, convex.area, params), alpha);
    CHECK(threshold_functional(convex) < bound);
    CHECK(nonconvex_threshold_holds(convex, params,
          maximal_time_upper_bound(convex.length, convex.area, params), alpha));

    const CurveGeometry spiky = geometry(flower_curve(1.0, 0.3, 3, 1024));
    CHECK_FALSE(nonconvex_threshold_holds(
        spiky, params, maximal_time_upper_bound(spiky.length, spiky.area, params), alpha));
}

TEST_CASE("polygon evolution of a circle under curve shortening") {
    FlowParams params = params_with(1.0, 0.0, 0.2);
    params.area_floor = 0.05 * kPi;
    const Trajectory traj = evolve_polygon(circle_curve(1.0, 128), params);

    CHECK(traj.termination == Termination::area_floor);
    CHECK(traj.solver == SolverKind::polygon);
    REQUIRE(traj.records.size() > 10);
    for (std::size_t i = 1; i < traj.records.size(); ++i) {
        CHECK(traj.records[i].t > traj.records[i - 1].t);
        CHECK(traj.records[i].length < traj.records[i - 1].length);
        CHECK(traj.records[i].area < traj.records[i - 1].area);
        CHECK(traj.records[i].winding == 1);
    }
    // Discrete radius law: R^2 decays at rate 2 sigma1 c_N with
    // c_N = (pi/N) / sin(pi/N), the regular-polygon curvature factor.
    const double c_n = (kPi / 128.0) / std::sin(kPi / 128.0);
    const DiagnosticsRecord& last = traj.records.back();
    const double r_last = last.length / (2.0 * kPi);
    const double expected_t = (1.0 - r_last * r_last) / (2.0 * c_n);
    CHECK(last.t == doctest::Approx(expected_t).epsilon(2e-2));
}

TEST_CASE("polygon evolution identities on a short ellipse run") {
    FlowParams params = params_with(1.0, 1.0, 0.05);
    params.t_cap = 0.2;
    const Trajectory traj = evolve_polygon(ellipse_curve(2.0, 1.0, 256), params);
    CHECK(traj.termination == Termination::t_cap);
    const IdentityReport report = verify_identities(traj);
    CHECK(report.windows > 100);
    CHECK(report.max_residual() < 1e-2);
}

TEST_CASE("identity verification needs three records") {
    Trajectory traj;
    traj.records.resize(2);
    CHECK_THROWS_AS((void)verify_identities(traj), std::invalid_argument);
}

TEST_CASE("theta evolution keeps min k nondecreasing and terminates at the floor") {
    FlowParams params = params_with(1.0, 1.0, 0.01);
    const Trajectory traj =
        evolve_theta(ellipse_profile(2.0, 1.0, 128), ellipse_anchor(2.0, 1.0), params);

    CHECK(traj.termination == Termination::area_floor);
    CHECK(traj.solver == SolverKind::theta);
    REQUIRE(traj.records.size() > 10);
    for (std::size_t i = 1; i < traj.records.size(); ++i) {
        CHECK(traj.records[i].k_min >= traj.records[i - 1].k_min - 1e-12);
        CHECK(traj.records[i].winding == 1);
        CHECK(std::isfinite(traj.records[i].entropy));
        CHECK(std::isfinite(traj.records[i].k_star));
        CHECK(traj.records[i].curvature_ratio >= 1.0);
    }
    for (const Snapshot& snapshot : traj.snapshots)
        CHECK(snapshot.profile_k.size() == 128);

    const ExtinctionEstimate est = extinction_estimate(traj);
    CHECK(est.available);
    CHECK(est.refined > traj.records.back().t);
    CHECK(est.refined <=
          maximal_time_upper_bound(traj.records.front().length,
                                   traj.records.front().area, params) +
              1e-3);
    CHECK(est.naive == doctest::Approx(est.refined).epsilon(1e-2));
}

TEST_CASE("theta evolution extinction oracle for curve shortening") {
    // sigma2 = 0 circle: A' = -2 pi sigma1, so T = A0 / (2 pi) = R^2 / 2.
    FlowParams params = params_with(1.0, 0.0, 0.004);
    params.area_floor = 1e-5 * kPi;
    const Trajectory traj = evolve_theta(circle_profile(1.0, 64), {0.0, -1.0}, params);
    CHECK(traj.termination == Termination::area_floor);
    const ExtinctionEstimate est = extinction_estimate(traj);
    REQUIRE(est.available);
    CHECK(est.refined == doctest::Approx(0.5).epsilon(2e-3));
}

TEST_CASE("extinction estimate is unavailable without an area-floor stop") {
    FlowParams params = params_with(1.0, 1.0, 0.05);
    params.t_cap = 0.05;
    const Trajectory traj = evolve_polygon(circle_curve(1.0, 64), params);
    CHECK(traj.termination == Termination::t_cap);
    CHECK_FALSE(extinction_estimate(traj).available);
}

TEST_CASE("speed bounds hold on a convex theta run") {
    FlowParams params = params_with(1.0, 1.0, 0.01);
    EvolveOptions options;
    options.snapshot_interval = 50;
    const Trajectory traj =
        evolve_theta(ellipse_profile(2.0, 1.0, 128), ellipse_anchor(2.0, 1.0), params, options);
    const SpeedBoundsReport report = speed_bounds(traj, params);
    CHECK(report.profiles_checked == traj.snapshots.size());
    CHECK(report.M > 0.0);
    CHECK(report.M1 >= 2.0 * kPi * report.M - 1e-12);
    CHECK(report.min_gradient_margin >= -1e-10);
    CHECK(report.min_total_margin >= -1e-10);
    CHECK(report.min_window_margin >= -1e-10);

    FlowParams poly_params = params_with(1.0, 1.0, 0.2);
    poly_params.t_cap = 0.01;
    const Trajectory poly = evolve_polygon(circle_curve(1.0, 64), poly_params);
    CHECK_THROWS_AS((void)speed_bounds(poly, poly_params), std::invalid_argument);
}

TEST_CASE("polygon evolution is deterministic") {
    FlowParams params = params_with(1.0, 1.0, 0.2);
    params.t_cap = 0.05;
    const Trajectory a = evolve_polygon(wobble_curve(1.0, 0.1, 5, 42, 128), params);
    const Trajectory b = evolve_polygon(wobble_curve(1.0, 0.1, 5, 42, 128), params);
    REQUIRE(a.records.size() == b.records.size());
    REQUIRE(a.snapshots.size() == b.snapshots.size());
    const SampledCurve& fa = a.snapshots.back().curve;
    const SampledCurve& fb = b.snapshots.back().curve;
    REQUIRE(fa.size() == fb.size());
    for (std::size_t i = 0; i < fa.size(); ++i) {
        CHECK(fa[i].x == fb[i].x);
        CHECK(fa[i].y == fb[i].y);
    }
}

TEST_CASE("nonconvex flower convexifies under the polygon flow") {
    FlowParams params = params_with(1.0, 1.0, 0.2);
    params.t_cap = 0.2;
    const Trajectory traj = evolve_polygon(flower_curve(1.0, 0.3, 3, 256), params);
    CHECK(traj.records.front().k_min < 0.0);
    CHECK(traj.records.back().k_min > 0.0);
    for (const DiagnosticsRecord& record : traj.records) CHECK(record.winding == 1);
}

TEST_CASE("hybrid evolution hands off to the theta solver and collapses round") {
    FlowParams params = params_with(1.0, 1.0, 0.004);
    params.area_floor = 3e-6;
    EvolveOptions options;
    options.snapshot_interval = 200;
    options.record_interval = 4;
    const HybridResult hybrid =
        evolve_hybrid(flower_curve(1.0, 0.3, 3, 256), params, options, 256);

    CHECK(hybrid.handoff);
    CHECK(hybrid.handoff_t > 0.0);
    CHECK(hybrid.trajectory.termination == Termination::area_floor);
    CHECK(hybrid.trajectory.solver == SolverKind::theta);

    // The polygon leg starts nonconvex, min k crosses zero exactly once,
    // and the theta leg keeps it positive to the end.
    const auto& records = hybrid.trajectory.records;
    CHECK(records.front().k_min < 0.0);
    bool crossed = false;
    for (std::size_t i = 1; i < records.size(); ++i) {
        if (!crossed && records[i].k_min > 0.0 && records[i - 1].k_min <= 0.0) crossed = true;
        CHECK(records[i].t >= records[i - 1].t);
        if (records[i].t >= hybrid.handoff_t) CHECK(records[i].k_min > 0.0);
    }
    CHECK(crossed);
    CHECK(records.back().curvature_ratio < 1.01);
}

TEST_CASE("hybrid evolution without persistent convexity stays polygonal") {
    FlowParams params = params_with(1.0, 1.0, 0.2);
    params.t_cap = 0.02;
    HandoffPolicy policy;
    policy.streak = 1000000;
    const HybridResult hybrid =
        evolve_hybrid(flower_curve(1.0, 0.3, 3, 128), params, {}, 128, policy);
    CHECK_FALSE(hybrid.handoff);
    CHECK(hybrid.trajectory.solver == SolverKind::polygon);
    CHECK(hybrid.trajectory.termination == Termination::t_cap);
    CHECK(hybrid.trajectory.records.back().t == doctest::Approx(0.02).epsilon(1e-6));
}
