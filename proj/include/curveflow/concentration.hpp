#pragma once

/// @file concentration.hpp
/// Scale-invariant curvature concentration: the product of in-ball
/// length and in-ball integral of k^2, its supremum over ball centers,
/// the critical radius, lifespan-bound monitoring and the discrete
/// blowup rescaling about the concentration center.

#include <cstddef>
#include <vector>

#include "curveflow/curve.hpp"
#include "curveflow/flow.hpp"

namespace curveflow {

enum class CutoffProfile {
    sharp,   ///< characteristic function of the ball
    smooth,  ///< radial quartic bump, 1 on B_{rho/2}, 0 outside B_rho
};

struct CutoffSpec {
    Vec2 center;
    double rho = 0.0;
    CutoffProfile profile = CutoffProfile::sharp;
};

/// Radial profile of the smooth cutoff at distance r from the center:
/// (1 - u^2)^2 with u = (r - rho/2)/(rho/2) on the transition annulus.
/// Satisfies the sandwich chi_{B_{rho/2}} <= phi <= chi_{B_rho} and
/// |phi'| <= 4 / rho (declared gradient constant c = 4).
double smooth_cutoff(double r, double rho);

/// L_{B_rho(x)} * int_{gamma^{-1}(B_rho(x))} k^2 ds for the sharp
/// profile, with the ball-edge intersections clipped exactly (line to
/// circle quadratic) and k^2 piecewise constant on half-edges. For the
/// smooth profile, the phi^4-weighted product (int phi^4 ds)(int k^2
/// phi^4 ds) with vertex quadrature. Empty intersection gives 0.
double local_concentration(const SampledCurve& curve, Vec2 x, double rho,
                           CutoffProfile profile = CutoffProfile::sharp);

/// Precomputed sharp-profile data shared across many center evaluations:
/// the vertex positions and the per-vertex k^2 used with half-edge
/// weights. Covering the whole curve reproduces L * int k^2 ds exactly.
struct ConcentrationField {
    std::vector<Vec2> points;
    std::vector<double> k2;

    static ConcentrationField from_curve(const SampledCurve& curve);
};

/// Sharp local concentration evaluated against a precomputed field.
double sharp_concentration(const ConcentrationField& field, Vec2 x, double rho);

/// Candidate centers for the supremum: every curve vertex plus a
/// bounding-box grid of pitch rho/4 anchored at the bounding-box min
/// corner (so a rho/8 grid is a superset).
std::vector<Vec2> concentration_candidates(const SampledCurve& curve, double rho);

struct SupConcentration {
    double eps = 0.0;
    Vec2 xstar;
};

/// Maximum of local_concentration (sharp) over the candidate centers;
/// ties resolved toward the first candidate, so the result does not
/// depend on evaluation order or thread count.
SupConcentration sup_concentration(const SampledCurve& curve, double rho);

struct CriticalRadius {
    double r = 0.0;
    /// eps1 at or above the full-curve product L * int k^2 ds: every
    /// radius satisfies the bound and r is pinned at 2 * diameter.
    bool unconstrained = false;
};

/// r = sup{ rho : sup_x concentration(x, rho) <= eps1 }, by bisection
/// over [1e-6 L, 2 diameter]; eps(rho) is nondecreasing in rho for the
/// sharp profile, so the bisection is well posed. Requires eps1 > 0.
CriticalRadius critical_radius(const SampledCurve& curve, double eps1,
                               double tolerance = 1e-4);

/// Variant restricted to on-curve candidates (the curve vertices only),
/// for diagnosing how much interior centers contribute to the sup.
CriticalRadius critical_radius_vertex_only(const SampledCurve& curve, double eps1,
                                           double tolerance = 1e-4);

/// Lifespan-bound monitoring on a trajectory: checks the initial
/// smallness sup_x eps(x, rho) <= eps1, tracks the concentration at
/// radius rho/2 over the stored snapshots, and fits the smallest
/// empirical constant c0 with
///   eps_{rho/2}(t) <= eps(0) + c0 t (1 + rho^{-2}) eps1,
/// reporting the implied existence lower bound rho^2 / c0.
struct LifespanRow {
    double t = 0.0;
    double eps_half = 0.0;  ///< sup concentration at radius rho / 2
    bool convex = false;    ///< excluded from the fit (theorem hypothesis)
};

struct LifespanReport {
    bool hypothesis_ok = false;  ///< eps(0) <= eps1 at radius rho
    double eps0 = 0.0;
    std::vector<LifespanRow> rows;
    double c0_star = 0.0;          ///< 0 when the concentration never grows
    double implied_bound = 0.0;    ///< rho^2 / c0_star (inf when c0_star = 0)
    std::size_t convex_excluded = 0;
};

LifespanReport lifespan_monitor(const Trajectory& trajectory, double rho, double eps1);

/// Weighted-cutoff inequality margins at one center: with phi the
/// smooth cutoff, computes Lphi4 = int phi^4 ds, int k^4 phi^4 ds,
/// int k_s^2 phi^4 ds and eps = sup-concentration at radius rho, and
/// reports the smallest c with
///   Lphi4 int k^4 phi^4 <= 1/2 Lphi4 int k_s^2 phi^4 + c eps^2 / rho^2.
/// smallness_ok records whether eps <= 1/16; when it fails the numbers
/// are still reported but no inequality claim is attached.
struct CutoffMargins {
    double lhs = 0.0;      ///< Lphi4 * int k^4 phi^4 ds
    double ks_term = 0.0;  ///< 1/2 * Lphi4 * int k_s^2 phi^4 ds
    double eps = 0.0;
    double empirical_c = 0.0;
    bool smallness_ok = false;
};

CutoffMargins cutoff_inequality_monitor(const SampledCurve& curve, Vec2 x, double rho);

/// Discrete blowup rescaling about time t: with r the critical radius
/// and x the concentration center of the snapshot nearest t, emits
/// gamma_v = (1/r)(gamma_{t + v r^2} - x) for the stored snapshots
/// falling on a uniform v grid over [0, v_max]. The frames solve curve
/// shortening flow up to the additive speed sigma2 * r; the residual is
/// the worst normal-projected velocity mismatch
///   max | <dgamma/dv, nu> - sigma1 k - sigma2 r |
/// over consecutive frame pairs. Throws std::invalid_argument when the
/// snapshots near t are too sparse for the requested grid.
struct BlowupFrame {
    double v = 0.0;
    SampledCurve curve;
    /// Count of properly crossing non-adjacent edge pairs; 0 for an
    /// embedded polygon.
    std::size_t self_intersections = 0;
};

/// Number of transversally crossing non-adjacent edge pairs of the
/// closed polygon (0 exactly when the polygon is simple).
std::size_t self_intersection_count(const SampledCurve& curve);

struct BlowupResult {
    double r_t = 0.0;
    Vec2 x_t;
    double sigma2_rt = 0.0;  ///< the additive speed sigma2 * r_t
    std::vector<BlowupFrame> frames;
    double velocity_residual = 0.0;
};

BlowupResult blowup_rescale(const Trajectory& trajectory, double t, double eps1,
                            double v_max = 1.0, std::size_t frame_count = 5);

}  // namespace curveflow
