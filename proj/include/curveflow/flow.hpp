#pragma once

/// @file flow.hpp
/// Time evolution under the velocity F nu with F = sigma1 * k + sigma2.
/// Two solvers: a polygon solver (explicit Euler on the vertices, valid
/// for any embedded initial curve) and a tangent-angle solver for convex
/// data (semi-implicit update of k(theta), which keeps min k exactly
/// nondecreasing). Both produce the same Trajectory record format, and
/// the exact evolution laws
///   L' = -sigma1 * int k^2 ds - 2 pi omega sigma2
///   A' = -2 pi omega sigma1 - sigma2 * L
///   E' = -int F^2 ds
/// are checked a posteriori by verify_identities.

#include <cstddef>
#include <limits>
#include <vector>

#include "curveflow/curve.hpp"
#include "curveflow/profile.hpp"

namespace curveflow {

/// Parameters of the flow and of the run-control heuristics.
struct FlowParams {
    double sigma1 = 1.0;  ///< curvature coefficient, > 0 (length^2 / time)
    double sigma2 = 1.0;  ///< constant inward speed, >= 0 (length / time)

    double cfl_factor = 0.5;            ///< fraction of the stability limit, in (0, 1]
    std::size_t resample_interval = 50; ///< polygon solver: steps between arclength resamplings, 0 disables
    double area_floor = 0.0;            ///< stop when A falls below this (0: default 1e-3 * A0)
    double k_cap = 0.0;                 ///< stop when max k exceeds this (0: default 1e4 / L0)
    double t_cap = std::numeric_limits<double>::infinity();  ///< stop at this time
};

/// Throws std::invalid_argument unless sigma1 > 0, sigma2 >= 0 and
/// cfl_factor is in (0, 1].
void validate(const FlowParams& params);

/// Copy of params with area_floor and k_cap filled from the initial
/// length and area when they are unset (<= 0).
FlowParams with_default_stops(FlowParams params, double initial_length, double initial_area);

/// Scalar diagnostics stored at every accepted step. Convex-only fields
/// (entropy, k_star, curvature_ratio) are NaN when undefined.
struct DiagnosticsRecord {
    double t = 0.0;
    double length = 0.0;
    double area = 0.0;
    int winding = 0;
    double energy = 0.0;   ///< sigma1 * L + sigma2 * A
    double k_min = 0.0;
    double k_max = 0.0;
    double int_k2 = 0.0;   ///< integral k^2 ds
    double int_F2 = 0.0;   ///< integral F^2 ds
    double ks_norm2 = 0.0; ///< integral k_s^2 ds
    double entropy = 0.0;  ///< integral log(k) dtheta
    double k_star = 0.0;   ///< median curvature
    double curvature_ratio = 0.0;     ///< k_max / k_min
    double isoperimetric_ratio = 0.0; ///< L^2 / (4 pi A)
    bool resampled = false;  ///< discretization changed since the previous record
};

/// Stored curve state. Tangent-angle runs also carry the uniform-grid
/// curvature samples the curve was reconstructed from.
struct Snapshot {
    double t = 0.0;
    SampledCurve curve;
    std::vector<double> profile_k;
};

enum class Termination { running, area_floor, k_cap, t_cap, step_failure };
const char* to_string(Termination reason);

enum class SolverKind { polygon, theta };

struct Trajectory {
    FlowParams params;   ///< with stop defaults filled in
    SolverKind solver = SolverKind::polygon;
    std::vector<DiagnosticsRecord> records;
    std::vector<Snapshot> snapshots;
    Termination termination = Termination::running;
    std::size_t steps = 0;           ///< accepted steps
    std::size_t rejected_steps = 0;  ///< dt-halving retries spent
};

struct EvolveOptions {
    std::size_t snapshot_interval = 100;  ///< steps between stored snapshots
    std::size_t record_interval = 1;      ///< steps between diagnostics records
    double fixed_dt = 0.0;                ///< use this step instead of the adaptive one when > 0
};

/// Stability-limited step: cfl * min(ds)^2 / (2 sigma1), further capped
/// so no vertex moves more than a fifth of the shortest edge.
double polygon_time_step(const CurveGeometry& geom, const FlowParams& params);

/// One explicit Euler step: every vertex moves by (sigma1 k + sigma2) dt
/// along its inward normal.
SampledCurve step_polygon(const SampledCurve& curve, const FlowParams& params, double dt);

/// Accuracy-limited step for the tangent-angle solver, cfl / (4 (sigma1
/// k_max^2 + sigma2 k_max)); the diffusion term is implicit, so only the
/// explicit reaction terms constrain dt.
double theta_time_step(const AngleProfile& profile, const FlowParams& params);

/// One semi-implicit step of k_t = sigma1 k^2 k_thth + sigma1 k^3 +
/// sigma2 k^2: the second difference is implicit with the sigma1 k^2
/// coefficient frozen at the current step (periodic tridiagonal solve),
/// the reaction terms are explicit. The system matrix has unit row sums
/// and nonpositive off-diagonal entries, so the update is a convex
/// combination of the right-hand side and min k cannot decrease.
AngleProfile step_theta(const AngleProfile& profile, const FlowParams& params, double dt);

/// Velocity of the tangent-angle anchor point gamma(theta = 0): the
/// theta parametrization is preserved by adding the tangential component
/// -F_theta, so the anchor moves with F(0) nu(0) - F_theta(0) tau(0)
/// where tau(0) = (1, 0) and nu(0) = (0, 1).
Vec2 anchor_velocity(const AngleProfile& profile, const FlowParams& params);

/// Runs the polygon solver until a stop condition, recording diagnostics
/// every record_interval accepted steps and resampling to the original
/// vertex count every resample_interval steps.
Trajectory evolve_polygon(const SampledCurve& initial, const FlowParams& params,
                          const EvolveOptions& options = {});

/// Runs the tangent-angle solver from a strictly convex profile. The
/// evolving profile is never mutated by closure corrections (so min k is
/// exactly monotone); records and snapshots are produced from a
/// closure-projected copy, anchored at the tracked theta = 0 point
/// (Heun update of the anchor).
Trajectory evolve_theta(const AngleProfile& initial, Vec2 anchor, const FlowParams& params,
                        const EvolveOptions& options = {});

/// Relative residuals of the exact evolution laws for L, A and E,
/// formed with three-point finite differences over the record times.
/// Windows containing a resampling event are skipped: the discretization
/// changes there, so the finite difference is meaningless.
struct IdentityReport {
    double max_length_residual = 0.0;
    double max_area_residual = 0.0;
    double max_energy_residual = 0.0;
    std::size_t windows = 0;
    std::size_t skipped = 0;

    double max_residual() const;
};

/// Requires at least 3 records; throws std::invalid_argument otherwise.
IdentityReport verify_identities(const Trajectory& trajectory);

/// min{ L0 / (2 pi sigma2), A0 / (2 pi sigma1) }, an upper bound for the
/// extinction time.
double maximal_time_upper_bound(double initial_length, double initial_area,
                                const FlowParams& params);

/// Extinction time estimate from a run terminated by area_floor. naive
/// anchors the exact area law at the final record, T = t_last + A_last /
/// (2 pi omega sigma1 + sigma2 L_last); refined removes the leading
/// O(A^{3/2}) error of that anchor by a least-squares fit of the
/// per-record estimates against A^{3/2} over the final tenth of the
/// records, returning the intercept.
struct ExtinctionEstimate {
    bool available = false;
    double naive = 0.0;
    double refined = 0.0;

    double value() const { return refined; }
};

ExtinctionEstimate extinction_estimate(const Trajectory& trajectory);

/// Right-hand side of the eventual-convexity smallness condition on
/// sqrt(L0) ||k_s||_2:
///   (1 / (14 sigma1)) (sqrt(25 sigma2^2 + 14 sigma1 (2 - alpha) / T_max) - 5 sigma2)
/// for alpha in (0, 2); throws std::invalid_argument outside that range.
double nonconvex_threshold(const FlowParams& params, double t_max, double alpha);

/// Squared form of the same bound, against L0 ||k_s||_2^2.
double nonconvex_threshold_squared(const FlowParams& params, double t_max, double alpha);

/// True when sqrt(L) ||k_s||_2 of the given geometry is below the bound.
bool nonconvex_threshold_holds(const CurveGeometry& geom, const FlowParams& params,
                               double t_max, double alpha);

/// A priori speed bounds on convex tangent-angle runs. With M^2 =
/// sup(F^2 + F_theta^2) at the first stored profile and M1 = max{2 pi M,
/// 2 pi + 1/(2 pi)}, checks at every stored profile:
///   sup |F_theta| <= M + int |F| dtheta          (gradient bound)
///   F_max <= M1 (1 + int |F| dtheta)             (total bound)
///   F_max <= 2 F(theta) + M / (2 pi)             (window bound)
/// the last for all grid theta within 1/(4 pi) of the argmax of F.
/// Margins are the worst right-minus-left values; nonnegative margins
/// mean the bounds hold.
struct SpeedBoundsReport {
    double M = 0.0;
    double M1 = 0.0;
    double min_gradient_margin = 0.0;
    double min_total_margin = 0.0;
    double min_window_margin = 0.0;
    std::size_t profiles_checked = 0;
};

/// Uses the snapshots carrying profile samples; throws
/// std::invalid_argument if there are none.
SpeedBoundsReport speed_bounds(const Trajectory& trajectory, const FlowParams& params);

}  // namespace curveflow
