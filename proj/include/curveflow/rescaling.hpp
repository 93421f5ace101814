#pragma once

/// @file rescaling.hpp
/// Continuous rescaling of a trajectory about its extinction point:
/// gammahat = phi (gamma - O) with phi = (2T - 2t)^{-1/2} in rescaled
/// time that = -1/2 log(1 - t/T). On top of the rescaled states:
/// Gaussian-weighted length monotonicity, the stationary limit-shape
/// residual, decay of the rescaled curvature gradient, and the rescaled
/// entropy quantities for convex runs.

#include <cstddef>
#include <utility>
#include <vector>

#include "curveflow/curve.hpp"
#include "curveflow/flow.hpp"

namespace curveflow {

/// Scalar diagnostics of one record after rescaling.
struct RescaledState {
    double t = 0.0;
    double that = 0.0;
    double phi = 0.0;
    double Lhat = 0.0;
    double Ahat = 0.0;
    double khat_min = 0.0;
    double khat_max = 0.0;
    double kshat_norm2 = 0.0;  ///< integral khat_shat^2 dshat = ks_norm2 / phi^3
};

struct RescaledSnapshot {
    double t = 0.0;
    double that = 0.0;
    double phi = 0.0;
    SampledCurve curve;              ///< phi (gamma - O)
    std::vector<double> profile_k;   ///< khat = k / phi samples when available
};

struct RescaledTrajectory {
    double T = 0.0;
    Vec2 origin;
    FlowParams params;
    std::vector<RescaledState> states;
    std::vector<RescaledSnapshot> snapshots;
};

/// Extinction point estimate: area centroid of the final snapshot plus
/// the remaining centroid drift over (t_last, T), with the drift
/// velocity fitted over the last few snapshots. Throws
/// std::invalid_argument with fewer than 2 snapshots.
Vec2 extinction_point(const Trajectory& trajectory, double T);

/// Maps every record and snapshot; throws std::invalid_argument unless
/// T exceeds the last record time.
RescaledTrajectory rescale(const Trajectory& trajectory, double T, Vec2 origin);

/// Convergence of Ahat toward sigma1 * pi. Requires at least 10 states
/// with that >= 2. fitted_rate is the least-squares exponential decay
/// rate of |Ahat - sigma1 pi| over those states.
struct AreaLimitReport {
    double final_gap = 0.0;
    double final_that = 0.0;
    double fitted_rate = 0.0;
};
AreaLimitReport rescaled_area_limit(const RescaledTrajectory& rescaled);

/// Gaussian-weighted length R = int rho dshat with rho =
/// exp(-|gammahat|^2 / (2 sigma1)), the dissipation integral int Q^2 rho
/// dshat with Q = <gammahat, nuhat>/sqrt(sigma1) + sqrt(sigma1) khat +
/// (sqrt(2T) sigma2 / (2 sqrt(sigma1))) e^{-that}, and the defect term
/// (T sigma2^2 / (2 sigma1)) e^{-2 that} R.
struct MonotonicityRecord {
    double that = 0.0;
    double R = 0.0;
    double intQ2rho = 0.0;
    double defect = 0.0;
};

struct MonotonicityReport {
    std::vector<MonotonicityRecord> records;
    /// Max over consecutive pairs of |dR/dthat + avg(intQ2rho) -
    /// avg(defect)| (midpoint scheme, second order in the pair spacing).
    double max_residual = 0.0;
    /// Max over consecutive pairs of R_next - R_prev; nonpositive means
    /// R is nonincreasing everywhere.
    double max_increase = 0.0;
    /// First that from which R is nonincreasing for the rest of the run
    /// (NaN when the final pair still increases).
    double nonincreasing_from = 0.0;
};

/// Evaluates every stride-th snapshot; stride > 1 coarsens the record
/// density, which is how the residual's convergence order is probed.
MonotonicityReport monotonicity_track(const RescaledTrajectory& rescaled, std::size_t stride = 1);

/// Residual of the stationary equation <gammahat, nuhat> + sigma1 khat =
/// 0 on one rescaled curve, in the max and L2(dshat) norms, plus the
/// mean-distance circle radius fit about the area centroid.
struct LimitShapeResidual {
    double linf = 0.0;
    double l2 = 0.0;
    double fitted_radius = 0.0;
};
LimitShapeResidual limit_shape_residual(const SampledCurve& rescaled_curve, double sigma1);

/// Time series of Lhat * ||khat_shat||_2^2 with a least-squares
/// exponential rate fitted over that in [fit_from, fit_to], and the
/// first that from which min khat stays positive (eventual convexity).
struct KsDecayReport {
    std::vector<std::pair<double, double>> series;  ///< (that, Lhat * kshat_norm2)
    double fitted_rate = 0.0;
    bool eventually_convex = false;
    double first_convex_that = 0.0;  ///< NaN when never convex
};
KsDecayReport ks_decay_track(const RescaledTrajectory& rescaled, double fit_from = 0.25,
                             double fit_to = 3.0);

/// Rescaled entropy quantities per profile-carrying snapshot:
///   u = -1 + sigma1 khat (khat_thth + khat) - 2 sqrt(2T) e^{-that} sigma2 khat
///   f = int u dthat,  Ehat = (1/2pi) int log khat dthat,
/// and e^{-that} khat_max.
struct EntropyRecord {
    double that = 0.0;
    double f = 0.0;
    double Ehat = 0.0;
    double ek_max = 0.0;
};

struct EntropyReport {
    std::vector<EntropyRecord> records;
    /// First that after which f stays below +1e-3 (NaN when never).
    double that0 = 0.0;
    double sup_Ehat = 0.0;
    /// Growth of the running max of Ehat over that >= 3; small values
    /// mean the upper bound has stabilized. With sigma2 > 0 this decays
    /// like e^{-that} rather than vanishing at that = 3, so also see
    /// stabilization_that.
    double runmax_increase_after_3 = 0.0;
    /// First that >= 3 from which the running max of Ehat grows by at
    /// most 1e-3 through the end of the run (NaN when that never
    /// happens): the time at which the upper bound has stabilized.
    double stabilization_that = 0.0;
    double final_ek_max = 0.0;
    std::size_t skipped = 0;  ///< snapshots without profile samples
};

/// Throws std::invalid_argument when no snapshot carries profile samples.
EntropyReport rescaled_entropy_track(const RescaledTrajectory& rescaled);

}  // namespace curveflow
