#pragma once

/// @file io.hpp
/// File formats: curve JSON {"points": [[x,y],...]} and CSV (x,y rows,
/// closed implicitly), angle-profile CSV (theta,k rows), and the
/// JSON-lines series written by runs. Numbers are emitted with %.17g so
/// round-trips are exact; JSON has no NaN literal, so non-finite values
/// are written as null and read back as NaN.

#include <filesystem>
#include <string>

#include "curveflow/curve.hpp"
#include "curveflow/flow.hpp"
#include "curveflow/profile.hpp"

namespace curveflow {

/// %.17g rendering of one number, "null" when not finite.
std::string json_number(double value);

void write_curve_json(const std::filesystem::path& path, const SampledCurve& curve);
SampledCurve read_curve_json(const std::filesystem::path& path);

void write_curve_csv(const std::filesystem::path& path, const SampledCurve& curve);
SampledCurve read_curve_csv(const std::filesystem::path& path);

void write_profile_csv(const std::filesystem::path& path, const AngleProfile& profile);
AngleProfile read_profile_csv(const std::filesystem::path& path);

/// Loads a curve from either format, keyed on the file extension
/// (".json" or ".csv"); throws std::invalid_argument otherwise.
SampledCurve read_curve_file(const std::filesystem::path& path);

/// One trajectory record as a JSON-lines row with the fixed key order
/// {t, L, A, omega, E, k_min, k_max, int_k2, int_F2, ks_norm2, entropy},
/// followed by the two informational keys {k_star, resampled}.
std::string trajectory_record_line(const DiagnosticsRecord& record);

/// Parses a trajectory row back (omega rounded to int, null -> NaN).
DiagnosticsRecord parse_trajectory_record(const std::string& line);

/// Rescaled-series row. The per-snapshot fields (R, intQ2rho, defect,
/// f, Ehat) stay NaN on records with no stored snapshot and are written
/// as null.
struct RescaledRow {
    double that = 0.0;
    double Lhat = 0.0;
    double Ahat = 0.0;
    double khat_min = 0.0;
    double khat_max = 0.0;
    double kshat_norm2 = 0.0;
    double R = std::numeric_limits<double>::quiet_NaN();
    double intQ2rho = std::numeric_limits<double>::quiet_NaN();
    double defect = std::numeric_limits<double>::quiet_NaN();
    double f = std::numeric_limits<double>::quiet_NaN();
    double Ehat = std::numeric_limits<double>::quiet_NaN();
};

/// Key order {that, Lhat, Ahat, khat_min, khat_max, kshat_norm2, R,
/// intQ2rho, defect, f, Ehat}.
std::string rescaled_row_line(const RescaledRow& row);
RescaledRow parse_rescaled_row(const std::string& line);

/// Concentration-series row; key order {t, rho, eps, xstar, r_crit}
/// with xstar a two-element array.
struct ConcentrationRow {
    double t = 0.0;
    double rho = 0.0;
    double eps = 0.0;
    Vec2 xstar;
    double r_crit = std::numeric_limits<double>::quiet_NaN();
};

std::string concentration_row_line(const ConcentrationRow& row);
ConcentrationRow parse_concentration_row(const std::string& line);

}  // namespace curveflow
