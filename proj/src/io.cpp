#include "curveflow/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace curveflow {

namespace {

using nlohmann::json;

void require(bool ok, const std::string& message) {
    if (!ok) throw std::invalid_argument(message);
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path);
    require(out.good(), "cannot open for writing: " + path.string());
    return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream in(path);
    require(in.good(), "cannot open for reading: " + path.string());
    return in;
}

double as_double(const json& value) {
    if (value.is_null()) return std::numeric_limits<double>::quiet_NaN();
    return value.get<double>();
}

json parse_object(const std::string& line) {
    json parsed = json::parse(line);
    require(parsed.is_object(), "expected a JSON object line");
    return parsed;
}

}  // namespace

std::string json_number(double value) {
    if (!std::isfinite(value)) return "null";
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

void write_curve_json(const std::filesystem::path& path, const SampledCurve& curve) {
    std::ofstream out = open_out(path);
    out << "{\"points\": [";
    for (std::size_t i = 0; i < curve.size(); ++i) {
        if (i) out << ", ";
        out << '[' << json_number(curve[i].x) << ", " << json_number(curve[i].y) << ']';
    }
    out << "]}\n";
}

SampledCurve read_curve_json(const std::filesystem::path& path) {
    std::ifstream in = open_in(path);
    json parsed = json::parse(in);
    require(parsed.is_object() && parsed.contains("points") && parsed["points"].is_array(),
            "curve JSON must be an object with a \"points\" array: " + path.string());
    SampledCurve curve;
    for (const json& entry : parsed["points"]) {
        require(entry.is_array() && entry.size() == 2,
                "curve JSON points must be [x, y] pairs: " + path.string());
        curve.points.push_back({entry[0].get<double>(), entry[1].get<double>()});
    }
    return curve;
}

void write_curve_csv(const std::filesystem::path& path, const SampledCurve& curve) {
    std::ofstream out = open_out(path);
    for (const Vec2& p : curve.points)
        out << json_number(p.x) << ',' << json_number(p.y) << '\n';
}

SampledCurve read_curve_csv(const std::filesystem::path& path) {
    std::ifstream in = open_in(path);
    SampledCurve curve;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string xs, ys;
        if (!std::getline(row, xs, ',') || !std::getline(row, ys)) continue;
        try {
            const double x = std::stod(xs);
            const double y = std::stod(ys);
            curve.points.push_back({x, y});
        } catch (const std::exception&) {
            // Header or comment row; CSV curves are bare coordinate pairs.
            continue;
        }
    }
    require(!curve.points.empty(), "no coordinate rows in " + path.string());
    return curve;
}

void write_profile_csv(const std::filesystem::path& path, const AngleProfile& profile) {
    std::ofstream out = open_out(path);
    for (std::size_t j = 0; j < profile.size(); ++j)
        out << json_number(profile.theta(j)) << ',' << json_number(profile.k[j]) << '\n';
}

AngleProfile read_profile_csv(const std::filesystem::path& path) {
    std::ifstream in = open_in(path);
    AngleProfile profile;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string ts, ks;
        if (!std::getline(row, ts, ',') || !std::getline(row, ks)) continue;
        try {
            (void)std::stod(ts);
            profile.k.push_back(std::stod(ks));
        } catch (const std::exception&) {
            continue;
        }
    }
    validate(profile);
    return profile;
}

SampledCurve read_curve_file(const std::filesystem::path& path) {
    const std::string ext = path.extension().string();
    if (ext == ".json") return read_curve_json(path);
    if (ext == ".csv") return read_curve_csv(path);
    throw std::invalid_argument("unsupported curve file extension (want .json or .csv): " +
                                path.string());
}

std::string trajectory_record_line(const DiagnosticsRecord& record) {
    std::ostringstream out;
    out << "{\"t\": " << json_number(record.t)
        << ", \"L\": " << json_number(record.length)
        << ", \"A\": " << json_number(record.area)
        << ", \"omega\": " << record.winding
        << ", \"E\": " << json_number(record.energy)
        << ", \"k_min\": " << json_number(record.k_min)
        << ", \"k_max\": " << json_number(record.k_max)
        << ", \"int_k2\": " << json_number(record.int_k2)
        << ", \"int_F2\": " << json_number(record.int_F2)
        << ", \"ks_norm2\": " << json_number(record.ks_norm2)
        << ", \"entropy\": " << json_number(record.entropy)
        << ", \"k_star\": " << json_number(record.k_star)
        << ", \"resampled\": " << (record.resampled ? "true" : "false") << '}';
    return out.str();
}

DiagnosticsRecord parse_trajectory_record(const std::string& line) {
    const json row = parse_object(line);
    DiagnosticsRecord record;
    record.t = as_double(row.at("t"));
    record.length = as_double(row.at("L"));
    record.area = as_double(row.at("A"));
    record.winding = row.at("omega").get<int>();
    record.energy = as_double(row.at("E"));
    record.k_min = as_double(row.at("k_min"));
    record.k_max = as_double(row.at("k_max"));
    record.int_k2 = as_double(row.at("int_k2"));
    record.int_F2 = as_double(row.at("int_F2"));
    record.ks_norm2 = as_double(row.at("ks_norm2"));
    record.entropy = as_double(row.at("entropy"));
    if (row.contains("k_star")) record.k_star = as_double(row.at("k_star"));
    if (row.contains("resampled")) record.resampled = row.at("resampled").get<bool>();
    if (record.k_min > 0.0) record.curvature_ratio = record.k_max / record.k_min;
    if (record.winding == 1 && record.area > 0.0)
        record.isoperimetric_ratio =
            record.length * record.length / (4.0 * M_PI * record.area);
    return record;
}

std::string rescaled_row_line(const RescaledRow& row) {
    std::ostringstream out;
    out << "{\"that\": " << json_number(row.that)
        << ", \"Lhat\": " << json_number(row.Lhat)
        << ", \"Ahat\": " << json_number(row.Ahat)
        << ", \"khat_min\": " << json_number(row.khat_min)
        << ", \"khat_max\": " << json_number(row.khat_max)
        << ", \"kshat_norm2\": " << json_number(row.kshat_norm2)
        << ", \"R\": " << json_number(row.R)
        << ", \"intQ2rho\": " << json_number(row.intQ2rho)
        << ", \"defect\": " << json_number(row.defect)
        << ", \"f\": " << json_number(row.f)
        << ", \"Ehat\": " << json_number(row.Ehat) << '}';
    return out.str();
}

RescaledRow parse_rescaled_row(const std::string& line) {
    const json row = parse_object(line);
    RescaledRow parsed;
    parsed.that = as_double(row.at("that"));
    parsed.Lhat = as_double(row.at("Lhat"));
    parsed.Ahat = as_double(row.at("Ahat"));
    parsed.khat_min = as_double(row.at("khat_min"));
    parsed.khat_max = as_double(row.at("khat_max"));
    parsed.kshat_norm2 = as_double(row.at("kshat_norm2"));
    parsed.R = as_double(row.at("R"));
    parsed.intQ2rho = as_double(row.at("intQ2rho"));
    parsed.defect = as_double(row.at("defect"));
    parsed.f = as_double(row.at("f"));
    parsed.Ehat = as_double(row.at("Ehat"));
    return parsed;
}

std::string concentration_row_line(const ConcentrationRow& row) {
    std::ostringstream out;
    out << "{\"t\": " << json_number(row.t)
        << ", \"rho\": " << json_number(row.rho)
        << ", \"eps\": " << json_number(row.eps)
        << ", \"xstar\": [" << json_number(row.xstar.x) << ", " << json_number(row.xstar.y)
        << "], \"r_crit\": " << json_number(row.r_crit) << '}';
    return out.str();
}

ConcentrationRow parse_concentration_row(const std::string& line) {
    const json row = parse_object(line);
    ConcentrationRow parsed;
    parsed.t = as_double(row.at("t"));
    parsed.rho = as_double(row.at("rho"));
    parsed.eps = as_double(row.at("eps"));
    const json& xs = row.at("xstar");
    require(xs.is_array() && xs.size() == 2, "xstar must be a two-element array");
    parsed.xstar = {as_double(xs[0]), as_double(xs[1])};
    parsed.r_crit = as_double(row.at("r_crit"));
    return parsed;
}

}  // namespace curveflow
