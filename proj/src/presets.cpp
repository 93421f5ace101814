#include "curveflow/presets.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace curveflow {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

void require(bool ok, const std::string& message) {
    if (!ok) throw std::invalid_argument(message);
}

SampledCurve polar_curve(std::size_t n, const auto& radius_at) {
    SampledCurve curve;
    curve.points.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double u = kTwoPi * static_cast<double>(i) / static_cast<double>(n);
        const double r = radius_at(u);
        curve.points.push_back({r * std::cos(u), r * std::sin(u)});
    }
    return curve;
}

}  // namespace

SampledCurve circle_curve(double radius, std::size_t n, Vec2 center) {
    require(radius > 0.0 && std::isfinite(radius), "circle_curve: radius must be positive");
    SampledCurve curve = polar_curve(n, [radius](double) { return radius; });
    for (Vec2& p : curve.points) p += center;
    return curve;
}

SampledCurve ellipse_curve(double a, double b, std::size_t n) {
    require(a > 0.0 && b > 0.0 && std::isfinite(a) && std::isfinite(b),
            "ellipse_curve: semi-axes must be positive");
    SampledCurve curve;
    curve.points.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double u = kTwoPi * static_cast<double>(i) / static_cast<double>(n);
        curve.points.push_back({a * std::cos(u), b * std::sin(u)});
    }
    return curve;
}

SampledCurve flower_curve(double radius, double amplitude, int petals, std::size_t n) {
    require(radius > 0.0 && std::isfinite(radius), "flower_curve: radius must be positive");
    require(std::isfinite(amplitude) && std::abs(amplitude) < 1.0,
            "flower_curve: |amplitude| must be below 1");
    require(petals >= 1, "flower_curve: petals must be at least 1");
    return polar_curve(n, [=](double u) {
        return radius * (1.0 + amplitude * std::cos(static_cast<double>(petals) * u));
    });
}

SampledCurve wobble_curve(double radius, double amplitude, int modes,
                          std::uint64_t seed, std::size_t n) {
    require(radius > 0.0 && std::isfinite(radius), "wobble_curve: radius must be positive");
    require(std::isfinite(amplitude), "wobble_curve: amplitude must be finite");
    require(modes >= 1, "wobble_curve: modes must be at least 1");
    std::mt19937_64 rng(seed);
    // Fixed-width conversion to [-1, 1]; avoids distribution objects
    // whose output differs between standard library implementations.
    const auto uniform = [&rng]() {
        return 2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0;
    };
    std::vector<double> cos_coeff(static_cast<std::size_t>(modes));
    std::vector<double> sin_coeff(static_cast<std::size_t>(modes));
    for (int m = 0; m < modes; ++m) {
        cos_coeff[static_cast<std::size_t>(m)] = uniform();
        sin_coeff[static_cast<std::size_t>(m)] = uniform();
    }
    return polar_curve(n, [&](double u) {
        double bump = 0.0;
        for (int m = 0; m < modes; ++m) {
            const double freq = static_cast<double>(m + 2);
            bump += (cos_coeff[static_cast<std::size_t>(m)] * std::cos(freq * u) +
                     sin_coeff[static_cast<std::size_t>(m)] * std::sin(freq * u)) /
                    freq;
        }
        return radius * (1.0 + amplitude * bump);
    });
}

SampledCurve support_oval(double h0, const std::vector<double>& cos_coeffs, std::size_t n) {
    require(h0 > 0.0 && std::isfinite(h0), "support_oval: h0 must be positive");
    SampledCurve curve;
    curve.points.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = kTwoPi * static_cast<double>(i) / static_cast<double>(n);
        double h = h0, dh = 0.0, ddh = 0.0;
        for (std::size_t m = 1; m <= cos_coeffs.size(); ++m) {
            const double fm = static_cast<double>(m);
            const double c = cos_coeffs[m - 1];
            h += c * std::cos(fm * t);
            dh -= c * fm * std::sin(fm * t);
            ddh -= c * fm * fm * std::cos(fm * t);
        }
        require(h + ddh > 0.0, "support_oval: h + h'' must be positive (convexity)");
        const Vec2 u{std::cos(t), std::sin(t)};
        const Vec2 up{-std::sin(t), std::cos(t)};
        curve.points.push_back(h * u + dh * up);
    }
    return curve;
}

AngleProfile circle_profile(double radius, std::size_t m) {
    require(radius > 0.0 && std::isfinite(radius), "circle_profile: radius must be positive");
    AngleProfile profile;
    profile.k.assign(m, 1.0 / radius);
    validate(profile);
    return profile;
}

AngleProfile ellipse_profile(double a, double b, std::size_t m) {
    require(a > 0.0 && b > 0.0 && std::isfinite(a) && std::isfinite(b),
            "ellipse_profile: semi-axes must be positive");
    AngleProfile profile;
    profile.k.reserve(m);
    const double a2 = a * a, b2 = b * b;
    for (std::size_t j = 0; j < m; ++j) {
        const double theta = kTwoPi * static_cast<double>(j) / static_cast<double>(m);
        const double s = std::sin(theta), c = std::cos(theta);
        const double q = a2 * s * s + b2 * c * c;
        profile.k.push_back(q * std::sqrt(q) / (a2 * b2));
    }
    validate(profile);
    return profile;
}

Vec2 ellipse_anchor(double, double b) { return {0.0, -b}; }

}  // namespace curveflow
