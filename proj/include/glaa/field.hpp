#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace glaa {

/// Rectangular grid of doubles, row-major. Serves both as the observed
/// image (nonnegative intensities) and as a generic scalar field (phi,
/// duals, data term). Invariants on intensity-valued grids are enforced
/// at the construction sites (image IO, phantom synthesis), not here.
struct ScalarField {
    int width = 0;
    int height = 0;
    std::vector<double> data;

    ScalarField() = default;
    ScalarField(int w, int h, double fill = 0.0)
        : width(w), height(h), data(static_cast<std::size_t>(w) * h, fill) {
        if (w <= 0 || h <= 0)
            throw std::invalid_argument("ScalarField: dimensions must be positive");
    }

    double& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }
    double at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }

    std::size_t size() const { return data.size(); }
    bool same_shape(const ScalarField& o) const {
        return width == o.width && height == o.height;
    }
};

/// Observed image f: same layout as ScalarField, values >= 0 (clamped to an
/// intensity floor before any log or division, see clamp_floor()).
using ImageGrid = ScalarField;

/// Two-phase segmentation mask, 0 = background, 1 = foreground.
struct BinaryMask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;

    BinaryMask() = default;
    BinaryMask(int w, int h, std::uint8_t fill = 0)
        : width(w), height(h), data(static_cast<std::size_t>(w) * h, fill) {
        if (w <= 0 || h <= 0)
            throw std::invalid_argument("BinaryMask: dimensions must be positive");
    }

    std::uint8_t& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }
    std::uint8_t at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }

    std::size_t size() const { return data.size(); }
    bool operator==(const BinaryMask& o) const {
        return width == o.width && height == o.height && data == o.data;
    }
};

inline void require_same_shape(const ScalarField& a, const ScalarField& b,
                               const char* what) {
    if (!a.same_shape(b))
        throw std::invalid_argument(std::string(what) + ": shape mismatch");
}

inline void require_finite(const ScalarField& f, const char* what) {
    for (double v : f.data)
        if (!std::isfinite(v))
            throw std::runtime_error(std::string(what) + ": non-finite value");
}

inline double max_value(const ScalarField& f) {
    double m = f.data.empty() ? 0.0 : f.data[0];
    for (double v : f.data) m = std::max(m, v);
    return m;
}

inline double min_value(const ScalarField& f) {
    double m = f.data.empty() ? 0.0 : f.data[0];
    for (double v : f.data) m = std::min(m, v);
    return m;
}

inline double mean_value(const ScalarField& f) {
    double s = 0.0;
    for (double v : f.data) s += v;
    return f.data.empty() ? 0.0 : s / static_cast<double>(f.data.size());
}

/// Floor used before logs and divisions: 1e-6 times the peak intensity.
inline double intensity_floor(const ImageGrid& f) {
    return 1e-6 * max_value(f);
}

/// Clamp intensities up to the floor (8-bit images contain zeros; the data
/// term requires f > 0).
inline ImageGrid clamp_floor(ImageGrid f) {
    const double lo = intensity_floor(f);
    for (double& v : f.data) v = std::max(v, lo);
    return f;
}

}  // namespace glaa
