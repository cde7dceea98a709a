#include "glaa/grid_ops.hpp"

#include <cmath>
#include <stdexcept>

namespace glaa {

ScalarField forward_diff(const ScalarField& u, Axis axis) {
    ScalarField d(u.width, u.height);
    if (axis == Axis::X) {
        for (int y = 0; y < u.height; ++y)
            for (int x = 0; x + 1 < u.width; ++x)
                d.at(x, y) = u.at(x + 1, y) - u.at(x, y);
    } else {
        for (int y = 0; y + 1 < u.height; ++y)
            for (int x = 0; x < u.width; ++x)
                d.at(x, y) = u.at(x, y + 1) - u.at(x, y);
    }
    return d;
}

ScalarField adjoint_diff(const ScalarField& v, Axis axis) {
    ScalarField a(v.width, v.height);
    if (axis == Axis::X) {
        for (int y = 0; y < v.height; ++y) {
            for (int x = 0; x < v.width; ++x) {
                double s = 0.0;
                if (x > 0) s += v.at(x - 1, y);
                if (x + 1 < v.width) s -= v.at(x, y);
                a.at(x, y) = s;
            }
        }
    } else {
        for (int y = 0; y < v.height; ++y) {
            for (int x = 0; x < v.width; ++x) {
                double s = 0.0;
                if (y > 0) s += v.at(x, y - 1);
                if (y + 1 < v.height) s -= v.at(x, y);
                a.at(x, y) = s;
            }
        }
    }
    return a;
}

ScalarField central_diff(const ScalarField& u, Axis axis) {
    ScalarField d(u.width, u.height);
    auto clampi = [](int i, int n) { return i < 0 ? 0 : (i >= n ? n - 1 : i); };
    if (axis == Axis::X) {
        for (int y = 0; y < u.height; ++y)
            for (int x = 0; x < u.width; ++x)
                d.at(x, y) = 0.5 * (u.at(clampi(x + 1, u.width), y) -
                                    u.at(clampi(x - 1, u.width), y));
    } else {
        for (int y = 0; y < u.height; ++y)
            for (int x = 0; x < u.width; ++x)
                d.at(x, y) = 0.5 * (u.at(x, clampi(y + 1, u.height)) -
                                    u.at(x, clampi(y - 1, u.height)));
    }
    return d;
}

ScalarField laplacian_central(const ScalarField& u) {
    ScalarField l(u.width, u.height);
    auto clampi = [](int i, int n) { return i < 0 ? 0 : (i >= n ? n - 1 : i); };
    for (int y = 0; y < u.height; ++y) {
        for (int x = 0; x < u.width; ++x) {
            l.at(x, y) = u.at(clampi(x - 1, u.width), y) + u.at(clampi(x + 1, u.width), y) +
                         u.at(x, clampi(y - 1, u.height)) + u.at(x, clampi(y + 1, u.height)) -
                         4.0 * u.at(x, y);
        }
    }
    return l;
}

std::vector<double> gaussian_kernel(double sigma) {
    if (sigma <= 0.0)
        throw std::invalid_argument("gaussian_kernel: sigma must be positive");
    const int radius = static_cast<int>(std::ceil(4.0 * sigma));
    std::vector<double> k(2 * radius + 1);
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        k[i + radius] = std::exp(-0.5 * (i * i) / (sigma * sigma));
        sum += k[i + radius];
    }
    for (double& v : k) v /= sum;
    return k;
}

namespace {

// One separable pass along an axis with replicate padding.
ScalarField convolve_axis(const ScalarField& u, const std::vector<double>& k, Axis axis) {
    const int radius = static_cast<int>(k.size() / 2);
    ScalarField out(u.width, u.height);
    auto clampi = [](int i, int n) { return i < 0 ? 0 : (i >= n ? n - 1 : i); };
    if (axis == Axis::X) {
        for (int y = 0; y < u.height; ++y) {
            for (int x = 0; x < u.width; ++x) {
                double s = 0.0;
                for (int t = -radius; t <= radius; ++t)
                    s += k[t + radius] * u.at(clampi(x + t, u.width), y);
                out.at(x, y) = s;
            }
        }
    } else {
        for (int y = 0; y < u.height; ++y) {
            for (int x = 0; x < u.width; ++x) {
                double s = 0.0;
                for (int t = -radius; t <= radius; ++t)
                    s += k[t + radius] * u.at(x, clampi(y + t, u.height));
                out.at(x, y) = s;
            }
        }
    }
    return out;
}

}  // namespace

ScalarField gaussian_convolve(const ScalarField& u, double sigma) {
    const std::vector<double> k = gaussian_kernel(sigma);
    return convolve_axis(convolve_axis(u, k, Axis::X), k, Axis::Y);
}

double dot(const ScalarField& a, const ScalarField& b) {
    require_same_shape(a, b, "dot");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a.data[i] * b.data[i];
    return s;
}

double norm2(const ScalarField& a) { return std::sqrt(dot(a, a)); }

}  // namespace glaa
