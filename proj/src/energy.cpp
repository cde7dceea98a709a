#include "glaa/energy.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "glaa/grid_ops.hpp"

namespace glaa {

ScalarField heaviside_eps(const ScalarField& phi, double epsilon) {
    if (epsilon <= 0.0) throw std::invalid_argument("heaviside_eps: epsilon must be > 0");
    ScalarField h(phi.width, phi.height);
    for (std::size_t i = 0; i < phi.size(); ++i)
        h.data[i] = 0.5 * (1.0 + (2.0 / std::numbers::pi) * std::atan(phi.data[i] / epsilon));
    return h;
}

ScalarField delta_eps(const ScalarField& phi, double epsilon) {
    if (epsilon <= 0.0) throw std::invalid_argument("delta_eps: epsilon must be > 0");
    ScalarField d(phi.width, phi.height);
    for (std::size_t i = 0; i < phi.size(); ++i)
        d.data[i] = (1.0 / std::numbers::pi) * epsilon /
                    (epsilon * epsilon + phi.data[i] * phi.data[i]);
    return d;
}

double default_edge_beta(const ImageGrid& f) {
    const double range = max_value(f) - min_value(f);
    if (range <= 0.0) return 1.0;
    const double s = range / 10.0;
    return 1.0 / (s * s);
}

ScalarField edge_indicator(const ImageGrid& f, double sigma, double beta) {
    if (sigma <= 0.0 || beta <= 0.0)
        throw std::invalid_argument("edge_indicator: sigma and beta must be > 0");
    const ScalarField smooth = gaussian_convolve(f, sigma);
    const ScalarField gx = central_diff(smooth, Axis::X);
    const ScalarField gy = central_diff(smooth, Axis::Y);
    ScalarField g(f.width, f.height);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double m2 = gx.data[i] * gx.data[i] + gy.data[i] * gy.data[i];
        g.data[i] = 1.0 / (1.0 + beta * m2);
    }
    return g;
}

RegionStats region_means_weighted(const ImageGrid& f, const ScalarField& w) {
    require_same_shape(f, w, "region_means");
    double w1 = 0.0, w2 = 0.0, s1 = 0.0, s2 = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double h = w.data[i];
        w1 += h;
        w2 += 1.0 - h;
        s1 += h * f.data[i];
        s2 += (1.0 - h) * f.data[i];
    }
    RegionStats stats;
    const double global = mean_value(f);
    if (w1 < 1e-12 || w2 < 1e-12) stats.degenerate = true;
    stats.c1 = w1 < 1e-12 ? global : s1 / w1;
    stats.c2 = w2 < 1e-12 ? global : s2 / w2;
    return stats;
}

RegionStats region_means(const ImageGrid& f, const ScalarField& phi, double epsilon) {
    return region_means_weighted(f, heaviside_eps(phi, epsilon));
}

LocalFits local_fits_weighted(const ImageGrid& f, const ScalarField& w, double sigma) {
    require_same_shape(f, w, "local_fits");
    const double lo = intensity_floor(f);
    const double hi = max_value(f);
    ScalarField wf(f.width, f.height);
    ScalarField cf(f.width, f.height);  // complement-weighted image
    ScalarField cw(f.width, f.height);
    for (std::size_t i = 0; i < f.size(); ++i) {
        wf.data[i] = w.data[i] * f.data[i];
        cw.data[i] = 1.0 - w.data[i];
        cf.data[i] = cw.data[i] * f.data[i];
    }
    const ScalarField num1 = gaussian_convolve(wf, sigma);
    const ScalarField den1 = gaussian_convolve(w, sigma);
    const ScalarField num2 = gaussian_convolve(cf, sigma);
    const ScalarField den2 = gaussian_convolve(cw, sigma);
    LocalFits fits{ScalarField(f.width, f.height), ScalarField(f.width, f.height)};
    auto clampv = [lo, hi](double v) { return std::min(std::max(v, lo), hi); };
    for (std::size_t i = 0; i < f.size(); ++i) {
        fits.f1.data[i] = clampv(num1.data[i] / std::max(den1.data[i], 1e-12));
        fits.f2.data[i] = clampv(num2.data[i] / std::max(den2.data[i], 1e-12));
    }
    return fits;
}

LocalFits local_fits(const ImageGrid& f, const ScalarField& phi, double epsilon,
                     double sigma) {
    return local_fits_weighted(f, heaviside_eps(phi, epsilon), sigma);
}

ScalarField data_term_eta(const ImageGrid& f, const RegionStats& stats,
                          const LocalFits& fits, const EnergyParams& params) {
    ScalarField eta(f.width, f.height, 0.0);
    const double w = params.omega;
    if (w > 0.0) {
        if (stats.c1 <= 0.0 || stats.c2 <= 0.0)
            throw std::invalid_argument("data_term_eta: region constants must be > 0");
        const double k0 = std::log(stats.c1) - std::log(stats.c2);
        const double k1 = 1.0 / stats.c1 - 1.0 / stats.c2;
        for (std::size_t i = 0; i < f.size(); ++i)
            eta.data[i] = w * (k0 + k1 * f.data[i]);
    }
    if (w < 1.0) {
        require_same_shape(f, fits.f1, "data_term_eta");
        require_same_shape(f, fits.f2, "data_term_eta");
        ScalarField lg(f.width, f.height);   // log f1 - log f2
        ScalarField inv(f.width, f.height);  // 1/f1 - 1/f2
        for (std::size_t i = 0; i < f.size(); ++i) {
            const double a = fits.f1.data[i], b = fits.f2.data[i];
            if (a <= 0.0 || b <= 0.0)
                throw std::invalid_argument("data_term_eta: local fits must be > 0");
            lg.data[i] = std::log(a) - std::log(b);
            inv.data[i] = 1.0 / a - 1.0 / b;
        }
        const ScalarField klg = gaussian_convolve(lg, params.sigma);
        const ScalarField kinv = gaussian_convolve(inv, params.sigma);
        for (std::size_t i = 0; i < f.size(); ++i)
            eta.data[i] += (1.0 - w) * (klg.data[i] + f.data[i] * kinv.data[i]);
    }
    return eta;
}

double gcs_objective(const ScalarField& phi, const ScalarField& eta, double mu) {
    require_same_shape(phi, eta, "gcs_objective");
    for (double v : phi.data)
        if (v < -1e-12 || v > 1.0 + 1e-12)
            throw std::invalid_argument("gcs_objective: phi outside [0,1]");
    double tv = 0.0;
    // anisotropic TV via forward differences, inlined to keep the objective
    // cheap inside solver traces
    for (int y = 0; y < phi.height; ++y)
        for (int x = 0; x + 1 < phi.width; ++x)
            tv += std::abs(phi.at(x + 1, y) - phi.at(x, y));
    for (int y = 0; y + 1 < phi.height; ++y)
        for (int x = 0; x < phi.width; ++x)
            tv += std::abs(phi.at(x, y + 1) - phi.at(x, y));
    return tv + mu * dot(phi, eta);
}

}  // namespace glaa
