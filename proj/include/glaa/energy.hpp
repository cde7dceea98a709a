#pragma once

#include "glaa/field.hpp"

namespace glaa {

/// Global region constants: C1 = mean inside, C2 = mean outside. If a region
/// degenerates (weight mass below 1e-12) its constant falls back to the
/// global mean and the flag is set; callers keep iterating.
struct RegionStats {
    double c1 = 0.0;
    double c2 = 0.0;
    bool degenerate = false;
};

/// Kernel-local inside/outside fits f1, f2 (clamped to [floor, max f]).
struct LocalFits {
    ScalarField f1;
    ScalarField f2;
};

struct EnergyParams {
    double mu = 20.0;       // data weight
    double epsilon = 1.0;   // Heaviside regularization width
    double sigma = 3.0;     // Gaussian kernel std-dev (pixels)
    double omega = 1.0;     // global/local mix: 1 = global only, 0 = local only
    double beta = 0.0;      // edge-indicator contrast; 0 means auto (see default_edge_beta)
};

/// H_eps(phi) = 1/2 [1 + (2/pi) arctan(phi/eps)], values in (0,1).
ScalarField heaviside_eps(const ScalarField& phi, double epsilon);

/// delta_eps(phi) = (1/pi) eps / (eps^2 + phi^2), the derivative of H_eps.
ScalarField delta_eps(const ScalarField& phi, double epsilon);

/// g = 1 / (1 + beta |grad(K_sigma * f)|^2); 1 on flat areas, small on edges.
ScalarField edge_indicator(const ImageGrid& f, double sigma, double beta);

/// beta = 1/(range(f)/10)^2, so g == 1 on constant images.
double default_edge_beta(const ImageGrid& f);

/// H_eps-weighted means (level-set solver).
RegionStats region_means(const ImageGrid& f, const ScalarField& phi, double epsilon);

/// Means weighted by an arbitrary field w in [0,1] (mask-weighted refresh in
/// the convex solvers uses the thresholded indicator here).
RegionStats region_means_weighted(const ImageGrid& f, const ScalarField& w);

/// f1 = K*(H f) / K*H, f2 likewise with 1-H; denominators clamped at 1e-12,
/// outputs clamped to [floor, max f].
LocalFits local_fits(const ImageGrid& f, const ScalarField& phi, double epsilon,
                     double sigma);
LocalFits local_fits_weighted(const ImageGrid& f, const ScalarField& w, double sigma);

/// eta = eta1 + eta2:
///   eta1 = omega [ (log C1 + f/C1) - (log C2 + f/C2) ]
///   eta2 = (1-omega) [ K*log f1 + f K*(1/f1) - K*log f2 - f K*(1/f2) ]
/// The eta2 kernel integrals are expanded into Gaussian convolutions of
/// log f_i and 1/f_i. Fits may be empty when omega == 1 (eta2 skipped).
ScalarField data_term_eta(const ImageGrid& f, const RegionStats& stats,
                          const LocalFits& fits, const EnergyParams& params);

/// Anisotropic-TV segmentation objective |Dx phi|_1 + |Dy phi|_1 + mu <phi, eta>.
/// phi must lie in [0,1].
double gcs_objective(const ScalarField& phi, const ScalarField& eta, double mu);

}  // namespace glaa
