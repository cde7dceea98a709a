#pragma once

#include <string>
#include <vector>

#include "glaa/energy.hpp"
#include "glaa/field.hpp"

namespace glaa {

enum class SolverId { Model1, Model2, Model3, Model4 };

SolverId solver_from_name(const std::string& name);  // "model1".."model4"
std::string solver_name(SolverId id);

struct SolverConfig {
    double mu = 20.0;      // data weight
    double lambda = 0.02;  // TV penalty weight (models 2-4)
    double alpha = 0.2;    // proximity weight (models 3-4)
    double t = 1e-5;       // relaxation, in (0,1) (models 3-4)
    double gamma = 0.5;    // threshold, in (0,1) (models 2-4)
    double dt = 0.1;       // time step (model 1)
    double epsilon = 1.0;  // Heaviside width
    double sigma = 3.0;    // Gaussian kernel std-dev
    double omega = 1.0;    // global/local mix, in [0,1]
    double beta = 0.0;     // edge-indicator contrast; 0 = auto
    int max_iters = 300;
    double tol = 1e-4;      // relative phi-change stopping tolerance
    int stats_refresh = 1;  // iterations between C1/C2/f1/f2 refreshes (model 1)
    bool edge_weighted_shrink = false;  // model 4: per-pixel g(x)/lambda threshold

    void validate() const;
    EnergyParams energy() const {
        return EnergyParams{mu, epsilon, sigma, omega, beta};
    }
};

struct SegmentationResult {
    ScalarField phi;  // models 2-3: phi; model 4: the clamped auxiliary field;
                      // model 1: the raw level-set function
    BinaryMask mask;
    bool degenerate = false;  // constant-image tie-break: all-zero mask
    int iterations = 0;
    double wall_time = 0.0;  // seconds
    std::vector<double> objective_trace;  // anisotropic-TV objective per iteration
    std::vector<RegionStats> stats_trace;
    int last_mask_change = 0;    // iteration index of the last mask flip
    double max_step_norm = 0.0;  // max ||phi^{k+1} - phi^k|| over the run
    std::string warning;
};

/// Thrown when a solver produces a non-finite intermediate.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Soft threshold sgn(x) max(|x| - theta, 0).
double shrink(double x, double theta);

/// Omega_1 = {x : phi(x) > gamma}, strict inequality.
BinaryMask threshold_mask(const ScalarField& phi, double gamma);

struct StabilityCheck {
    bool ok = false;
    double ratio = 0.0;  // lambda / alpha
    double bound = 0.0;  // (1/4) / sin^2((N-1)pi / 2N)
};

/// Nonexpansiveness bound for the fixed-point schemes: ok iff
/// lambda/alpha < (1/4) sin^-2((N-1)pi/2N); a failed check is a warning,
/// the run proceeds.
StabilityCheck check_stability(double lambda, double alpha, int n);

/// One explicit Euler step of the level-set flow
///   phi += dt [ delta_eps(phi) div(g grad phi / |grad phi|) - mu delta_eps(phi) eta ]
/// with |grad phi| regularized by eps_curv = 1e-8 inside the sqrt.
/// eta is the precomputed data term for the current region statistics.
ScalarField step_levelset(const ScalarField& phi, const ScalarField& g,
                          const ScalarField& eta, const SolverConfig& config);

// ---------------------------------------------------------------------------
// Fixed-data-term iteration states. Each step advances one outer iteration of
// the corresponding scheme for a given eta; the image-driven solvers below
// refresh eta between steps. Exposed so the minimizers can be checked against
// an independent oracle for a frozen eta.
// ---------------------------------------------------------------------------

/// Split Bregman scheme (model 2): Jacobi sweep of the discrete update,
/// clamp to [0,1], shrink updates for d, Bregman updates for b.
struct BregmanState {
    ScalarField phi, dx, dy, bx, by;
    void init(const ScalarField& phi0);
    void step(const ScalarField& eta, const SolverConfig& cfg);
};

/// Fixed point algorithm 1 (model 3): relaxed clamped dual updates, primal
/// step phi - mu eta / alpha - (lambda/alpha) div-adjoint, clamp to [0,1].
struct Fpa1State {
    ScalarField phi, bx, by;
    void init(const ScalarField& phi0);
    void step(const ScalarField& eta, const SolverConfig& cfg);
};

/// Fixed point algorithm 2 (model 4): same duals plus the auxiliary field and
/// Bregman-style c update; the clamped auxiliary carries the segmentation.
struct Fpa2State {
    ScalarField phi, aux, bx, by, c;
    void init(const ScalarField& phi0);
    void step(const ScalarField& eta, const SolverConfig& cfg,
              const ScalarField* g = nullptr);
    /// Field the mask thresholds (the clamped auxiliary).
    const ScalarField& reported() const { return aux; }
};

struct GcsRun {
    ScalarField phi;  // the reported field (clamped, in [0,1])
    std::vector<double> objective;
    int iterations = 0;
};

/// Minimize the anisotropic-TV objective for a frozen eta with the chosen
/// convex scheme (Model2/Model3/Model4). Stops on max_iters or when the
/// relative phi change drops below cfg.tol.
GcsRun minimize_gcs(SolverId id, const ScalarField& eta, const ScalarField& phi0,
                    const SolverConfig& cfg);

// ---------------------------------------------------------------------------
// Image-driven solvers. Region statistics (and local fits when omega < 1) are
// refreshed from the thresholded mask every outer iteration (every
// stats_refresh steps for model 1).
// ---------------------------------------------------------------------------

SegmentationResult solve_levelset(const ImageGrid& f, const SolverConfig& cfg);
SegmentationResult solve_split_bregman(const ImageGrid& f, const SolverConfig& cfg);
SegmentationResult solve_fpa1(const ImageGrid& f, const SolverConfig& cfg);
SegmentationResult solve_fpa2(const ImageGrid& f, const SolverConfig& cfg);

/// Dispatch facade with the shared initialization conventions
/// (model 1: +/-1 step function on a centered box; models 2-4: f / max f).
SegmentationResult segment(const ImageGrid& f, SolverId id, const SolverConfig& cfg);

}  // namespace glaa
