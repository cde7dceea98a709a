#include "glaa/solvers.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "glaa/grid_ops.hpp"

namespace glaa {

SolverId solver_from_name(const std::string& name) {
    if (name == "model1") return SolverId::Model1;
    if (name == "model2") return SolverId::Model2;
    if (name == "model3") return SolverId::Model3;
    if (name == "model4") return SolverId::Model4;
    throw std::invalid_argument("unknown solver: " + name);
}

std::string solver_name(SolverId id) {
    switch (id) {
        case SolverId::Model1: return "model1";
        case SolverId::Model2: return "model2";
        case SolverId::Model3: return "model3";
        case SolverId::Model4: return "model4";
    }
    return "?";
}

void SolverConfig::validate() const {
    if (mu <= 0.0 || lambda <= 0.0 || alpha <= 0.0)
        throw std::invalid_argument("SolverConfig: mu, lambda, alpha must be > 0");
    if (gamma <= 0.0 || gamma >= 1.0)
        throw std::invalid_argument("SolverConfig: gamma must be in (0,1)");
    if (t <= 0.0 || t >= 1.0)
        throw std::invalid_argument("SolverConfig: t must be in (0,1)");
    if (dt <= 0.0) throw std::invalid_argument("SolverConfig: dt must be > 0");
    if (epsilon <= 0.0 || sigma <= 0.0)
        throw std::invalid_argument("SolverConfig: epsilon, sigma must be > 0");
    if (omega < 0.0 || omega > 1.0)
        throw std::invalid_argument("SolverConfig: omega must be in [0,1]");
    if (max_iters < 1) throw std::invalid_argument("SolverConfig: max_iters must be >= 1");
    if (tol < 0.0) throw std::invalid_argument("SolverConfig: tol must be >= 0");
    if (stats_refresh < 1)
        throw std::invalid_argument("SolverConfig: stats_refresh must be >= 1");
}

double shrink(double x, double theta) {
    const double m = std::abs(x) - theta;
    return m > 0.0 ? (x > 0.0 ? m : -m) : 0.0;
}

BinaryMask threshold_mask(const ScalarField& phi, double gamma) {
    if (gamma <= 0.0 || gamma >= 1.0)
        throw std::invalid_argument("threshold_mask: gamma must be in (0,1)");
    BinaryMask m(phi.width, phi.height);
    for (std::size_t i = 0; i < phi.size(); ++i)
        m.data[i] = phi.data[i] > gamma ? 1 : 0;
    return m;
}

StabilityCheck check_stability(double lambda, double alpha, int n) {
    if (n < 2) throw std::invalid_argument("check_stability: n must be >= 2");
    StabilityCheck c;
    c.ratio = lambda / alpha;
    const double s = std::sin((n - 1) * std::numbers::pi / (2.0 * n));
    c.bound = 0.25 / (s * s);
    c.ok = c.ratio < c.bound;
    return c;
}

ScalarField step_levelset(const ScalarField& phi, const ScalarField& g,
                          const ScalarField& eta, const SolverConfig& cfg) {
    require_same_shape(phi, g, "step_levelset");
    require_same_shape(phi, eta, "step_levelset");
    constexpr double eps_curv = 1e-8;
    const ScalarField px = central_diff(phi, Axis::X);
    const ScalarField py = central_diff(phi, Axis::Y);
    ScalarField nx(phi.width, phi.height), ny(phi.width, phi.height);
    for (std::size_t i = 0; i < phi.size(); ++i) {
        const double mag = std::sqrt(px.data[i] * px.data[i] + py.data[i] * py.data[i] +
                                     eps_curv * eps_curv);
        nx.data[i] = g.data[i] * px.data[i] / mag;
        ny.data[i] = g.data[i] * py.data[i] / mag;
    }
    const ScalarField divx = central_diff(nx, Axis::X);
    const ScalarField divy = central_diff(ny, Axis::Y);
    const ScalarField del = delta_eps(phi, cfg.epsilon);
    ScalarField out = phi;
    for (std::size_t i = 0; i < phi.size(); ++i)
        out.data[i] += cfg.dt * del.data[i] *
                       (divx.data[i] + divy.data[i] - cfg.mu * eta.data[i]);
    return out;
}

// ---------------------------------------------------------------------------
// Fixed-data-term iteration states
// ---------------------------------------------------------------------------

void BregmanState::init(const ScalarField& phi0) {
    phi = phi0;
    dx = dy = bx = by = ScalarField(phi0.width, phi0.height, 0.0);
}

void BregmanState::step(const ScalarField& eta, const SolverConfig& cfg) {
    const int w = phi.width, h = phi.height;
    // alpha field of the discrete update: backward-difference divergence of
    // d - b, realized as the exact adjoint of the forward difference
    ScalarField diffx(w, h), diffy(w, h);
    for (std::size_t i = 0; i < phi.size(); ++i) {
        diffx.data[i] = dx.data[i] - bx.data[i];
        diffy.data[i] = dy.data[i] - by.data[i];
    }
    const ScalarField ax = adjoint_diff(diffx, Axis::X);
    const ScalarField ay = adjoint_diff(diffy, Axis::Y);
    // one Jacobi sweep: all neighbor reads from the old phi
    ScalarField next(w, h);
    const double r = cfg.mu / cfg.lambda;
    auto clampi = [](int i, int n) { return i < 0 ? 0 : (i >= n ? n - 1 : i); };
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const double beta = 0.25 * (phi.at(clampi(x - 1, w), y) + phi.at(clampi(x + 1, w), y) +
                                        phi.at(x, clampi(y - 1, h)) + phi.at(x, clampi(y + 1, h)) -
                                        r * eta.at(x, y) + ax.at(x, y) + ay.at(x, y));
            next.at(x, y) = std::min(std::max(beta, 0.0), 1.0);
        }
    }
    phi = std::move(next);
    const ScalarField gx = forward_diff(phi, Axis::X);
    const ScalarField gy = forward_diff(phi, Axis::Y);
    const double theta = 1.0 / cfg.lambda;
    for (std::size_t i = 0; i < phi.size(); ++i) {
        dx.data[i] = shrink(gx.data[i] + bx.data[i], theta);
        dy.data[i] = shrink(gy.data[i] + by.data[i], theta);
        bx.data[i] += gx.data[i] - dx.data[i];
        by.data[i] += gy.data[i] - dy.data[i];
    }
}

void Fpa1State::init(const ScalarField& phi0) {
    phi = phi0;
    bx = by = ScalarField(phi0.width, phi0.height, 0.0);
}

namespace {

// (I - shrink_theta)(x) = clamp(x, -theta, theta)
inline double residual_clamp(double x, double theta) {
    return std::min(std::max(x, -theta), theta);
}

}  // namespace

void Fpa1State::step(const ScalarField& eta, const SolverConfig& cfg) {
    const int w = phi.width, h = phi.height;
    const double theta = 1.0 / cfg.lambda;
    // relaxed dual update, forward differences formed in place
    for (int y = 0; y < h; ++y) {
        const double* p = &phi.data[static_cast<std::size_t>(y) * w];
        double* rx = &bx.data[static_cast<std::size_t>(y) * w];
        double* ry = &by.data[static_cast<std::size_t>(y) * w];
        const double* pn = y + 1 < h ? p + w : nullptr;
        for (int x = 0; x < w; ++x) {
            const double gx = x + 1 < w ? p[x + 1] - p[x] : 0.0;
            const double gy = pn ? pn[x] - p[x] : 0.0;
            rx[x] = cfg.t * rx[x] + (1.0 - cfg.t) * residual_clamp(gx + rx[x], theta);
            ry[x] = cfg.t * ry[x] + (1.0 - cfg.t) * residual_clamp(gy + ry[x], theta);
        }
    }
    // primal step with the divergence adjoint formed in place
    const double s = cfg.mu / cfg.alpha, q = cfg.lambda / cfg.alpha;
    for (int y = 0; y < h; ++y) {
        double* p = &phi.data[static_cast<std::size_t>(y) * w];
        const double* rx = &bx.data[static_cast<std::size_t>(y) * w];
        const double* ry = &by.data[static_cast<std::size_t>(y) * w];
        const double* ryp = y > 0 ? ry - w : nullptr;
        for (int x = 0; x < w; ++x) {
            double div = 0.0;
            if (x > 0) div += rx[x - 1];
            if (x + 1 < w) div -= rx[x];
            if (ryp) div += ryp[x];
            if (y + 1 < h) div -= ry[x];
            const double v = p[x] - s * eta.data[static_cast<std::size_t>(y) * w + x] -
                             q * div;
            p[x] = std::min(std::max(v, 0.0), 1.0);
        }
    }
}

void Fpa2State::init(const ScalarField& phi0) {
    phi = phi0;
    aux = phi0;
    bx = by = c = ScalarField(phi0.width, phi0.height, 0.0);
}

void Fpa2State::step(const ScalarField& eta, const SolverConfig& cfg,
                     const ScalarField* g) {
    const int w = phi.width, h = phi.height;
    for (int y = 0; y < h; ++y) {
        const std::size_t row = static_cast<std::size_t>(y) * w;
        const double* p = &phi.data[row];
        double* rx = &bx.data[row];
        double* ry = &by.data[row];
        const double* pn = y + 1 < h ? p + w : nullptr;
        for (int x = 0; x < w; ++x) {
            const double theta = (g ? g->data[row + x] : 1.0) / cfg.lambda;
            const double gx = x + 1 < w ? p[x + 1] - p[x] : 0.0;
            const double gy = pn ? pn[x] - p[x] : 0.0;
            rx[x] = cfg.t * rx[x] + (1.0 - cfg.t) * residual_clamp(gx + rx[x], theta);
            ry[x] = cfg.t * ry[x] + (1.0 - cfg.t) * residual_clamp(gy + ry[x], theta);
        }
    }
    const double s = cfg.mu / cfg.alpha, q = cfg.lambda / cfg.alpha;
    for (int y = 0; y < h; ++y) {
        const std::size_t row = static_cast<std::size_t>(y) * w;
        double* p = &phi.data[row];
        const double* rx = &bx.data[row];
        const double* ry = &by.data[row];
        const double* ryp = y > 0 ? ry - w : nullptr;
        for (int x = 0; x < w; ++x) {
            double div = 0.0;
            if (x > 0) div += rx[x - 1];
            if (x + 1 < w) div -= rx[x];
            if (ryp) div += ryp[x];
            if (y + 1 < h) div -= ry[x];
            const double a =
                std::min(std::max(p[x] - c.data[row + x] - s * eta.data[row + x], 0.0), 1.0);
            aux.data[row + x] = a;
            c.data[row + x] += a - p[x];
            p[x] = a + c.data[row + x] - q * div;
        }
    }
}

// ---------------------------------------------------------------------------
// Drivers
// ---------------------------------------------------------------------------

namespace {

ScalarField normalized_init(const ImageGrid& f) {
    const double m = max_value(f);
    if (m <= 0.0) throw std::invalid_argument("segment: image has no positive intensity");
    ScalarField phi(f.width, f.height);
    for (std::size_t i = 0; i < f.size(); ++i) phi.data[i] = f.data[i] / m;
    return phi;
}

double rel_change(const ScalarField& next, const ScalarField& prev, double* step_norm) {
    double dn = 0.0, pn = 0.0;
    for (std::size_t i = 0; i < next.size(); ++i) {
        const double d = next.data[i] - prev.data[i];
        dn += d * d;
        pn += prev.data[i] * prev.data[i];
    }
    *step_norm = std::sqrt(dn);
    return pn > 0.0 ? std::sqrt(dn / pn) : std::sqrt(dn);
}

ScalarField mask_to_field(const BinaryMask& m) {
    ScalarField w(m.width, m.height);
    for (std::size_t i = 0; i < m.size(); ++i) w.data[i] = m.data[i] ? 1.0 : 0.0;
    return w;
}

void abort_if_nonfinite(const ScalarField& f, const char* what) {
    for (double v : f.data)
        if (!std::isfinite(v))
            throw NumericalError(std::string(what) + ": non-finite intermediate");
}

bool eta_vanishes(const ScalarField& eta) {
    for (double v : eta.data)
        if (std::abs(v) > 1e-14) return false;
    return true;
}

SegmentationResult degenerate_result(const ScalarField& phi, double seconds) {
    SegmentationResult r;
    r.phi = phi;
    r.mask = BinaryMask(phi.width, phi.height, 0);
    r.degenerate = true;
    r.wall_time = seconds;
    r.warning = "degenerate segmentation: data term vanished, returning empty mask";
    return r;
}

template <typename State>
SegmentationResult run_convex(const ImageGrid& f, const SolverConfig& cfg, State state,
                              const ScalarField& reported_init, std::string warning) {
    using clock = std::chrono::steady_clock;
    const auto t0 = clock::now();
    const EnergyParams params = cfg.energy();
    LocalFits fits;  // left empty while omega == 1
    SegmentationResult res;
    res.warning = std::move(warning);
    BinaryMask mask = threshold_mask(reported_init, cfg.gamma);
    ScalarField prev = reported_init;
    for (int k = 0; k < cfg.max_iters; ++k) {
        const ScalarField w = mask_to_field(mask);
        const RegionStats stats = region_means_weighted(f, w);
        if (cfg.omega < 1.0) fits = local_fits_weighted(f, w, cfg.sigma);
        const ScalarField eta = data_term_eta(f, stats, fits, params);
        if (k == 0 && eta_vanishes(eta)) {
            auto r = degenerate_result(
                prev, std::chrono::duration<double>(clock::now() - t0).count());
            if (!res.warning.empty()) r.warning = res.warning + "; " + r.warning;
            return r;
        }
        state.step(eta, cfg);
        const ScalarField& cur = state.reported();
        abort_if_nonfinite(cur, "convex solver");
        res.objective_trace.push_back(gcs_objective(cur, eta, cfg.mu));
        res.stats_trace.push_back(stats);
        res.iterations = k + 1;
        double step_norm = 0.0;
        const double rel = rel_change(cur, prev, &step_norm);
        res.max_step_norm = std::max(res.max_step_norm, step_norm);
        BinaryMask next_mask = threshold_mask(cur, cfg.gamma);
        if (!(next_mask == mask)) res.last_mask_change = k + 1;
        mask = std::move(next_mask);
        prev = cur;
        if (rel < cfg.tol) break;
    }
    res.phi = prev;
    res.mask = std::move(mask);
    res.wall_time = std::chrono::duration<double>(clock::now() - t0).count();
    return res;
}

// Adapters so run_convex can pull the reported field uniformly.
struct Model2Runner : BregmanState {
    const ScalarField& reported() const { return phi; }
};
struct Model3Runner : Fpa1State {
    const ScalarField& reported() const { return phi; }
};
struct Model4Runner : Fpa2State {
    ScalarField edge;  // per-pixel shrink weights, empty unless enabled
    void step(const ScalarField& eta, const SolverConfig& cfg) {
        Fpa2State::step(eta, cfg, edge.data.empty() ? nullptr : &edge);
    }
};

std::string stability_warning(const SolverConfig& cfg, const ImageGrid& f) {
    const StabilityCheck c = check_stability(cfg.lambda, cfg.alpha,
                                             std::min(f.width, f.height));
    if (c.ok) return {};
    return "stability: lambda/alpha = " + std::to_string(c.ratio) +
           " exceeds the nonexpansiveness bound " + std::to_string(c.bound);
}

}  // namespace

SegmentationResult solve_split_bregman(const ImageGrid& f, const SolverConfig& cfg) {
    cfg.validate();
    const ScalarField phi0 = normalized_init(f);
    Model2Runner st;
    st.init(phi0);
    return run_convex(f, cfg, std::move(st), phi0, {});
}

SegmentationResult solve_fpa1(const ImageGrid& f, const SolverConfig& cfg) {
    cfg.validate();
    const ScalarField phi0 = normalized_init(f);
    Model3Runner st;
    st.init(phi0);
    return run_convex(f, cfg, std::move(st), phi0, stability_warning(cfg, f));
}

SegmentationResult solve_fpa2(const ImageGrid& f, const SolverConfig& cfg) {
    cfg.validate();
    const ScalarField phi0 = normalized_init(f);
    Model4Runner st;
    st.init(phi0);
    if (cfg.edge_weighted_shrink)
        st.edge = edge_indicator(f, cfg.sigma,
                                 cfg.beta > 0.0 ? cfg.beta : default_edge_beta(f));
    return run_convex(f, cfg, std::move(st), phi0, stability_warning(cfg, f));
}

GcsRun minimize_gcs(SolverId id, const ScalarField& eta, const ScalarField& phi0,
                    const SolverConfig& cfg) {
    cfg.validate();
    GcsRun run;
    auto iterate = [&](auto state) {
        state.init(phi0);
        ScalarField prev = state.reported();
        for (int k = 0; k < cfg.max_iters; ++k) {
            state.step(eta, cfg);
            const ScalarField& cur = state.reported();
            run.objective.push_back(gcs_objective(cur, eta, cfg.mu));
            run.iterations = k + 1;
            double step_norm = 0.0;
            const double rel = rel_change(cur, prev, &step_norm);
            prev = cur;
            if (rel < cfg.tol) break;
        }
        run.phi = prev;
    };
    switch (id) {
        case SolverId::Model2: iterate(Model2Runner{}); break;
        case SolverId::Model3: iterate(Model3Runner{}); break;
        case SolverId::Model4: iterate(Model4Runner{}); break;
        default:
            throw std::invalid_argument("minimize_gcs: expects model2, model3 or model4");
    }
    return run;
}

SegmentationResult solve_levelset(const ImageGrid& f, const SolverConfig& cfg) {
    cfg.validate();
    using clock = std::chrono::steady_clock;
    const auto t0 = clock::now();
    const EnergyParams params = cfg.energy();
    const ScalarField g =
        edge_indicator(f, cfg.sigma, cfg.beta > 0.0 ? cfg.beta : default_edge_beta(f));
    // binary step initialization: +1 on a centered box, -1 outside
    ScalarField phi(f.width, f.height, -1.0);
    for (int y = f.height / 4; y < 3 * f.height / 4; ++y)
        for (int x = f.width / 4; x < 3 * f.width / 4; ++x) phi.at(x, y) = 1.0;

    auto sign_mask = [](const ScalarField& p) {
        BinaryMask m(p.width, p.height);
        for (std::size_t i = 0; i < p.size(); ++i) m.data[i] = p.data[i] > 0.0 ? 1 : 0;
        return m;
    };

    SegmentationResult res;
    BinaryMask mask = sign_mask(phi);
    ScalarField eta;
    RegionStats stats;
    LocalFits fits;
    for (int k = 0; k < cfg.max_iters; ++k) {
        if (k % cfg.stats_refresh == 0) {
            stats = region_means(f, phi, cfg.epsilon);
            if (cfg.omega < 1.0) fits = local_fits(f, phi, cfg.epsilon, cfg.sigma);
            eta = data_term_eta(f, stats, fits, params);
            if (k == 0 && eta_vanishes(eta))
                return degenerate_result(
                    phi, std::chrono::duration<double>(clock::now() - t0).count());
        }
        ScalarField next = step_levelset(phi, g, eta, cfg);
        abort_if_nonfinite(next, "level-set solver");
        // relaxed objective: the smoothed Heaviside plays the role of the
        // [0,1]-valued indicator
        res.objective_trace.push_back(
            gcs_objective(heaviside_eps(next, cfg.epsilon), eta, cfg.mu));
        res.stats_trace.push_back(stats);
        res.iterations = k + 1;
        double step_norm = 0.0;
        const double rel = rel_change(next, phi, &step_norm);
        res.max_step_norm = std::max(res.max_step_norm, step_norm);
        BinaryMask next_mask = sign_mask(next);
        if (!(next_mask == mask)) res.last_mask_change = k + 1;
        mask = std::move(next_mask);
        phi = std::move(next);
        if (rel < cfg.tol) break;
    }
    res.phi = std::move(phi);
    res.mask = std::move(mask);
    res.wall_time = std::chrono::duration<double>(clock::now() - t0).count();
    return res;
}

SegmentationResult segment(const ImageGrid& f, SolverId id, const SolverConfig& cfg) {
    require_finite(f, "segment");
    if (min_value(f) < 0.0)
        throw std::invalid_argument("segment: image intensities must be >= 0");
    switch (id) {
        case SolverId::Model1: return solve_levelset(f, cfg);
        case SolverId::Model2: return solve_split_bregman(f, cfg);
        case SolverId::Model3: return solve_fpa1(f, cfg);
        case SolverId::Model4: return solve_fpa2(f, cfg);
    }
    throw std::invalid_argument("segment: bad solver id");
}

}  // namespace glaa
