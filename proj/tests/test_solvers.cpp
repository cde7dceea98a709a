#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "glaa/metrics.hpp"
#include "glaa/solvers.hpp"
#include "glaa/speckle.hpp"
#include "support/oracles.hpp"

using namespace glaa;

TEST_CASE("shrink") {
    SUBCASE("hand values") {
        CHECK(shrink(3.0, 1.0) == 2.0);
        CHECK(shrink(-3.0, 1.0) == -2.0);
        CHECK(shrink(0.5, 1.0) == 0.0);
        CHECK(shrink(-0.5, 1.0) == 0.0);
        CHECK(shrink(0.0, 1.0) == 0.0);
        CHECK(shrink(7.0, 0.0) == 7.0);
    }
    SUBCASE("nonexpansive: |shrink(a) - shrink(b)| <= |a - b|") {
        const ScalarField a = oracle::random_field(10, 10, 1, -5.0, 5.0);
        const ScalarField b = oracle::random_field(10, 10, 2, -5.0, 5.0);
        for (double theta : {0.1, 1.0, 3.0}) {
            for (std::size_t i = 0; i < a.size(); ++i)
                CHECK(std::abs(shrink(a.data[i], theta) - shrink(b.data[i], theta)) <=
                      std::abs(a.data[i] - b.data[i]) + 1e-15);
        }
    }
    SUBCASE("identity: x - shrink(x, theta) == clamp(x, -theta, theta)") {
        for (double theta : {0.5, 1.0, 2.5}) {
            for (double x = -6.0; x <= 6.0; x += 0.3) {
                const double clamped = std::min(std::max(x, -theta), theta);
                CHECK(x - shrink(x, theta) == doctest::Approx(clamped).epsilon(1e-14));
            }
        }
    }
}

TEST_CASE("threshold_mask uses strict inequality") {
    ScalarField phi(4, 1);
    phi.data = {0.4999, 0.5, 0.5001, 1.0};
    const BinaryMask m = threshold_mask(phi, 0.5);
    CHECK(m.data[0] == 0);
    CHECK(m.data[1] == 0);
    CHECK(m.data[2] == 1);
    CHECK(m.data[3] == 1);
}

TEST_CASE("check_stability") {
    SUBCASE("default preset accepted") {
        const StabilityCheck c = check_stability(0.02, 0.2, 85);
        CHECK(c.ok);
        CHECK(c.ratio == doctest::Approx(0.1));
        CHECK(c.bound > 0.25);  // bound -> 0.25+ from above as n grows
    }
    SUBCASE("ratio just below the asymptotic bound accepted") {
        CHECK(check_stability(0.24, 1.0, 1000).ok);
    }
    SUBCASE("ratio 0.3 rejected") {
        CHECK_FALSE(check_stability(0.3, 1.0, 85).ok);
        CHECK_FALSE(check_stability(0.06, 0.2, 85).ok);
    }
    SUBCASE("bound formula") {
        const int n = 16;
        const StabilityCheck c = check_stability(0.1, 1.0, n);
        const double s = std::sin((n - 1) * M_PI / (2.0 * n));
        CHECK(c.bound == doctest::Approx(0.25 / (s * s)).epsilon(1e-14));
    }
    SUBCASE("n < 2 rejected") {
        CHECK_THROWS_AS(check_stability(0.1, 1.0, 1), std::invalid_argument);
    }
}

TEST_CASE("step_levelset") {
    SUBCASE("linear ramp with zero data term is stationary") {
        // a plane has zero level-set curvature, so with g = 1 and eta = 0
        // nothing moves
        ScalarField phi(12, 12);
        for (int y = 0; y < 12; ++y)
            for (int x = 0; x < 12; ++x) phi.at(x, y) = 0.5 * x - 3.0;
        SolverConfig cfg;
        cfg.dt = 0.1;
        cfg.epsilon = 1.0;
        const ScalarField next =
            step_levelset(phi, ScalarField(12, 12, 1.0), ScalarField(12, 12, 0.0), cfg);
        for (int y = 1; y + 1 < 12; ++y)
            for (int x = 1; x + 1 < 12; ++x)
                CHECK(next.at(x, y) == doctest::Approx(phi.at(x, y)).epsilon(1e-12));
    }
    SUBCASE("radial cone shrinks at the analytic curvature rate") {
        // phi = R - r: the level sets are circles, div(grad phi/|grad phi|)
        // = -1/r, so d phi = -dt delta_eps(phi) / r away from the center
        const int n = 41;
        const double R = 12.0;
        ScalarField phi(n, n);
        for (int y = 0; y < n; ++y)
            for (int x = 0; x < n; ++x)
                phi.at(x, y) = R - std::hypot(x - 20.0, y - 20.0);
        SolverConfig cfg;
        cfg.dt = 0.1;
        cfg.epsilon = 1.0;
        const ScalarField next =
            step_levelset(phi, ScalarField(n, n, 1.0), ScalarField(n, n, 0.0), cfg);
        for (auto [x, y] : {std::pair{20, 8}, {28, 20}, {14, 14}, {20, 31}}) {
            const double r = std::hypot(x - 20.0, y - 20.0);
            const double delta =
                delta_eps(ScalarField(1, 1, phi.at(x, y)), cfg.epsilon).data[0];
            const double expect = -cfg.dt * delta / r;
            const double got = next.at(x, y) - phi.at(x, y);
            CHECK(got < 0.0);
            CHECK(got == doctest::Approx(expect).epsilon(0.15));
        }
    }
    SUBCASE("data term pushes phi down where eta > 0 and up where eta < 0") {
        const ScalarField phi(9, 9, 0.0);  // flat start: curvature term is 0
        SolverConfig cfg;
        cfg.dt = 0.1;
        cfg.mu = 5.0;
        ScalarField eta(9, 9, 1.0);
        ScalarField next = step_levelset(phi, ScalarField(9, 9, 1.0), eta, cfg);
        for (double v : next.data) CHECK(v < 0.0);
        for (double& v : eta.data) v = -1.0;
        next = step_levelset(phi, ScalarField(9, 9, 1.0), eta, cfg);
        for (double v : next.data) CHECK(v > 0.0);
    }
}

namespace {

SolverConfig oracle_config(double mu, int iters) {
    SolverConfig cfg;
    cfg.mu = mu;
    cfg.lambda = 0.02;
    cfg.alpha = 0.2;
    cfg.t = 1e-5;
    cfg.max_iters = iters;
    cfg.tol = 0.0;
    return cfg;
}

}  // namespace

TEST_CASE("the projected-subgradient oracle matches exhaustive enumeration on 4x4") {
    for (int seed : {3, 14, 27}) {
        const ScalarField eta = oracle::random_field(4, 4, seed);
        const double sub = oracle::subgradient_min(eta, 20.0, 100000);
        const double exact = oracle::exhaustive_binary_min(eta, 20.0);
        CHECK(sub == doctest::Approx(exact).epsilon(1e-9));
    }
}

TEST_CASE("convex solvers reach the oracle minimum for frozen eta on 4x4") {
    const ScalarField phi0(4, 4, 0.5);
    for (int seed : {5, 8, 13, 21, 34}) {
        const ScalarField eta = oracle::random_field(4, 4, seed);
        const double opt = oracle::exhaustive_binary_min(eta, 20.0);
        for (SolverId id : {SolverId::Model2, SolverId::Model3, SolverId::Model4}) {
            const GcsRun run = minimize_gcs(id, eta, phi0, oracle_config(20.0, 30000));
            CHECK(std::abs(run.objective.back() - opt) <= 1e-3);
        }
    }
}

TEST_CASE("two-block data term recovers the block exactly") {
    // eta = -1 on an 8x8 block, +1 elsewhere; mu large enough that the TV
    // perimeter cost (32) never beats the data gain (mu per pixel)
    const int n = 16;
    ScalarField eta(n, n, 1.0);
    BinaryMask expect(n, n, 0);
    for (int y = 4; y < 12; ++y)
        for (int x = 4; x < 12; ++x) {
            eta.at(x, y) = -1.0;
            expect.at(x, y) = 1;
        }
    const ScalarField phi0(n, n, 0.5);
    for (SolverId id : {SolverId::Model2, SolverId::Model3, SolverId::Model4}) {
        const GcsRun run = minimize_gcs(id, eta, phi0, oracle_config(20.0, 20000));
        CHECK(threshold_mask(run.phi, 0.5) == expect);
    }
}

TEST_CASE("convex schemes settle to a fixed point for frozen eta") {
    // the raw objective trace may wiggle early (the splitting variables
    // reshuffle), but every scheme must end at its running minimum with a
    // flat tail
    for (int seed : {5, 21}) {
        const ScalarField eta = oracle::random_field(8, 8, seed);
        for (SolverId id : {SolverId::Model2, SolverId::Model3, SolverId::Model4}) {
            const GcsRun run =
                minimize_gcs(id, eta, ScalarField(8, 8, 0.5), oracle_config(20.0, 3000));
            double lo = run.objective.front();
            for (double v : run.objective) lo = std::min(lo, v);
            CHECK(run.objective.back() <= lo + 1e-9);
            for (std::size_t k = run.objective.size() - 100; k < run.objective.size(); ++k)
                CHECK(std::abs(run.objective[k] - run.objective.back()) <= 1e-9);
        }
    }
}

TEST_CASE("iterates stay in [0,1] for every convex scheme") {
    const ScalarField eta = oracle::random_field(9, 9, 55, -2.0, 2.0);
    const SolverConfig cfg = oracle_config(20.0, 200);
    BregmanState m2;
    Fpa1State m3;
    Fpa2State m4;
    m2.init(ScalarField(9, 9, 0.5));
    m3.init(ScalarField(9, 9, 0.5));
    m4.init(ScalarField(9, 9, 0.5));
    for (int k = 0; k < 200; ++k) {
        m2.step(eta, cfg);
        m3.step(eta, cfg);
        m4.step(eta, cfg);
        for (double v : m2.phi.data) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
        for (double v : m3.phi.data) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
        // model 4 thresholds the clamped auxiliary, not the raw phi
        for (double v : m4.reported().data) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
    }
}

TEST_CASE("scaling mu by s and eta by 1/s leaves the iterates unchanged") {
    // the schemes only see the product mu * eta
    const ScalarField eta = oracle::random_field(6, 6, 91);
    ScalarField scaled = eta;
    for (double& v : scaled.data) v *= 4.0;
    const ScalarField phi0(6, 6, 0.5);
    for (SolverId id : {SolverId::Model2, SolverId::Model3, SolverId::Model4}) {
        const GcsRun a = minimize_gcs(id, eta, phi0, oracle_config(20.0, 500));
        const GcsRun b = minimize_gcs(id, scaled, phi0, oracle_config(5.0, 500));
        CHECK(a.phi.data == b.phi.data);
        CHECK(threshold_mask(a.phi, 0.5) == threshold_mask(b.phi, 0.5));
    }
}

TEST_CASE("image-driven solvers on a seeded phantom") {
    const Phantom ph = make_phantom(builtin_phantom("phantom1"));
    const ImageGrid noisy = apply_speckle(
        ph.clean, sample_speckle(ph.clean.width, ph.clean.height, {2, 7}));
    SolverConfig cfg;
    cfg.max_iters = 300;

    SUBCASE("all four models segment the disk well") {
        for (SolverId id :
             {SolverId::Model2, SolverId::Model3, SolverId::Model4}) {
            const SegmentationResult r = segment(noisy, id, cfg);
            CHECK_FALSE(r.degenerate);
            CHECK(dsc(r.mask, ph.truth) > 0.93);
        }
        SolverConfig lv = cfg;
        lv.mu = 255.0;
        const SegmentationResult r1 = segment(noisy, SolverId::Model1, lv);
        CHECK(dsc(r1.mask, ph.truth) > 0.93);
    }
    SUBCASE("models 3 and 4 nearly agree on the mask") {
        const SegmentationResult a = segment(noisy, SolverId::Model3, cfg);
        const SegmentationResult b = segment(noisy, SolverId::Model4, cfg);
        CHECK(dsc(a.mask, b.mask) > 0.98);
    }
    SUBCASE("deterministic: same input, same result") {
        const SegmentationResult a = segment(noisy, SolverId::Model3, cfg);
        const SegmentationResult b = segment(noisy, SolverId::Model3, cfg);
        CHECK(a.mask == b.mask);
        CHECK(a.phi.data == b.phi.data);
        CHECK(a.iterations == b.iterations);
    }
    SUBCASE("traces are populated and bounded") {
        const SegmentationResult r = segment(noisy, SolverId::Model3, cfg);
        CHECK(r.iterations > 0);
        CHECK(static_cast<int>(r.objective_trace.size()) == r.iterations);
        CHECK(static_cast<int>(r.stats_trace.size()) == r.iterations);
        CHECK(r.last_mask_change <= r.iterations);
        CHECK(r.max_step_norm > 0.0);
        CHECK(std::isfinite(r.max_step_norm));
        // the refreshed means should separate the two true intensities
        const RegionStats last = r.stats_trace.back();
        CHECK(last.c1 > last.c2);
    }
    SUBCASE("local blend (omega < 1) still works") {
        SolverConfig mix = cfg;
        mix.omega = 0.3;
        mix.sigma = 5.0;
        const SegmentationResult r = segment(noisy, SolverId::Model3, mix);
        CHECK(dsc(r.mask, ph.truth) > 0.9);
    }
}

TEST_CASE("degenerate constant image yields the empty mask") {
    const ImageGrid f(20, 20, 40.0);
    SolverConfig cfg;
    for (SolverId id : {SolverId::Model2, SolverId::Model3, SolverId::Model4}) {
        const SegmentationResult r = segment(f, id, cfg);
        CHECK(r.degenerate);
        for (auto v : r.mask.data) CHECK(v == 0);
    }
}

TEST_CASE("stability warning is attached but the run proceeds") {
    const Phantom ph = make_phantom(builtin_phantom("phantom2"));
    const ImageGrid noisy = apply_speckle(
        ph.clean, sample_speckle(ph.clean.width, ph.clean.height, {2, 3}));
    SolverConfig cfg;
    cfg.lambda = 0.06;  // ratio 0.3 > bound
    cfg.max_iters = 50;
    const SegmentationResult r = segment(noisy, SolverId::Model3, cfg);
    CHECK_FALSE(r.warning.empty());
    CHECK(r.iterations > 0);
    SolverConfig ok;
    ok.max_iters = 50;
    CHECK(segment(noisy, SolverId::Model3, ok).warning.empty());
}

TEST_CASE("config validation and input checks") {
    const ImageGrid f(8, 8, 10.0);
    SUBCASE("bad parameters rejected") {
        SolverConfig c;
        c.gamma = 1.5;
        CHECK_THROWS_AS(segment(f, SolverId::Model3, c), std::invalid_argument);
        SolverConfig d;
        d.lambda = -1.0;
        CHECK_THROWS_AS(segment(f, SolverId::Model3, d), std::invalid_argument);
        SolverConfig e;
        e.t = 1.0;
        CHECK_THROWS_AS(segment(f, SolverId::Model3, e), std::invalid_argument);
        SolverConfig g;
        g.omega = 2.0;
        CHECK_THROWS_AS(segment(f, SolverId::Model3, g), std::invalid_argument);
    }
    SUBCASE("negative intensities rejected") {
        ImageGrid bad = f;
        bad.data[5] = -1.0;
        CHECK_THROWS(segment(bad, SolverId::Model3, SolverConfig{}));
    }
    SUBCASE("solver names round trip") {
        for (SolverId id : {SolverId::Model1, SolverId::Model2, SolverId::Model3,
                            SolverId::Model4})
            CHECK(solver_from_name(solver_name(id)) == id);
        CHECK_THROWS_AS(solver_from_name("model9"), std::invalid_argument);
    }
}
