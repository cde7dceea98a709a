// sarseg: speckle-noise image segmentation front end.
//   synth    generate a ground-truthed phantom with L-look gamma speckle
//   segment  run one of the four solvers on an image
//   bench    run a solver grid over a corpus and emit a CSV table

#include <CLI11.hpp>

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <vector>

#include "glaa/image_io.hpp"
#include "glaa/metrics.hpp"
#include "glaa/solvers.hpp"
#include "glaa/speckle.hpp"

namespace fs = std::filesystem;
using namespace glaa;

namespace {

constexpr const char* kVersion = "sarseg 0.1.0";

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_config(std::ostream& out, const SolverConfig& c) {
    out << "mu=" << fmt(c.mu) << "\n"
        << "lambda=" << fmt(c.lambda) << "\n"
        << "alpha=" << fmt(c.alpha) << "\n"
        << "t=" << fmt(c.t) << "\n"
        << "gamma=" << fmt(c.gamma) << "\n"
        << "dt=" << fmt(c.dt) << "\n"
        << "epsilon=" << fmt(c.epsilon) << "\n"
        << "sigma=" << fmt(c.sigma) << "\n"
        << "omega=" << fmt(c.omega) << "\n"
        << "beta=" << fmt(c.beta) << "\n"
        << "max_iters=" << c.max_iters << "\n"
        << "tol=" << fmt(c.tol) << "\n"
        << "stats_refresh=" << c.stats_refresh << "\n"
        << "edge_weighted_shrink=" << (c.edge_weighted_shrink ? 1 : 0) << "\n";
}

struct Manifest {
    std::string command;
    std::vector<std::pair<std::string, std::string>> entries;
    void add(const std::string& k, const std::string& v) { entries.emplace_back(k, v); }
    void write(const fs::path& path, const SolverConfig* cfg = nullptr) const {
        std::ofstream out(path);
        out << "version=" << kVersion << "\n";
        out << "command=" << command << "\n";
        for (const auto& [k, v] : entries) out << k << "=" << v << "\n";
        if (cfg) write_config(out, *cfg);
    }
};

// Named parameter presets mirroring the published experiment settings.
void apply_preset(const std::string& name, SolverConfig& cfg) {
    if (name == "synth-model1") {
        cfg.mu = 255.0;
        cfg.dt = 0.1;
        cfg.epsilon = 1.0;
        cfg.omega = 1.0;
    } else if (name == "synth-fpa") {
        cfg.mu = 20.0;
        cfg.lambda = 0.02;
        cfg.alpha = 0.2;
        cfg.t = 1e-5;
        cfg.gamma = 0.5;
        cfg.omega = 1.0;
    } else if (name == "sar-model1") {
        cfg.mu = 255.0;
        cfg.dt = 0.1;
        cfg.epsilon = 1.0;
        cfg.omega = 0.2;
        cfg.sigma = 20.0;
    } else if (name == "sar-fpa") {
        cfg.mu = 20.0;
        cfg.lambda = 0.02;
        cfg.alpha = 0.2;
        cfg.t = 1e-5;
        cfg.gamma = 0.5;
        cfg.omega = 0.2;
        cfg.sigma = 20.0;
    } else {
        throw CLI::ValidationError("--preset",
                                   "unknown preset (want synth-model1, synth-fpa, "
                                   "sar-model1 or sar-fpa): " + name);
    }
}

ImageGrid overlay_contour(const ImageGrid& img, const BinaryMask& mask) {
    ImageGrid out = img;
    const double hi = 255.0;
    for (int y = 0; y < mask.height; ++y) {
        for (int x = 0; x < mask.width; ++x) {
            if (!mask.at(x, y)) continue;
            const bool boundary =
                x == 0 || x == mask.width - 1 || y == 0 || y == mask.height - 1 ||
                !mask.at(x - 1, y) || !mask.at(x + 1, y) || !mask.at(x, y - 1) ||
                !mask.at(x, y + 1);
            if (boundary) out.at(x, y) = hi;
        }
    }
    return out;
}

void write_trace_csv(const fs::path& path, const SegmentationResult& r) {
    std::ofstream out(path);
    out << "iter,objective,c1,c2\n";
    for (std::size_t i = 0; i < r.objective_trace.size(); ++i) {
        out << (i + 1) << "," << fmt(r.objective_trace[i]) << ","
            << fmt(i < r.stats_trace.size() ? r.stats_trace[i].c1 : 0.0) << ","
            << fmt(i < r.stats_trace.size() ? r.stats_trace[i].c2 : 0.0) << "\n";
    }
}

void write_report(const fs::path& path, const SegmentationResult& r,
                  const EvalReport& report) {
    std::ofstream out(path);
    out << "# pp normalization: C = N * (fmax - fmin)^2\n";
    out << "iterations=" << report.iterations << "\n";
    out << "wall_time_s=" << fmt(report.wall_time) << "\n";
    out << "pp=" << fmt(report.pp) << "\n";
    if (report.dsc) out << "dsc=" << fmt(*report.dsc) << "\n";
    out << "degenerate=" << (r.degenerate ? 1 : 0) << "\n";
    if (!r.warning.empty()) out << "warning=" << r.warning << "\n";
}

// ---------------------------------------------------------------------------
// synth
// ---------------------------------------------------------------------------

struct SynthArgs {
    std::string spec_file;
    std::string phantom = "phantom1";
    int looks = 2;
    std::uint64_t seed = 0;
    std::string out_dir = ".";
};

int run_synth(const SynthArgs& a) {
    const PhantomSpec spec = a.spec_file.empty() ? builtin_phantom(a.phantom)
                                                 : load_phantom_spec(a.spec_file);
    const Phantom phantom = make_phantom(spec);
    const ScalarField noise = sample_speckle(spec.width, spec.height,
                                             SpeckleSpec{a.looks, a.seed});
    const ImageGrid noisy = apply_speckle(phantom.clean, noise);

    fs::create_directories(a.out_dir);
    const fs::path dir(a.out_dir);
    write_pgm((dir / "clean.pgm").string(), phantom.clean);
    write_pgm((dir / "noisy.pgm").string(), noisy);
    write_pgm((dir / "gt.pgm").string(), phantom.truth);

    Manifest m;
    m.command = "synth";
    m.add("phantom", a.spec_file.empty() ? a.phantom : a.spec_file);
    m.add("width", std::to_string(spec.width));
    m.add("height", std::to_string(spec.height));
    m.add("background_intensity", fmt(spec.background));
    for (std::size_t i = 0; i < spec.shapes.size(); ++i)
        m.add("shape" + std::to_string(i) + "_intensity", fmt(spec.shapes[i].intensity));
    m.add("looks", std::to_string(a.looks));
    m.add("seed", std::to_string(a.seed));
    m.add("out_clean", (dir / "clean.pgm").string());
    m.add("out_noisy", (dir / "noisy.pgm").string());
    m.add("out_gt", (dir / "gt.pgm").string());
    m.write(dir / "manifest.txt");
    std::cout << "wrote " << (dir / "noisy.pgm").string() << " (" << spec.width << "x"
              << spec.height << ", L=" << a.looks << ")\n";
    return 0;
}

// ---------------------------------------------------------------------------
// segment
// ---------------------------------------------------------------------------

struct SegmentArgs {
    std::string input;
    std::string solver = "model3";
    std::string gt_path;
    std::string out_dir = ".";
    std::string preset;
    SolverConfig cfg;
};

int run_segment(const SegmentArgs& a) {
    const ImageGrid f = clamp_floor(read_image(a.input));
    const SolverId id = solver_from_name(a.solver);

    if (id == SolverId::Model3 || id == SolverId::Model4) {
        const StabilityCheck c =
            check_stability(a.cfg.lambda, a.cfg.alpha, std::min(f.width, f.height));
        if (!c.ok)
            std::cerr << "warning: lambda/alpha = " << c.ratio
                      << " exceeds the nonexpansiveness bound " << c.bound
                      << "; proceeding\n";
    }

    const SegmentationResult result = segment(f, id, a.cfg);
    if (!result.warning.empty()) std::cerr << "warning: " << result.warning << "\n";

    BinaryMask gt;
    const bool has_gt = !a.gt_path.empty();
    if (has_gt) gt = read_mask(a.gt_path);
    const EvalReport report = evaluate(result, f, has_gt ? &gt : nullptr);

    fs::create_directories(a.out_dir);
    const fs::path dir(a.out_dir);
    write_pgm((dir / "mask.pgm").string(), result.mask);
    write_pgm((dir / "overlay.pgm").string(), overlay_contour(f, result.mask));
    write_trace_csv(dir / "trace.csv", result);
    write_report(dir / "report.txt", result, report);

    Manifest m;
    m.command = "segment";
    m.add("input", a.input);
    m.add("solver", a.solver);
    if (!a.preset.empty()) m.add("preset", a.preset);
    if (has_gt) m.add("gt", a.gt_path);
    m.add("out_mask", (dir / "mask.pgm").string());
    m.add("out_overlay", (dir / "overlay.pgm").string());
    m.add("out_trace", (dir / "trace.csv").string());
    m.add("out_report", (dir / "report.txt").string());
    m.write(dir / "manifest.txt", &a.cfg);

    std::cout << "iterations=" << report.iterations << " wall_time_s=" << report.wall_time
              << " pp=" << report.pp;
    if (report.dsc) std::cout << " dsc=" << *report.dsc;
    std::cout << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// bench
// ---------------------------------------------------------------------------

struct BenchArgs {
    std::string corpus;
    std::vector<std::string> solvers{"model1", "model2", "model3", "model4"};
    int repeats = 3;
    std::string out_csv = "bench.csv";
    SolverConfig cfg;
};

bool is_gt_file(const fs::path& p) {
    const std::string stem = p.stem().string();
    return stem.size() >= 3 && stem.compare(stem.size() - 3, 3, "_gt") == 0;
}

int run_bench(const BenchArgs& a) {
    std::vector<fs::path> images;
    for (const auto& entry : fs::directory_iterator(a.corpus)) {
        if (!entry.is_regular_file()) continue;
        const auto ext = entry.path().extension().string();
        if ((ext == ".pgm" || ext == ".png") && !is_gt_file(entry.path()))
            images.push_back(entry.path());
    }
    if (images.empty()) {
        std::cerr << "error: no images in corpus " << a.corpus << "\n";
        return 2;
    }
    std::sort(images.begin(), images.end());
    std::vector<std::string> solvers = a.solvers;
    std::sort(solvers.begin(), solvers.end());

    std::ofstream csv(a.out_csv);
    csv << "image,solver,iterations,wall_time_s,dsc,pp\n";
    for (const fs::path& img_path : images) {
        const ImageGrid f = clamp_floor(read_image(img_path.string()));
        fs::path gt_path = img_path;
        gt_path.replace_filename(img_path.stem().string() + "_gt" +
                                 img_path.extension().string());
        const bool has_gt = fs::exists(gt_path);
        BinaryMask gt;
        if (has_gt) gt = read_mask(gt_path.string());
        for (const std::string& solver : solvers) {
            const SolverId id = solver_from_name(solver);
            std::vector<double> times;
            SegmentationResult result;
            for (int rep = 0; rep < a.repeats; ++rep) {  // timing repeats run serially
                result = segment(f, id, a.cfg);
                times.push_back(result.wall_time);
            }
            std::sort(times.begin(), times.end());
            const double median = times[times.size() / 2];
            const EvalReport report = evaluate(result, f, has_gt ? &gt : nullptr);
            csv << img_path.string() << "," << solver << "," << report.iterations << ","
                << fmt(median) << "," << (report.dsc ? fmt(*report.dsc) : std::string())
                << "," << fmt(report.pp) << "\n";
        }
    }
    std::cout << "wrote " << a.out_csv << "\n";
    return 0;
}

void add_config_flags(CLI::App* cmd, SolverConfig& cfg, std::string& preset) {
    cmd->add_option("--preset", preset,
                    "named parameter preset (synth-model1, synth-fpa, "
                    "sar-model1, sar-fpa)");
    // preset applied first, explicit flags override it
    cmd->add_option("--mu", cfg.mu, "data weight");
    cmd->add_option("--lambda", cfg.lambda, "TV penalty weight");
    cmd->add_option("--alpha", cfg.alpha, "proximity weight");
    cmd->add_option("--t", cfg.t, "relaxation parameter in (0,1)");
    cmd->add_option("--gamma", cfg.gamma, "threshold in (0,1)");
    cmd->add_option("--dt", cfg.dt, "time step (model1)");
    cmd->add_option("--eps", cfg.epsilon, "Heaviside width");
    cmd->add_option("--sigma", cfg.sigma, "Gaussian kernel std-dev");
    cmd->add_option("--omega", cfg.omega, "global/local mix in [0,1]");
    cmd->add_option("--beta", cfg.beta, "edge-indicator contrast (0 = auto)");
    cmd->add_option("--iters", cfg.max_iters, "iteration budget");
    cmd->add_option("--tol", cfg.tol, "relative-change stopping tolerance");
    cmd->add_option("--stats-refresh", cfg.stats_refresh,
                    "iterations between statistics refreshes (model1)");
    cmd->add_flag("--edge-shrink", cfg.edge_weighted_shrink,
                  "model4: per-pixel edge-weighted shrink threshold g/lambda");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Variational segmentation of images with multiplicative gamma "
                 "(speckle) noise"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    SynthArgs synth;
    auto* synth_cmd = app.add_subcommand("synth", "generate a speckled phantom");
    synth_cmd->add_option("--spec", synth.spec_file, "phantom spec file (key=value)");
    synth_cmd->add_option("--phantom", synth.phantom,
                          "builtin phantom: phantom1, phantom2, annulus");
    synth_cmd->add_option("--L", synth.looks, "equivalent number of looks")
        ->check(CLI::Range(1, 1 << 20));
    synth_cmd->add_option("--seed", synth.seed, "RNG seed");
    synth_cmd->add_option("--out", synth.out_dir, "output directory")->required();

    SegmentArgs seg;
    auto* seg_cmd = app.add_subcommand("segment", "segment one image");
    seg_cmd->add_option("--in", seg.input, "input image (PGM P5 or PNG)")->required();
    seg_cmd->add_option("--solver", seg.solver, "model1|model2|model3|model4");
    seg_cmd->add_option("--gt", seg.gt_path, "ground-truth mask for DSC");
    seg_cmd->add_option("--out", seg.out_dir, "output directory")->required();
    add_config_flags(seg_cmd, seg.cfg, seg.preset);

    BenchArgs bench;
    auto* bench_cmd = app.add_subcommand("bench", "benchmark solvers over a corpus");
    bench_cmd->add_option("--corpus", bench.corpus, "directory of images (+ *_gt masks)")
        ->required();
    bench_cmd->add_option("--solvers", bench.solvers, "solvers to run")->delimiter(',');
    bench_cmd->add_option("--repeats", bench.repeats, "timing repeats (median reported)")
        ->check(CLI::Range(1, 1000));
    bench_cmd->add_option("--out", bench.out_csv, "output CSV path");
    std::string bench_preset;
    add_config_flags(bench_cmd, bench.cfg, bench_preset);

    // Apply presets before explicit flags: parse once to find the preset, then
    // re-parse so explicit flags win.
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*seg_cmd) {
            if (!seg.preset.empty()) {
                apply_preset(seg.preset, seg.cfg);
                app.clear();
                app.parse(argc, argv);  // explicit flags override preset values
            }
            return run_segment(seg);
        }
        if (*synth_cmd) return run_synth(synth);
        if (*bench_cmd) {
            if (!bench_preset.empty()) {
                apply_preset(bench_preset, bench.cfg);
                app.clear();
                app.parse(argc, argv);
            }
            return run_bench(bench);
        }
    } catch (const NumericalError& e) {
        std::cerr << "numerical abort: " << e.what() << "\n";
        return 3;
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
