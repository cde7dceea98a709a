#include "glaa/speckle.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace glaa {

ScalarField sample_speckle(int width, int height, const SpeckleSpec& spec) {
    if (spec.looks < 1)
        throw std::invalid_argument("sample_speckle: looks must be >= 1");
    ScalarField n(width, height);
    std::mt19937_64 rng(spec.seed);
    std::gamma_distribution<double> gamma(static_cast<double>(spec.looks),
                                          1.0 / static_cast<double>(spec.looks));
    for (double& v : n.data) v = gamma(rng);
    return n;
}

ImageGrid apply_speckle(const ImageGrid& clean, const ScalarField& noise) {
    require_same_shape(clean, noise, "apply_speckle");
    ImageGrid out = clean;
    for (std::size_t i = 0; i < out.size(); ++i) out.data[i] *= noise.data[i];
    return clamp_floor(std::move(out));
}

namespace {

bool inside(const Shape& s, int x, int y) {
    switch (s.kind) {
        case ShapeKind::Rect:
            return x >= s.x0 && x <= s.x1 && y >= s.y0 && y <= s.y1;
        case ShapeKind::Disk: {
            const double dx = x - s.cx, dy = y - s.cy;
            return dx * dx + dy * dy <= s.r_outer * s.r_outer;
        }
        case ShapeKind::Annulus: {
            const double dx = x - s.cx, dy = y - s.cy;
            const double d2 = dx * dx + dy * dy;
            return d2 <= s.r_outer * s.r_outer && d2 > s.r_inner * s.r_inner;
        }
    }
    return false;
}

}  // namespace

Phantom make_phantom(const PhantomSpec& spec) {
    if (spec.width <= 0 || spec.height <= 0)
        throw std::invalid_argument("make_phantom: bad dimensions");
    if (spec.background <= 0)
        throw std::invalid_argument("make_phantom: background intensity must be > 0");
    Phantom p{ImageGrid(spec.width, spec.height, spec.background),
              BinaryMask(spec.width, spec.height, 0)};
    for (const Shape& s : spec.shapes) {
        if (s.intensity <= 0)
            throw std::invalid_argument("make_phantom: shape intensity must be > 0");
        for (int y = 0; y < spec.height; ++y) {
            for (int x = 0; x < spec.width; ++x) {
                if (!inside(s, x, y)) continue;
                if (p.truth.at(x, y) && p.clean.at(x, y) != s.intensity)
                    throw std::invalid_argument(
                        "make_phantom: overlapping shapes with different intensities");
                p.clean.at(x, y) = s.intensity;
                p.truth.at(x, y) = 1;
            }
        }
    }
    return p;
}

PhantomSpec parse_phantom_spec(std::istream& in) {
    PhantomSpec spec;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        // trim
        const auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        const auto e = line.find_last_not_of(" \t\r");
        line = line.substr(b, e - b + 1);
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("phantom spec line " + std::to_string(lineno) +
                                        ": expected key=value");
        const std::string key = line.substr(0, eq);
        const std::string value = line.substr(eq + 1);
        std::istringstream vs(value);
        if (key == "width") {
            vs >> spec.width;
        } else if (key == "height") {
            vs >> spec.height;
        } else if (key == "background") {
            vs >> spec.background;
        } else if (key == "shape") {
            std::string kind;
            vs >> kind;
            Shape s;
            if (kind == "disk") {
                s.kind = ShapeKind::Disk;
                vs >> s.cx >> s.cy >> s.r_outer >> s.intensity;
            } else if (kind == "rect") {
                s.kind = ShapeKind::Rect;
                vs >> s.x0 >> s.y0 >> s.x1 >> s.y1 >> s.intensity;
            } else if (kind == "annulus") {
                s.kind = ShapeKind::Annulus;
                vs >> s.cx >> s.cy >> s.r_outer >> s.r_inner >> s.intensity;
            } else {
                throw std::invalid_argument("phantom spec line " + std::to_string(lineno) +
                                            ": unknown shape '" + kind + "'");
            }
            spec.shapes.push_back(s);
        } else {
            throw std::invalid_argument("phantom spec line " + std::to_string(lineno) +
                                        ": unknown key '" + key + "'");
        }
        if (vs.fail())
            throw std::invalid_argument("phantom spec line " + std::to_string(lineno) +
                                        ": bad value for '" + key + "'");
    }
    if (spec.width <= 0 || spec.height <= 0)
        throw std::invalid_argument("phantom spec: width/height missing or invalid");
    if (spec.background <= 0)
        throw std::invalid_argument("phantom spec: background missing or invalid");
    return spec;
}

PhantomSpec load_phantom_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open phantom spec: " + path);
    return parse_phantom_spec(in);
}

PhantomSpec builtin_phantom(const std::string& name) {
    PhantomSpec spec;
    if (name == "phantom1") {
        spec.width = 85;
        spec.height = 76;
        spec.background = 10;
        Shape s;
        s.kind = ShapeKind::Disk;
        s.cx = 42;
        s.cy = 38;
        s.r_outer = 22;
        s.intensity = 250;
        spec.shapes.push_back(s);
    } else if (name == "phantom2") {
        spec.width = 85;
        spec.height = 61;
        spec.background = 10;
        Shape s;
        s.kind = ShapeKind::Rect;
        s.x0 = 20;
        s.y0 = 14;
        s.x1 = 64;
        s.y1 = 46;
        s.intensity = 250;
        spec.shapes.push_back(s);
    } else if (name == "annulus") {
        spec.width = 85;
        spec.height = 76;
        spec.background = 10;
        Shape s;
        s.kind = ShapeKind::Annulus;
        s.cx = 42;
        s.cy = 38;
        s.r_outer = 26;
        s.r_inner = 13;
        s.intensity = 250;
        spec.shapes.push_back(s);
    } else {
        throw std::invalid_argument("unknown builtin phantom: " + name);
    }
    return spec;
}

}  // namespace glaa
