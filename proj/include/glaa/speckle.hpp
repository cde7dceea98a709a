#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "glaa/field.hpp"

namespace glaa {

/// L-look speckle: i.i.d. Gamma(shape=L, scale=1/L), so mean 1, variance 1/L.
struct SpeckleSpec {
    int looks = 1;
    std::uint64_t seed = 0;
};

ScalarField sample_speckle(int width, int height, const SpeckleSpec& spec);

/// Pointwise product f = u * n, clamped to the intensity floor.
ImageGrid apply_speckle(const ImageGrid& clean, const ScalarField& noise);

enum class ShapeKind { Rect, Disk, Annulus };

struct Shape {
    ShapeKind kind = ShapeKind::Disk;
    // Rect: (x0,y0)-(x1,y1) inclusive corners.
    // Disk: center (cx,cy), radius r_outer.
    // Annulus: center (cx,cy), radii r_outer > r_inner; the hole is background.
    double x0 = 0, y0 = 0, x1 = 0, y1 = 0;
    double cx = 0, cy = 0, r_outer = 0, r_inner = 0;
    double intensity = 0;
};

struct PhantomSpec {
    int width = 0;
    int height = 0;
    double background = 0;
    std::vector<Shape> shapes;
};

struct Phantom {
    ImageGrid clean;
    BinaryMask truth;
};

/// Rasterize a piecewise-constant phantom. Overlapping shapes with different
/// intensities are an error.
Phantom make_phantom(const PhantomSpec& spec);

/// Plain-text spec, one key=value per line:
///   width=85
///   height=76
///   background=10
///   shape=disk <cx> <cy> <r> <intensity>
///   shape=rect <x0> <y0> <x1> <y1> <intensity>
///   shape=annulus <cx> <cy> <r_outer> <r_inner> <intensity>
PhantomSpec parse_phantom_spec(std::istream& in);
PhantomSpec load_phantom_spec(const std::string& path);

/// Built-in phantoms: "phantom1" (85x76 disk), "phantom2" (85x61 rectangle),
/// "annulus" (85x76 ring with a hole).
PhantomSpec builtin_phantom(const std::string& name);

}  // namespace glaa
