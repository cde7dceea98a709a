#pragma once

#include <optional>

#include "glaa/field.hpp"
#include "glaa/solvers.hpp"

namespace glaa {

struct EvalReport {
    std::optional<double> dsc;  // absent when no ground truth is given
    double pp = 0.0;
    int iterations = 0;
    double wall_time = 0.0;
};

/// Dice similarity 2 N(CS and GT) / (N(CS) + N(GT)); both empty -> 1.
double dsc(const BinaryMask& cs, const BinaryMask& gt);

/// Region uniformity over the two phases:
///   pp = 1 - (1/C) sum_i sum_{x in R_i} (f(x) - mean_i)^2
/// with C = N (max f - min f)^2. Constant image -> 1 by convention.
double uniformity_pp(const ImageGrid& f, const BinaryMask& mask);

EvalReport evaluate(const SegmentationResult& result, const ImageGrid& f,
                    const BinaryMask* gt = nullptr);

}  // namespace glaa
