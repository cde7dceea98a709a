#pragma once

#include "glaa/field.hpp"

namespace glaa {

enum class Axis { X, Y };

/// Forward difference u[i+1]-u[i] along the given axis; the last column
/// (resp. row) of differences is 0 (Neumann boundary).
ScalarField forward_diff(const ScalarField& u, Axis axis);

/// Exact matrix adjoint of forward_diff under the Euclidean inner product:
/// (D^T v)[0] = -v[0], interior v[i-1]-v[i], last entry v[n-2].
ScalarField adjoint_diff(const ScalarField& v, Axis axis);

/// Central difference (u[i+1]-u[i-1])/2 with replicated out-of-range
/// neighbors. Used by the level-set curvature term and the edge indicator.
ScalarField central_diff(const ScalarField& u, Axis axis);

/// Five-point Laplacian with replicated out-of-range neighbors.
ScalarField laplacian_central(const ScalarField& u);

/// Normalized 1-D Gaussian taps, truncated at radius ceil(4*sigma).
std::vector<double> gaussian_kernel(double sigma);

/// Separable Gaussian blur, replicate-edge padding, kernel sums to 1.
ScalarField gaussian_convolve(const ScalarField& u, double sigma);

double dot(const ScalarField& a, const ScalarField& b);
double norm2(const ScalarField& a);

}  // namespace glaa
