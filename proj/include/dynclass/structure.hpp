#pragma once

#include <cstdint>

#include "dynclass/core.hpp"
#include "dynclass/vectorfield.hpp"

namespace dynclass {

/// Seeded uniform sampling plan for region-wide tests.
struct RegionSample {
    Box bounds;
    int n_samples = 100;
    std::uint64_t seed = 0;
};

/// Frobenius norm of the antisymmetric part, ||(J - J^T)/2||_F.
double symmetry_error(const Mat& j);

/// symmetry_error(J) / ||J||_F; zero for a (near-)zero matrix so fixed points
/// can be sampled without special cases.
double relative_symmetry_error(const Mat& j);

/// Entrywise |J_ij - J_ji| <= atol + rtol * max(|J_ij|, |J_ji|).
bool is_symmetric(const Mat& j, double rtol = 1e-8, double atol = 1e-10);

/// Rotational strength at a point: |scalar curl| in 2D, ||curl F|| in 3D,
/// ||(J - J^T)/2||_F in higher dimensions, 0 in 1D.
double curl_magnitude(const VectorField& field, const Vec& x);

bool is_curl_free(const VectorField& field, const Vec& x, double atol = 1e-10);
bool is_curl_free(const VectorField& field, const RegionSample& region,
                  double atol = 1e-10);

/// curl_magnitude / max(||F(x)||, 1e-12).
double curl_to_gradient_ratio(const VectorField& field, const Vec& x);

} // namespace dynclass
