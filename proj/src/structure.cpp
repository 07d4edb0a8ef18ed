#include "dynclass/structure.hpp"

#include <cmath>

#include "dynclass/numerics.hpp"
#include "dynclass/rng.hpp"

namespace dynclass {

double symmetry_error(const Mat& j) {
    if (j.rows() != j.cols())
        throw DimensionError("symmetry error requires a square matrix");
    return 0.5 * (j - j.transpose()).norm();
}

double relative_symmetry_error(const Mat& j) {
    const double scale = j.norm();
    if (scale < 1e-14) return 0.0;
    return symmetry_error(j) / scale;
}

bool is_symmetric(const Mat& j, double rtol, double atol) {
    if (j.rows() != j.cols())
        throw DimensionError("symmetry test requires a square matrix");
    for (Eigen::Index r = 0; r < j.rows(); ++r)
        for (Eigen::Index c = r + 1; c < j.cols(); ++c) {
            const double a = j(r, c), b = j(c, r);
            if (std::abs(a - b) > atol + rtol * std::max(std::abs(a), std::abs(b)))
                return false;
        }
    return true;
}

double curl_magnitude(const VectorField& field, const Vec& x) {
    const Eigen::Index n = field.dimension();
    if (n == 1) return 0.0;
    const Mat j = jacobian(field, x);
    if (n == 2) return std::abs(j(1, 0) - j(0, 1));
    if (n == 3) {
        const Vec curl{{j(2, 1) - j(1, 2), j(0, 2) - j(2, 0), j(1, 0) - j(0, 1)}};
        return curl.norm();
    }
    return symmetry_error(j);
}

bool is_curl_free(const VectorField& field, const Vec& x, double atol) {
    return curl_magnitude(field, x) <= atol;
}

bool is_curl_free(const VectorField& field, const RegionSample& region,
                  double atol) {
    region.bounds.validate();
    Rng rng(region.seed);
    // verdict is an AND over samples, independent of evaluation order
    bool ok = true;
    for (int i = 0; i < region.n_samples; ++i) {
        const Vec x = rng.point_in(region.bounds);
        if (!is_curl_free(field, x, atol)) ok = false;
    }
    return ok;
}

double curl_to_gradient_ratio(const VectorField& field, const Vec& x) {
    return curl_magnitude(field, x) / std::max(field(x).norm(), 1e-12);
}

} // namespace dynclass
