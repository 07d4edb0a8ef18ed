#pragma once

#include <Eigen/Dense>

#include "dynclass/errors.hpp"

namespace dynclass {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;

/// Axis-aligned search region, one [lo, hi] interval per state dimension.
struct Box {
    Vec lo;
    Vec hi;

    Box() = default;
    Box(Vec lo_, Vec hi_) : lo(std::move(lo_)), hi(std::move(hi_)) { validate(); }

    Eigen::Index dim() const { return lo.size(); }
    Vec span() const { return hi - lo; }
    double diameter() const { return (hi - lo).norm(); }

    /// Containment with a symmetric per-axis margin of margin_frac * span.
    bool contains(const Vec& x, double margin_frac = 0.0) const {
        for (Eigen::Index i = 0; i < lo.size(); ++i) {
            const double m = margin_frac * (hi[i] - lo[i]);
            if (x[i] < lo[i] - m || x[i] > hi[i] + m) return false;
        }
        return true;
    }

    void validate() const {
        if (lo.size() == 0 || lo.size() != hi.size())
            throw DimensionError("bounds must be non-empty with matching lo/hi arity");
        for (Eigen::Index i = 0; i < lo.size(); ++i)
            if (!(lo[i] < hi[i]))
                throw DimensionError("bounds axis " + std::to_string(i) +
                                     " has lo >= hi");
    }
};

} // namespace dynclass
