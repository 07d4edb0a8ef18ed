#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <utility>

#include "dynclass/core.hpp"
#include "dynclass/dual.hpp"

namespace dynclass {

/// An autonomous vector field dx/dt = F(x) on R^n. Evaluation must be pure:
/// identical inputs give identical outputs, which is what lets downstream
/// searches run concurrently against one field.
///
/// A field carries two callables instantiated from one generic functor: the
/// plain real evaluation and the same computation over Dual scalars, so exact
/// Jacobians are always available.
class VectorField {
public:
    VectorField() = default;

    VectorField(Eigen::Index dim, std::function<Vec(const Vec&)> real,
                std::function<DualVector(const DualVector&)> dual,
                std::string name = {})
        : dim_(dim), real_(std::move(real)), dual_(std::move(dual)),
          name_(std::move(name)) {
        if (dim_ < 1) throw DimensionError("field dimension must be >= 1");
    }

    Eigen::Index dimension() const { return dim_; }
    const std::string& name() const { return name_; }

    /// Evaluate F(x). Throws EvaluationError when any output component is
    /// non-finite, DimensionError when sizes disagree.
    Vec operator()(const Vec& x) const {
        if (x.size() != dim_)
            throw DimensionError("field expects a state of dimension " +
                                 std::to_string(dim_) + ", got " +
                                 std::to_string(x.size()));
        Vec y = real_(x);
        if (y.size() != dim_)
            throw DimensionError("field returned a vector of dimension " +
                                 std::to_string(y.size()) + ", expected " +
                                 std::to_string(dim_));
        for (Eigen::Index i = 0; i < dim_; ++i)
            if (!std::isfinite(y[i]))
                throw EvaluationError("non-finite field output in component " +
                                          std::to_string(i),
                                      static_cast<long>(i));
        return y;
    }

    /// Dual-number evaluation for derivative passes. Finiteness of the
    /// derivative slots is checked by the caller, which knows the seeding.
    DualVector eval_dual(const DualVector& x) const {
        if (x.size() != dim_)
            throw DimensionError("field expects a state of dimension " +
                                 std::to_string(dim_));
        DualVector y = dual_(x);
        if (y.size() != dim_)
            throw DimensionError("field returned a vector of dimension " +
                                 std::to_string(y.size()) + ", expected " +
                                 std::to_string(dim_));
        return y;
    }

private:
    Eigen::Index dim_ = 0;
    std::function<Vec(const Vec&)> real_;
    std::function<DualVector(const DualVector&)> dual_;
    std::string name_;
};

/// Wrap a generic callable (invocable on both real and Dual state vectors)
/// as a field of known dimension.
template <class F>
VectorField make_field(F f, Eigen::Index dim, std::string name = {}) {
    if (dim < 1) throw DimensionError("field dimension must be >= 1");
    auto real = [f](const Vec& x) -> Vec { return f(x); };
    auto dual = [f](const DualVector& x) -> DualVector { return f(x); };
    return VectorField(dim, std::move(real), std::move(dual), std::move(name));
}

/// Infer the dimension from a sample point: F(sample) must succeed and return
/// a vector of the same length.
template <class F>
VectorField infer_field(F f, const Vec& sample, std::string name = {}) {
    Vec probe = f(sample);
    if (probe.size() != sample.size())
        throw DimensionError(
            "field output dimension " + std::to_string(probe.size()) +
            " is inconsistent with sample dimension " +
            std::to_string(sample.size()));
    return make_field(std::move(f), sample.size(), std::move(name));
}

} // namespace dynclass
