#pragma once

#include <map>
#include <string>
#include <vector>

#include "dynclass/vectorfield.hpp"

namespace dynclass {

template <class T>
using VecT = Eigen::Matrix<T, Eigen::Dynamic, 1>;

/// Rate constants of the four-species stem-cell differentiation model
/// (Nanog, Oct4-Sox2, Fgf4, Gata6) with LIF concentration L as the external
/// control. Defaults are the published parameter block.
struct StemCellParams {
    double k0 = 0.005;
    double k1 = 0.01;
    double k2 = 0.4;
    double k3 = 1.0;
    double k4 = 0.1;
    double k5 = 0.00135;
    double k6 = 0.01;
    double k7 = 0.01;
    double k8 = 1.0;
    double k9 = 1.0;
    double k10 = 0.01;
    double k11 = 5.0;
    double k12 = 1.0;
    double k13 = 0.005;
    double k14 = 1.0;
    double kd = 1.0;
    double L = 50.0;
};

namespace models {

struct Gradient2D {
    // F = -grad(x1^2 + x2^2)
    template <class T>
    VecT<T> operator()(const VecT<T>& x) const {
        VecT<T> v(2);
        v[0] = -2.0 * x[0];
        v[1] = -2.0 * x[1];
        return v;
    }
};

struct DampedRotation {
    double omega = 1.0;

    template <class T>
    VecT<T> operator()(const VecT<T>& x) const {
        VecT<T> v(2);
        v[0] = -x[0] + omega * x[1];
        v[1] = -omega * x[0] - x[1];
        return v;
    }
};

struct ToggleSwitch {
    double a = 1.0;
    double n = 2.0;

    template <class T>
    VecT<T> operator()(const VecT<T>& x) const {
        using std::pow;
        VecT<T> v(2);
        v[0] = a / (1.0 + pow(x[1], n)) - x[0];
        v[1] = a / (1.0 + pow(x[0], n)) - x[1];
        return v;
    }
};

struct VanDerPol {
    template <class T>
    VecT<T> operator()(const VecT<T>& x) const {
        VecT<T> v(2);
        v[0] = x[1];
        v[1] = (1.0 - x[0] * x[0]) * x[1] - x[0];
        return v;
    }
};

struct Lorenz {
    double sigma = 10.0;
    double rho = 28.0;
    double beta = 8.0 / 3.0;

    template <class T>
    VecT<T> operator()(const VecT<T>& x) const {
        VecT<T> v(3);
        v[0] = sigma * (x[1] - x[0]);
        v[1] = x[0] * (rho - x[2]) - x[1];
        v[2] = x[0] * x[1] - beta * x[2];
        return v;
    }
};

/// Production propensities a1..a4 with first-order degradation at rate kd,
/// composed through the (I | -I) stoichiometry of the eight reactions.
struct StemCell {
    StemCellParams p;

    template <class T>
    VecT<T> operator()(const VecT<T>& x) const {
        const T& N = x[0];
        const T& O = x[1];
        const T& F = x[2];
        const T& G = x[3];

        const T N2 = N * N;
        const T F2 = F * F;
        const T G2 = G * G;

        const T a1 = p.k0 * O * (p.k1 + p.k2 * N2 + p.k0 * O + p.k3 * p.L) /
                     (1.0 + p.k0 * O * (p.k2 * N2 + p.k0 * O + p.k3 * p.L + p.k4 * F2) +
                      p.k5 * O * G2);
        const T a2 = (p.k6 + p.k7 * O) / (1.0 + p.k7 * O + p.k8 * G2);
        const T a3 = (p.k9 + p.k10 * O) / (1.0 + p.k10 * O);
        const T a4 = (p.k11 + p.k12 * G2 + p.k14 * O) /
                     (1.0 + p.k12 * G2 + p.k13 * N2 + p.k14 * O);

        VecT<T> v(4);
        v[0] = a1 - p.kd * N;
        v[1] = a2 - p.kd * O;
        v[2] = a3 - p.kd * F;
        v[3] = a4 - p.kd * G;
        return v;
    }
};

} // namespace models

/// Net rates of the stem-cell model at a concentration state [N, O, F, G].
inline Vec stem_cell_rhs(const Vec& x, const StemCellParams& params = {}) {
    if (x.size() != 4)
        throw DimensionError("stem cell model expects a 4-vector [N, O, F, G]");
    return models::StemCell{params}(x);
}

using ParamMap = std::map<std::string, double>;

/// Names of the built-in models, in listing order.
const std::vector<std::string>& builtin_names();

/// Construct a built-in model by name with optional parameter overrides.
/// Unknown model names and unknown parameter keys are errors.
VectorField builtin(const std::string& name, const ParamMap& params = {});

/// State dimension of a built-in model without constructing it.
Eigen::Index builtin_dimension(const std::string& name);

} // namespace dynclass
