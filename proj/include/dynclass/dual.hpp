#pragma once

#include <cmath>
#include <utility>

#include <Eigen/Core>

namespace dynclass {

/// Forward-mode scalar: a value plus a vector of partial derivatives with
/// respect to a set of independent variables. An empty partials vector means
/// "all partials zero" regardless of how many independents are in play, so
/// plain constants stay cheap.
struct Dual {
    double value = 0.0;
    Eigen::VectorXd partials;

    Dual() = default;
    Dual(double v) : value(v) {}       // NOLINT: implicit by design
    Dual(double v, Eigen::VectorXd p) : value(v), partials(std::move(p)) {}

    /// The i-th of m independent variables with value v.
    static Dual seed(double v, Eigen::Index i, Eigen::Index m) {
        Eigen::VectorXd p = Eigen::VectorXd::Zero(m);
        p[i] = 1.0;
        return {v, std::move(p)};
    }

    Dual& operator+=(const Dual& o);
    Dual& operator-=(const Dual& o);
    Dual& operator*=(const Dual& o);
    Dual& operator/=(const Dual& o);
};

namespace detail {

// ca * a + cb * b where either vector may be empty (= zero).
inline Eigen::VectorXd lincomb(double ca, const Eigen::VectorXd& a,
                               double cb, const Eigen::VectorXd& b) {
    if (a.size() == 0) {
        if (b.size() == 0) return {};
        return cb * b;
    }
    if (b.size() == 0) return ca * a;
    return ca * a + cb * b;
}

inline Eigen::VectorXd scaled(double c, const Eigen::VectorXd& a) {
    if (a.size() == 0) return {};
    return c * a;
}

} // namespace detail

inline Dual operator+(const Dual& a, const Dual& b) {
    return {a.value + b.value, detail::lincomb(1.0, a.partials, 1.0, b.partials)};
}
inline Dual operator-(const Dual& a, const Dual& b) {
    return {a.value - b.value, detail::lincomb(1.0, a.partials, -1.0, b.partials)};
}
inline Dual operator*(const Dual& a, const Dual& b) {
    return {a.value * b.value,
            detail::lincomb(b.value, a.partials, a.value, b.partials)};
}
inline Dual operator/(const Dual& a, const Dual& b) {
    const double inv = 1.0 / b.value;
    return {a.value * inv,
            detail::lincomb(inv, a.partials, -a.value * inv * inv, b.partials)};
}
inline Dual operator-(const Dual& a) {
    return {-a.value, detail::scaled(-1.0, a.partials)};
}
inline Dual operator+(const Dual& a) { return a; }

inline Dual& Dual::operator+=(const Dual& o) { return *this = *this + o; }
inline Dual& Dual::operator-=(const Dual& o) { return *this = *this - o; }
inline Dual& Dual::operator*=(const Dual& o) { return *this = *this * o; }
inline Dual& Dual::operator/=(const Dual& o) { return *this = *this / o; }

inline bool operator<(const Dual& a, const Dual& b) { return a.value < b.value; }
inline bool operator>(const Dual& a, const Dual& b) { return a.value > b.value; }
inline bool operator<=(const Dual& a, const Dual& b) { return a.value <= b.value; }
inline bool operator>=(const Dual& a, const Dual& b) { return a.value >= b.value; }
inline bool operator==(const Dual& a, const Dual& b) { return a.value == b.value; }
inline bool operator!=(const Dual& a, const Dual& b) { return a.value != b.value; }

// f(a) with known scalar derivative g = f'(a.value).
inline Dual chain(double f, double g, const Dual& a) {
    return {f, detail::scaled(g, a.partials)};
}

inline Dual exp(const Dual& a) {
    const double e = std::exp(a.value);
    return chain(e, e, a);
}
inline Dual log(const Dual& a) { return chain(std::log(a.value), 1.0 / a.value, a); }
inline Dual sin(const Dual& a) { return chain(std::sin(a.value), std::cos(a.value), a); }
inline Dual cos(const Dual& a) { return chain(std::cos(a.value), -std::sin(a.value), a); }
inline Dual tan(const Dual& a) {
    const double c = std::cos(a.value);
    return chain(std::tan(a.value), 1.0 / (c * c), a);
}
inline Dual tanh(const Dual& a) {
    const double t = std::tanh(a.value);
    return chain(t, 1.0 - t * t, a);
}
inline Dual sqrt(const Dual& a) {
    const double s = std::sqrt(a.value);
    return chain(s, 0.5 / s, a);
}
inline Dual abs(const Dual& a) {
    const double sg = a.value > 0.0 ? 1.0 : (a.value < 0.0 ? -1.0 : 0.0);
    return chain(std::abs(a.value), sg, a);
}

/// Integer power by repeated multiplication; exact at the origin, unlike the
/// exp/log route.
inline Dual pow(const Dual& a, long n) {
    if (n == 0) return Dual{1.0};
    if (n < 0) return Dual{1.0} / pow(a, -n);
    const double vpow = std::pow(a.value, static_cast<double>(n));
    const double dpow =
        static_cast<double>(n) * std::pow(a.value, static_cast<double>(n - 1));
    return chain(vpow, dpow, a);
}
inline Dual pow(const Dual& a, double e) {
    return chain(std::pow(a.value, e), e * std::pow(a.value, e - 1.0), a);
}
inline Dual pow(const Dual& a, const Dual& b) {
    if (b.partials.size() == 0) return pow(a, b.value);
    // a^b = exp(b log a); only valid for a > 0 like the real counterpart
    return exp(b * log(a));
}

inline const Dual& min(const Dual& a, const Dual& b) { return b.value < a.value ? b : a; }
inline const Dual& max(const Dual& a, const Dual& b) { return b.value > a.value ? b : a; }

inline bool isfinite(const Dual& a) {
    if (!std::isfinite(a.value)) return false;
    return a.partials.size() == 0 || a.partials.allFinite();
}

using DualVector = Eigen::Matrix<Dual, Eigen::Dynamic, 1>;

} // namespace dynclass

namespace Eigen {

template <>
struct NumTraits<dynclass::Dual> : NumTraits<double> {
    using Real = dynclass::Dual;
    using NonInteger = dynclass::Dual;
    using Nested = dynclass::Dual;
    using Literal = double;
    enum {
        IsComplex = 0,
        IsInteger = 0,
        IsSigned = 1,
        RequireInitialization = 1,
        ReadCost = 1,
        AddCost = 4,
        MulCost = 4,
    };
};

template <typename BinaryOp>
struct ScalarBinaryOpTraits<dynclass::Dual, double, BinaryOp> {
    using ReturnType = dynclass::Dual;
};
template <typename BinaryOp>
struct ScalarBinaryOpTraits<double, dynclass::Dual, BinaryOp> {
    using ReturnType = dynclass::Dual;
};

} // namespace Eigen

namespace dynclass {

inline Dual operator+(const Dual& a, double b) { return {a.value + b, a.partials}; }
inline Dual operator+(double a, const Dual& b) { return {a + b.value, b.partials}; }
inline Dual operator-(const Dual& a, double b) { return {a.value - b, a.partials}; }
inline Dual operator-(double a, const Dual& b) {
    return {a - b.value, detail::scaled(-1.0, b.partials)};
}
inline Dual operator*(const Dual& a, double b) {
    return {a.value * b, detail::scaled(b, a.partials)};
}
inline Dual operator*(double a, const Dual& b) {
    return {a * b.value, detail::scaled(a, b.partials)};
}
inline Dual operator/(const Dual& a, double b) {
    return {a.value / b, detail::scaled(1.0 / b, a.partials)};
}
inline Dual operator/(double a, const Dual& b) {
    const double inv = 1.0 / b.value;
    return {a * inv, detail::scaled(-a * inv * inv, b.partials)};
}

} // namespace dynclass
