#include "dynclass/fixedpoints.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <optional>

#include "dynclass/numerics.hpp"
#include "dynclass/parallel.hpp"
#include "dynclass/rng.hpp"

namespace dynclass {

const char* to_string(FixedPointType type) {
    switch (type) {
        case FixedPointType::STABLE_NODE: return "STABLE_NODE";
        case FixedPointType::UNSTABLE_NODE: return "UNSTABLE_NODE";
        case FixedPointType::SADDLE: return "SADDLE";
        case FixedPointType::STABLE_FOCUS: return "STABLE_FOCUS";
        case FixedPointType::UNSTABLE_FOCUS: return "UNSTABLE_FOCUS";
        case FixedPointType::CENTER: return "CENTER";
        case FixedPointType::NON_HYPERBOLIC: return "NON_HYPERBOLIC";
    }
    return "UNKNOWN";
}

FixedPointType classify_eigenvalues(const CVec& eigenvalues, double hyper_tol) {
    if (eigenvalues.size() == 0)
        throw DimensionError("cannot classify an empty spectrum");

    double max_mag = 0.0;
    for (Eigen::Index i = 0; i < eigenvalues.size(); ++i)
        max_mag = std::max(max_mag, std::abs(eigenvalues[i]));
    const double zero_tol = hyper_tol * std::max(1.0, max_mag);

    bool any_zero_real = false, all_zero_real = true;
    bool all_nonzero_imag = true, any_imag = false;
    bool all_neg = true, all_pos = true;
    for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
        const double re = eigenvalues[i].real();
        const double im = eigenvalues[i].imag();
        const bool zero_re = std::abs(re) <= zero_tol;
        const bool has_im = std::abs(im) > zero_tol;
        any_zero_real |= zero_re;
        all_zero_real &= zero_re;
        all_nonzero_imag &= has_im;
        any_imag |= has_im;
        if (zero_re || re > 0.0) all_neg = false;
        if (zero_re || re < 0.0) all_pos = false;
    }

    if (any_zero_real) {
        if (all_zero_real && all_nonzero_imag) return FixedPointType::CENTER;
        return FixedPointType::NON_HYPERBOLIC;
    }
    if (all_neg)
        return any_imag ? FixedPointType::STABLE_FOCUS : FixedPointType::STABLE_NODE;
    if (all_pos)
        return any_imag ? FixedPointType::UNSTABLE_FOCUS
                        : FixedPointType::UNSTABLE_NODE;
    return FixedPointType::SADDLE;
}

bool is_hyperbolic(const CVec& eigenvalues, double hyper_tol) {
    double max_mag = 0.0;
    for (Eigen::Index i = 0; i < eigenvalues.size(); ++i)
        max_mag = std::max(max_mag, std::abs(eigenvalues[i]));
    const double zero_tol = hyper_tol * std::max(1.0, max_mag);
    for (Eigen::Index i = 0; i < eigenvalues.size(); ++i)
        if (std::abs(eigenvalues[i].real()) <= zero_tol) return false;
    return true;
}

bool is_hyperbolic(const FixedPointRecord& record, double hyper_tol) {
    return is_hyperbolic(record.eigenvalues, hyper_tol);
}

FixedPointRecord classify_at(const VectorField& field, const Vec& x) {
    FixedPointRecord rec;
    rec.location = x;
    rec.residual = field(x).norm();
    rec.eigenvalues = eigen(jacobian(field, x)).values;
    rec.type = classify_eigenvalues(rec.eigenvalues);
    return rec;
}

namespace {

// Damped Newton from one start: step halving until ||F|| decreases, at most
// 40 halvings per step and 200 iterations overall.
std::optional<Vec> newton_root(const VectorField& field, Vec x, double tol) {
    Vec fx = field(x);
    double r = fx.norm();
    for (int iter = 0; iter < 200; ++iter) {
        if (r <= tol) return x;
        Vec step;
        try {
            step = solve(jacobian(field, x), -fx);
        } catch (const Error&) {
            return std::nullopt; // singular Jacobian: abandon this start
        }
        double lambda = 1.0;
        bool improved = false;
        for (int halving = 0; halving <= 40; ++halving) {
            const Vec xn = x + lambda * step;
            double rn = std::numeric_limits<double>::infinity();
            Vec fn;
            try {
                fn = field(xn);
                rn = fn.norm();
            } catch (const Error&) {
                // out-of-domain trial point; halve and retry
            }
            if (rn < r) {
                x = xn;
                fx = fn;
                r = rn;
                improved = true;
                break;
            }
            lambda *= 0.5;
        }
        if (!improved) return std::nullopt;
    }
    return std::nullopt;
}

bool same_root(const Vec& a, const Vec& b, const Vec& span) {
    for (Eigen::Index i = 0; i < a.size(); ++i)
        if (std::abs(a[i] - b[i]) > 1e-6 * span[i]) return false;
    return true;
}

} // namespace

std::vector<FixedPointRecord> find_fixed_points(
    const VectorField& field, const Box& bounds,
    const FixedPointSearchSettings& settings) {
    bounds.validate();
    if (bounds.dim() != field.dimension())
        throw DimensionError("bounds arity does not match field dimension");
    if (settings.n_starts < 1)
        throw DimensionError("n_starts must be at least 1");

    // Draw all starts up front from one stream so the result is independent
    // of how the Newton runs are scheduled.
    Rng rng(settings.seed);
    std::vector<Vec> starts(static_cast<size_t>(settings.n_starts));
    for (auto& s : starts) s = rng.point_in(bounds);

    std::vector<std::optional<Vec>> roots(starts.size());
    parallel_for(static_cast<long>(starts.size()), settings.threads, [&](long i) {
        try {
            roots[static_cast<size_t>(i)] =
                newton_root(field, starts[static_cast<size_t>(i)], settings.tol);
        } catch (const Error&) {
            roots[static_cast<size_t>(i)] = std::nullopt;
        }
    });

    const Vec span = bounds.span();
    struct Candidate {
        Vec location;
        double residual;
    };
    std::vector<Candidate> merged;
    for (const auto& root : roots) {
        if (!root) continue;
        double residual;
        try {
            residual = field(*root).norm();
        } catch (const Error&) {
            continue;
        }
        if (residual > settings.tol) continue;
        if (!bounds.contains(*root, 0.01)) continue;

        bool found = false;
        for (auto& c : merged) {
            if (same_root(c.location, *root, span)) {
                if (residual < c.residual) c = {*root, residual};
                found = true;
                break;
            }
        }
        if (!found) merged.push_back({*root, residual});
    }

    std::vector<FixedPointRecord> records;
    records.reserve(merged.size());
    for (const auto& c : merged) {
        FixedPointRecord rec;
        rec.location = c.location;
        rec.residual = c.residual;
        rec.eigenvalues = eigen(jacobian(field, c.location)).values;
        rec.type = classify_eigenvalues(rec.eigenvalues);
        records.push_back(std::move(rec));
    }

    std::sort(records.begin(), records.end(),
              [](const FixedPointRecord& a, const FixedPointRecord& b) {
                  return std::lexicographical_compare(
                      a.location.data(), a.location.data() + a.location.size(),
                      b.location.data(), b.location.data() + b.location.size());
              });
    return records;
}

} // namespace dynclass
