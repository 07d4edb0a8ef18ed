#include "dynclass/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

namespace dynclass {

Mat jacobian(const VectorField& field, const Vec& x) {
    const Eigen::Index n = field.dimension();
    DualVector xd(n);
    for (Eigen::Index i = 0; i < n; ++i) xd[i] = Dual::seed(x[i], i, n);
    const DualVector y = field.eval_dual(xd);

    Mat j(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (!std::isfinite(y[i].value))
            throw EvaluationError("non-finite field value in component " +
                                      std::to_string(i),
                                  static_cast<long>(i));
        if (y[i].partials.size() == 0) {
            j.row(i).setZero();
            continue;
        }
        for (Eigen::Index col = 0; col < n; ++col) {
            const double d = y[i].partials[col];
            if (!std::isfinite(d))
                throw EvaluationError("non-finite derivative d f_" +
                                          std::to_string(i) + " / d x_" +
                                          std::to_string(col),
                                      static_cast<long>(i));
            j(i, col) = d;
        }
    }
    return j;
}

Mat fd_jacobian(const VectorField& field, const Vec& x, double h) {
    if (!(h > 0.0)) throw DimensionError("finite-difference step must be positive");
    const Eigen::Index n = field.dimension();
    Mat j(n, n);
    Vec xp = x, xm = x;
    for (Eigen::Index col = 0; col < n; ++col) {
        xp[col] = x[col] + h;
        xm[col] = x[col] - h;
        j.col(col) = (field(xp) - field(xm)) / (2.0 * h);
        xp[col] = x[col];
        xm[col] = x[col];
    }
    return j;
}

EigenSet eigen(const Mat& a) {
    if (a.rows() != a.cols())
        throw DimensionError("eigen decomposition requires a square matrix");
    const Eigen::Index n = a.rows();
    if (n < 1 || n > 64)
        throw DimensionError("eigen decomposition supports 1 <= n <= 64, got " +
                             std::to_string(n));

    Eigen::EigenSolver<Mat> solver;
    solver.setMaxIterations(100 * static_cast<int>(n));
    solver.compute(a, /*computeEigenvectors=*/true);
    if (solver.info() != Eigen::Success)
        throw NumericalError("eigenvalue iteration did not converge within " +
                             std::to_string(100 * n) + " sweeps");

    const CVec values = solver.eigenvalues();
    const CMat vectors = solver.eigenvectors();

    std::vector<Eigen::Index> order(static_cast<size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](Eigen::Index l, Eigen::Index r) {
        if (values[l].real() != values[r].real())
            return values[l].real() > values[r].real();
        return values[l].imag() > values[r].imag();
    });

    EigenSet out;
    out.values.resize(n);
    out.vectors.resize(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        out.values[k] = values[order[static_cast<size_t>(k)]];
        out.vectors.col(k) = vectors.col(order[static_cast<size_t>(k)]);
    }
    return out;
}

Vec solve(const Mat& a, const Vec& b) {
    if (a.rows() != a.cols())
        throw DimensionError("solve requires a square matrix");
    if (a.rows() != b.size())
        throw DimensionError("solve: right-hand side has wrong dimension");

    Eigen::PartialPivLU<Mat> lu(a);
    const double scale = a.norm();
    const double min_pivot = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
    if (min_pivot <= 1e-14 * scale)
        throw SingularMatrixError("pivot " + std::to_string(min_pivot) +
                                  " below 1e-14 * ||A||");

    Vec y = lu.solve(b);
    y += lu.solve(b - a * y); // one refinement pass
    return y;
}

double frobenius(const Mat& a) { return a.norm(); }

} // namespace dynclass
