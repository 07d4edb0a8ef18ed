#pragma once

#include "dynclass/core.hpp"
#include "dynclass/vectorfield.hpp"

namespace dynclass {

/// Full spectrum of a small dense real matrix. Values and vector columns are
/// paired and sorted by descending real part, then descending imaginary part,
/// so downstream reports are deterministic.
struct EigenSet {
    CVec values;
    CMat vectors;
};

/// Jacobian J[i][j] = dF_i/dx_j via one dual-number forward pass with n-wide
/// partial vectors. Throws EvaluationError naming the offending entry when a
/// derivative comes out non-finite.
Mat jacobian(const VectorField& field, const Vec& x);

/// Central-difference Jacobian, (F(x+h e_j) - F(x-h e_j)) / (2h) per column.
/// Kept deliberately independent of the dual path so the two can check each
/// other.
Mat fd_jacobian(const VectorField& field, const Vec& x, double h);

EigenSet eigen(const Mat& a);

/// Solve A y = b with partial pivoting plus one refinement pass. A pivot
/// below 1e-14 * ||A||_F raises SingularMatrixError.
Vec solve(const Mat& a, const Vec& b);

double frobenius(const Mat& a);

} // namespace dynclass
