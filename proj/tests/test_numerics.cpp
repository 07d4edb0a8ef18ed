#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dynclass/modeldsl.hpp"
#include "dynclass/models.hpp"
#include "dynclass/numerics.hpp"
#include "dynclass/rng.hpp"
#include "test_util.hpp"

using namespace dynclass;

namespace {

VectorField quadratic_field() {
    return make_field(
        [](const auto& x) {
            using T = std::decay_t<decltype(x[0])>;
            VecT<T> v(2);
            v[0] = x[0] * x[0];
            v[1] = x[0] * x[1];
            return v;
        },
        2);
}

// finite-difference oracle with per-column steps scaled to the coordinate
Mat fd_scaled(const VectorField& f, const Vec& x) {
    const Eigen::Index n = f.dimension();
    Mat j(n, n);
    for (Eigen::Index col = 0; col < n; ++col) {
        const double h = 1e-6 * std::max(1.0, std::abs(x[col]));
        Vec xp = x, xm = x;
        xp[col] += h;
        xm[col] -= h;
        j.col(col) = (f(xp) - f(xm)) / (2.0 * h);
    }
    return j;
}

} // namespace

TEST_CASE("jacobian of the worked quadratic example") {
    const Mat j = jacobian(quadratic_field(), Vec{{2.0, 3.0}});
    CHECK(j(0, 0) == doctest::Approx(4.0));
    CHECK(j(0, 1) == doctest::Approx(0.0));
    CHECK(j(1, 0) == doctest::Approx(3.0));
    CHECK(j(1, 1) == doctest::Approx(2.0));
}

TEST_CASE("jacobian of the identity field is the identity") {
    const VectorField f = make_field([](const auto& x) { return x; }, 3);
    const Mat j = jacobian(f, Vec{{0.3, -0.7, 2.0}});
    CHECK((j - Mat::Identity(3, 3)).norm() == doctest::Approx(0.0));
}

TEST_CASE("stem cell jacobian matches finite differences") {
    const VectorField f = builtin("stemcell", {{"L", 150.0}});
    const Vec x{{60.0, 50.0, 40.0, 20.0}};
    const Mat ad = jacobian(f, x);
    const Mat fd = fd_scaled(f, x);
    CHECK((ad - fd).cwiseAbs().maxCoeff() < 1e-5);
}

TEST_CASE("fd_jacobian recovers linear fields exactly up to rounding") {
    dynclass::Rng rng(3);
    const Mat a = testutil::random_matrix(rng, 3);
    const VectorField f = make_field(testutil::LinearField{a}, 3);
    const Mat fd = fd_jacobian(f, Vec{{0.2, -0.4, 1.0}}, 1e-5);
    CHECK((fd - a).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("fd_jacobian on the quadratic example") {
    const Mat fd = fd_jacobian(quadratic_field(), Vec{{2.0, 3.0}}, 1e-6);
    Mat expected(2, 2);
    expected << 4.0, 0.0, 3.0, 2.0;
    CHECK((fd - expected).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("fd_jacobian of a constant field is zero") {
    const VectorField f = make_field(
        [](const auto& x) {
            using T = std::decay_t<decltype(x[0])>;
            VecT<T> v(2);
            v[0] = T(1.0);
            v[1] = T(-2.0);
            return v;
        },
        2);
    CHECK(fd_jacobian(f, Vec{{0.5, 0.5}}, 1e-6).norm() == doctest::Approx(0.0));
}

TEST_CASE("autodiff matches central differences on 200 random smooth models") {
    dynclass::Rng rng(42);
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 1 + static_cast<int>(rng.uniform(0.0, 3.999));
        const auto doc = parse_model(testutil::random_smooth_model(rng, n));
        const VectorField f = compile(doc).field;
        Vec x(n);
        for (int i = 0; i < n; ++i) x[i] = rng.uniform(-2.0, 2.0);
        const Mat ad = jacobian(f, x);
        const Mat fd = fd_jacobian(f, x, 1e-6);
        worst = std::max(worst, (ad - fd).cwiseAbs().maxCoeff());
    }
    CHECK(worst < 1e-5);
}

TEST_CASE("eigen solves small spectra exactly") {
    Mat a(2, 2);
    a << -2.0, -1.0, -1.0, -2.0;
    // characteristic polynomial l^2 + 4l + 3 has roots -1 and -3
    const EigenSet es = eigen(a);
    CHECK(es.values[0].real() == doctest::Approx(-1.0));
    CHECK(es.values[1].real() == doctest::Approx(-3.0));
    CHECK(es.values[0].imag() == doctest::Approx(0.0));

    Mat rot(2, 2);
    rot << 0.0, -1.0, 1.0, 0.0;
    const EigenSet er = eigen(rot);
    CHECK(er.values[0].imag() == doctest::Approx(1.0));
    CHECK(er.values[1].imag() == doctest::Approx(-1.0));
    CHECK(er.values[0].real() == doctest::Approx(0.0));

    const EigenSet ed = eigen(2.0 * Mat::Identity(2, 2));
    CHECK(ed.values[0].real() == doctest::Approx(2.0));
    CHECK(ed.values[1].real() == doctest::Approx(2.0));
    CHECK(std::abs(ed.vectors.col(0).dot(ed.vectors.col(1))) < 1e-10);
}

TEST_CASE("eigen pairs satisfy the residual bound and conjugate symmetry") {
    dynclass::Rng rng(5);
    for (int trial = 0; trial < 40; ++trial) {
        const Eigen::Index n = 2 + static_cast<Eigen::Index>(rng.uniform(0.0, 4.999));
        const Mat a = testutil::random_matrix(rng, n);
        const EigenSet es = eigen(a);
        const double scale = std::max(1.0, a.norm());
        for (Eigen::Index k = 0; k < n; ++k) {
            const CVec residual =
                a.cast<std::complex<double>>() * es.vectors.col(k) -
                es.values[k] * es.vectors.col(k);
            CHECK(residual.norm() <= 1e-8 * scale);
            if (es.values[k].imag() != 0.0) {
                bool has_conjugate = false;
                for (Eigen::Index m = 0; m < n; ++m)
                    if (std::abs(es.values[m] - std::conj(es.values[k])) <
                        1e-9 * scale)
                        has_conjugate = true;
                CHECK(has_conjugate);
            }
        }
        // spectrum sums to the trace and multiplies to the determinant
        std::complex<double> sum = 0.0, prod = 1.0;
        for (Eigen::Index k = 0; k < n; ++k) {
            sum += es.values[k];
            prod *= es.values[k];
        }
        CHECK(std::abs(sum - a.trace()) <= 1e-8 * scale);
        CHECK(std::abs(prod - a.determinant()) <= 1e-8 * scale);
    }
}

TEST_CASE("eigen ordering is deterministic") {
    dynclass::Rng rng(17);
    const Mat a = testutil::random_matrix(rng, 4);
    const EigenSet e1 = eigen(a);
    const EigenSet e2 = eigen(a);
    CHECK((e1.values - e2.values).norm() == 0.0);
    for (Eigen::Index k = 1; k < 4; ++k) {
        const bool ordered =
            e1.values[k - 1].real() > e1.values[k].real() ||
            (e1.values[k - 1].real() == e1.values[k].real() &&
             e1.values[k - 1].imag() >= e1.values[k].imag());
        CHECK(ordered);
    }
}

TEST_CASE("solve handles the easy cases and meets its residual bound") {
    CHECK((solve(Mat::Identity(3, 3), Vec{{1.0, 2.0, 3.0}}) - Vec{{1.0, 2.0, 3.0}})
              .norm() == doctest::Approx(0.0));

    Mat d(2, 2);
    d << 2.0, 0.0, 0.0, 4.0;
    const Vec y = solve(d, Vec{{2.0, 8.0}});
    CHECK(y[0] == doctest::Approx(1.0));
    CHECK(y[1] == doctest::Approx(2.0));

    dynclass::Rng rng(23);
    for (int trial = 0; trial < 25; ++trial) {
        const Mat a = testutil::random_matrix(rng, 4) + 3.0 * Mat::Identity(4, 4);
        Vec b(4);
        for (int i = 0; i < 4; ++i) b[i] = rng.uniform(-2.0, 2.0);
        const Vec x = solve(a, b);
        CHECK((a * x - b).norm() <= 1e-10 * std::max(1.0, b.norm()));
    }
}

TEST_CASE("solve rejects singular systems") {
    Mat s(2, 2);
    s << 1.0, 2.0, 2.0, 4.0;
    CHECK_THROWS_AS(solve(s, Vec{{1.0, 1.0}}), SingularMatrixError);
}

TEST_CASE("frobenius norm") {
    CHECK(frobenius(Mat::Zero(3, 3)) == 0.0);
    Mat antisym(2, 2);
    antisym << 0.0, 1.0, -1.0, 0.0;
    CHECK(frobenius(antisym) == doctest::Approx(std::sqrt(2.0)));
    CHECK(frobenius(Mat::Identity(3, 3)) == doctest::Approx(std::sqrt(3.0)));
}

TEST_CASE("a non-finite derivative names the offending component") {
    // sqrt has value 0 but an infinite slope at the origin
    const VectorField f = make_field(
        [](const auto& x) {
            using std::sqrt;
            using T = std::decay_t<decltype(x[0])>;
            VecT<T> v(2);
            v[0] = x[0];
            v[1] = sqrt(x[1]);
            return v;
        },
        2);
    try {
        jacobian(f, Vec{{1.0, 0.0}});
        FAIL("expected EvaluationError");
    } catch (const EvaluationError& e) {
        CHECK(e.component() == 1);
    }
}

TEST_CASE("eigen rejects oversized and non-square input") {
    CHECK_THROWS_AS(eigen(Mat::Zero(2, 3)), DimensionError);
    CHECK_THROWS_AS(eigen(Mat::Identity(65, 65)), DimensionError);
}
