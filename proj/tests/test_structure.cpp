#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dynclass/models.hpp"
#include "dynclass/numerics.hpp"
#include "dynclass/structure.hpp"
#include "test_util.hpp"

using namespace dynclass;

TEST_CASE("symmetry error of hand-computed matrices") {
    Mat sym(2, 2);
    sym << -2.0, 0.5, 0.5, -1.0;
    CHECK(symmetry_error(sym) == 0.0);

    Mat rot(2, 2);
    rot << -1.0, 1.0, -1.0, -1.0;
    // antisymmetric part [[0,1],[-1,0]] has Frobenius norm sqrt(2)
    CHECK(symmetry_error(rot) == doctest::Approx(std::sqrt(2.0)));

    Mat upper(2, 2);
    upper << 0.0, 2.0, 0.0, 0.0;
    CHECK(symmetry_error(upper) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("relative symmetry error") {
    Mat sym(2, 2);
    sym << -2.0, 0.5, 0.5, -1.0;
    CHECK(relative_symmetry_error(sym) == 0.0);

    Mat rot(2, 2);
    rot << -1.0, 1.0, -1.0, -1.0;
    // sqrt(2) over ||J||_F = 2
    CHECK(relative_symmetry_error(rot) == doctest::Approx(std::sqrt(2.0) / 2.0));

    CHECK(relative_symmetry_error(Mat::Zero(3, 3)) == 0.0);
}

TEST_CASE("relative symmetry error is scale invariant") {
    dynclass::Rng rng(9);
    const Mat j = testutil::random_matrix(rng, 4);
    const double base = relative_symmetry_error(j);
    for (const double c : {0.25, 3.0, 1e6}) {
        CHECK(relative_symmetry_error(c * j) == doctest::Approx(base).epsilon(1e-12));
    }
}

TEST_CASE("symmetry test tolerances") {
    Mat sym(2, 2);
    sym << -2.0, 0.5, 0.5, -1.0;
    CHECK(is_symmetric(sym));

    Mat nonsym(2, 2);
    nonsym << -1.0, 0.5, -0.5, -1.0;
    CHECK_FALSE(is_symmetric(nonsym));

    Mat diag = Mat::Zero(3, 3);
    diag.diagonal() << 1.0, -2.0, 5.0;
    CHECK(is_symmetric(diag));
}

TEST_CASE("curl magnitude per dimension") {
    CHECK(curl_magnitude(builtin("rotation"), Vec{{1.0, 0.0}}) ==
          doctest::Approx(2.0));
    CHECK(curl_magnitude(builtin("gradient2d"), Vec{{1.0, 1.0}}) ==
          doctest::Approx(0.0));

    // 3D: curl of [-y, x, 0] is [0, 0, 2]
    const VectorField spin3 = make_field(
        [](const auto& x) {
            using T = std::decay_t<decltype(x[0])>;
            VecT<T> v(3);
            v[0] = -x[1];
            v[1] = x[0];
            v[2] = T(0.0);
            return v;
        },
        3);
    CHECK(curl_magnitude(spin3, Vec{{0.3, -0.2, 0.9}}) == doctest::Approx(2.0));

    const VectorField one_d =
        make_field([](const auto& x) { return (-x).eval(); }, 1);
    CHECK(curl_magnitude(one_d, Vec{{0.7}}) == 0.0);
}

TEST_CASE("curl-free tests pointwise and over a region") {
    CHECK_FALSE(is_curl_free(builtin("rotation"), Vec{{1.0, 0.0}}));
    CHECK(is_curl_free(builtin("gradient2d"), Vec{{0.4, -1.2}}));

    RegionSample region{Box(Vec{{-2.0, -2.0}}, Vec{{2.0, 2.0}}), 100, 0};
    CHECK(is_curl_free(builtin("gradient2d"), region));
    CHECK_FALSE(is_curl_free(builtin("rotation"), region));

    const VectorField one_d =
        make_field([](const auto& x) { return (2.0 * x).eval(); }, 1);
    CHECK(is_curl_free(one_d, Vec{{5.0}}));
}

TEST_CASE("region verdict is deterministic for a fixed seed") {
    RegionSample region{Box(Vec{{-2.0, -2.0}}, Vec{{2.0, 2.0}}), 50, 1234};
    const bool first = is_curl_free(builtin("gradient2d"), region);
    const bool second = is_curl_free(builtin("gradient2d"), region);
    CHECK(first == second);
}

TEST_CASE("curl to gradient ratio") {
    CHECK(curl_to_gradient_ratio(builtin("gradient2d"), Vec{{0.5, 0.5}}) ==
          doctest::Approx(0.0));

    const VectorField spin = make_field(
        [](const auto& x) {
            using T = std::decay_t<decltype(x[0])>;
            VecT<T> v(2);
            v[0] = -x[1];
            v[1] = x[0];
            return v;
        },
        2);
    // ||F([1,0])|| = 1 and curl = 2
    CHECK(curl_to_gradient_ratio(spin, Vec{{1.0, 0.0}}) == doctest::Approx(2.0));

    const double ratio = curl_to_gradient_ratio(builtin("stemcell", {{"L", 150.0}}),
                                                Vec{{60.0, 50.0, 40.0, 20.0}});
    CHECK(ratio >= 0.0);
    CHECK(std::isfinite(ratio));
}

TEST_CASE("negative gradients of random polynomial potentials are curl free") {
    dynclass::Rng rng(77);
    for (int trial = 0; trial < 12; ++trial) {
        const Eigen::Index n = 2 + static_cast<Eigen::Index>(rng.uniform(0.0, 2.999));
        const auto potential = testutil::PolynomialPotentialField::random(rng, n);
        const VectorField f = make_field(potential, n);
        for (int p = 0; p < 100; ++p) {
            Vec x(n);
            for (Eigen::Index i = 0; i < n; ++i) x[i] = rng.uniform(-2.0, 2.0);
            CHECK(curl_magnitude(f, x) < 1e-8);
        }
    }
}

TEST_CASE("a symmetric Jacobian bounds the curl by the symmetry tolerance") {
    dynclass::Rng rng(101);
    for (int trial = 0; trial < 20; ++trial) {
        const Eigen::Index n = 2 + static_cast<Eigen::Index>(rng.uniform(0.0, 1.999));
        const Mat base = testutil::random_matrix(rng, n);
        Mat j = 0.5 * (base + base.transpose());
        // antisymmetric noise below the detection threshold
        const Mat raw = testutil::random_matrix(rng, n);
        const Mat noise = 2e-11 * (raw - raw.transpose());
        j += noise;
        REQUIRE(is_symmetric(j));

        const VectorField f = make_field(testutil::LinearField{j}, n);
        const double max_abs = j.cwiseAbs().maxCoeff();
        const double bound = n * (1e-10 + 1e-8 * max_abs);
        CHECK(curl_magnitude(f, Vec::Zero(n)) <= bound);
    }
}
