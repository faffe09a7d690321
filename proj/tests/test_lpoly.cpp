#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "tvnet/errors.hpp"
#include "tvnet/local_poly.hpp"

#include <cmath>
#include <random>

using namespace tvnet;

namespace {

TimeGrid equi(int m) { return TimeGrid::equispaced(m); }

// random valid weight configurations for the property tests
struct RandomConfig {
    double t, h;
    int ell;
    KernelKind kernel;
};

RandomConfig draw_config(int m, std::mt19937& rng) {
    std::uniform_real_distribution<double> ut(0.0, 1.0);
    std::uniform_real_distribution<double> uh(0.05, 1.0);
    std::uniform_int_distribution<int> ue(0, 2);
    std::uniform_int_distribution<int> uk(0, 2);
    for (;;) {
        RandomConfig c{ut(rng), uh(rng), ue(rng), static_cast<KernelKind>(uk(rng))};
        if (c.h < 1.0 / (2.0 * m)) continue;
        try {
            design_matrix(equi(m), c.t, c.h, c.ell, c.kernel);
            return c;
        } catch (const SingularDesignError&) {
        }
    }
}

} // namespace

TEST_CASE("degree-0 uniform kernel design is 1/(2h)") {
    for (double h : {1.0, 1.25, 2.0}) {
        Matrix B = design_matrix(equi(10), 0.4, h, 0, KernelKind::uniform);
        CHECK(B.rows() == 1);
        CHECK(B(0, 0) == doctest::Approx(1.0 / (2.0 * h)).epsilon(1e-14));
    }
}

TEST_CASE("odd symmetry zeroes the off-diagonal moment") {
    // dyadic grid symmetric around t = 0.5, offsets exactly representable
    TimeGrid grid(std::vector<double>{0.25, 0.375, 0.625, 0.75});
    Matrix B = design_matrix(grid, 0.5, 0.5, 1, KernelKind::tricube);
    CHECK(std::abs(B(0, 1)) <= 1e-16);
    CHECK(std::abs(B(1, 0)) <= 1e-16);
}

TEST_CASE("design matrix matches direct power summation") {
    Matrix B = design_matrix(equi(10), 0.5, 0.3, 2, KernelKind::tricube);
    Matrix ref = oracles::design_matrix_direct(equi(10), 0.5, 0.3, 2, KernelKind::tricube);
    CHECK((B - ref).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("singular designs are rejected") {
    // window holds a single grid point but the fit needs two
    CHECK_THROWS_AS(design_matrix(equi(10), 0.1, 0.04, 1, KernelKind::tricube),
                    SingularDesignError);
    // nearly collinear cluster: condition number explodes for a quadratic
    TimeGrid cluster(std::vector<double>{0.5, 0.5 + 1e-9, 0.5 + 2e-9, 0.5 + 3e-9});
    CHECK_THROWS_AS(design_matrix(cluster, 0.5, 0.4, 2, KernelKind::uniform),
                    SingularDesignError);
    // bandwidth below the 1/(2m) floor
    CHECK_THROWS_AS(equiv_weights(equi(10), 0.5, 0.01, 0, KernelKind::uniform),
                    SingularDesignError);
}

TEST_CASE("degree 0 reduces to Nadaraya-Watson") {
    TimeGrid grid = equi(15);
    WeightVector wv = equiv_weights(grid, 0.42, 0.2, 0, KernelKind::epanechnikov);
    double denom = 0.0;
    for (int k = 0; k < grid.count(); ++k)
        denom += kernel_value(KernelKind::epanechnikov, (grid[k] - 0.42) / 0.2);
    for (int k = 0; k < grid.count(); ++k) {
        double expected = kernel_value(KernelKind::epanechnikov, (grid[k] - 0.42) / 0.2) / denom;
        CHECK(wv.weights(k) == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("weight invariants hold over random configurations") {
    std::mt19937 rng(11);
    for (int m : {10, 50, 200}) {
        TimeGrid grid = equi(m);
        for (int rep = 0; rep < 40; ++rep) {
            RandomConfig c = draw_config(m, rng);
            WeightVector wv = equiv_weights(grid, c.t, c.h, c.ell, c.kernel);
            CHECK(std::abs(wv.weights.sum() - 1.0) < 1e-10);
            for (int p = 1; p <= c.ell; ++p) {
                double moment = 0.0;
                for (int k = 0; k < m; ++k)
                    moment += std::pow(grid[k] - c.t, p) * wv.weights(k);
                CHECK(std::abs(moment) < 1e-8);
            }
            for (int k = 0; k < m; ++k)
                if (std::abs(grid[k] - c.t) > c.h) CHECK(wv.weights(k) == 0.0);
        }
    }
}

TEST_CASE("weights exist and stay valid at the boundary") {
    TimeGrid grid = equi(25);
    for (double t : {0.0, 1.0}) {
        for (int ell : {0, 1, 2}) {
            WeightVector wv = equiv_weights(grid, t, 0.25, ell, KernelKind::tricube);
            CHECK(std::abs(wv.weights.sum() - 1.0) < 1e-10);
            for (int p = 1; p <= ell; ++p) {
                double moment = 0.0;
                for (int k = 0; k < grid.count(); ++k)
                    moment += std::pow(grid[k] - t, p) * wv.weights(k);
                CHECK(std::abs(moment) < 1e-8);
            }
        }
    }
}

TEST_CASE("fitted values equal the WLS intercept") {
    TimeGrid grid = equi(20);
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> uy(-2.0, 2.0);
    for (int rep = 0; rep < 5; ++rep) {
        Vector y(20);
        for (int k = 0; k < 20; ++k) y(k) = uy(rng);
        WeightVector wv = equiv_weights(grid, 0.37, 0.2, 1, KernelKind::tricube);
        double fit = wv.weights.dot(y);
        double ref = oracles::wls_intercept(grid, y, 0.37, 0.2, 1, KernelKind::tricube);
        CHECK(fit == doctest::Approx(ref).epsilon(1e-8));
    }
}

TEST_CASE("WLS equivalence across random configurations") {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> uy(-1.0, 1.0);
    TimeGrid grid = equi(30);
    for (int rep = 0; rep < 25; ++rep) {
        RandomConfig c = draw_config(30, rng);
        WeightVector wv = equiv_weights(grid, c.t, c.h, c.ell, c.kernel);
        Vector y(30);
        for (int k = 0; k < 30; ++k) y(k) = uy(rng);
        double ref = oracles::wls_intercept(grid, y, c.t, c.h, c.ell, c.kernel);
        CHECK(wv.weights.dot(y) == doctest::Approx(ref).epsilon(1e-8));
    }
}

TEST_CASE("polynomials up to the fitted degree are reproduced") {
    TimeGrid grid = equi(40);
    auto q = [](double t) { return 0.3 - 0.8 * t + 0.5 * t * t; };
    Vector y(40);
    for (int k = 0; k < 40; ++k) y(k) = q(grid[k]);
    for (double t : {0.2, 0.5, 0.77}) {
        WeightVector wv = equiv_weights(grid, t, 0.25, 2, KernelKind::tricube);
        CHECK(wv.weights.dot(y) == doctest::Approx(q(t)).epsilon(1e-8));
    }
}

TEST_CASE("smoothing a constant sequence returns the constant") {
    std::mt19937 rng(5);
    Matrix A = oracles::random_binary_symmetric(7, 0.5, rng);
    std::vector<Matrix> mats(9, A);
    Matrix out = smooth_matrix_sequence(mats, equi(9), 0.5, 0.3, 1, KernelKind::tricube);
    CHECK((out - A).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("degree-1 smoothing reproduces linear trajectories") {
    const int n = 5, m = 20;
    TimeGrid grid = equi(m);
    std::mt19937 rng(6);
    std::uniform_real_distribution<double> ub(-0.1, 0.1);
    Matrix base = 0.2 * oracles::random_symmetric01(n, rng, false);
    Matrix slope(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) slope(i, j) = slope(j, i) = ub(rng);
    std::vector<Matrix> mats(m);
    for (int k = 0; k < m; ++k) mats[k] = 0.3 * Matrix::Ones(n, n) + base + grid[k] * slope;
    Matrix out = smooth_matrix_sequence(mats, grid, 0.45, 0.2, 1, KernelKind::epanechnikov);
    Matrix expected = 0.3 * Matrix::Ones(n, n) + base + 0.45 * slope;
    CHECK((out - expected).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("matrix smoothing agrees with the scalar loop") {
    const int n = 6, m = 15;
    TimeGrid grid = equi(m);
    std::mt19937 rng(8);
    std::vector<Matrix> mats(m);
    for (int k = 0; k < m; ++k) mats[k] = oracles::random_binary_symmetric(n, 0.4, rng);
    WeightVector wv = equiv_weights(grid, 0.5, 0.25, 1, KernelKind::tricube);
    Matrix out = smooth_matrix_sequence(mats, grid, 0.5, 0.25, 1, KernelKind::tricube);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            CHECK(out(i, j) ==
                  doctest::Approx(oracles::smooth_entry(mats, wv.weights, i, j)).epsilon(1e-13));
}

TEST_CASE("smoothed output is symmetric and clipped") {
    const int n = 6, m = 12;
    std::mt19937 rng(9);
    std::vector<Matrix> mats(m);
    for (int k = 0; k < m; ++k) mats[k] = oracles::random_binary_symmetric(n, 0.5, rng);
    // degree-2 weights can leave [0,1] near the boundary
    Matrix out = smooth_matrix_sequence(mats, equi(m), 0.02, 0.3, 2, KernelKind::tricube);
    CHECK((out - out.transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(out.minCoeff() >= 0.0);
    CHECK(out.maxCoeff() <= 1.0);
}
