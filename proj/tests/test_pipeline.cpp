#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "tvnet/errors.hpp"
#include "tvnet/local_poly.hpp"
#include "tvnet/pipeline.hpp"
#include "tvnet/threading.hpp"

#include <random>

using namespace tvnet;

namespace {

SnapshotSequence make_sequence(std::vector<Matrix> mats, const TimeGrid& grid) {
    SnapshotSequence seq;
    seq.grid = grid;
    seq.n = static_cast<int>(mats[0].rows());
    for (int i = 0; i < seq.n; ++i) seq.labels.push_back(std::to_string(i));
    seq.adjacency = std::move(mats);
    seq.validate();
    return seq;
}

// circulant d-regular graph: i ~ i +- 1, ..., i +- d/2 (mod n)
Matrix circulant(int n, int half_degree) {
    Matrix A = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int s = 1; s <= half_degree; ++s) {
            int j = (i + s) % n;
            A(i, j) = A(j, i) = 1.0;
        }
    return A;
}

// two-block SBM snapshots with slowly drifting probabilities
SnapshotSequence sbm_like(int n, int m, unsigned seed) {
    std::mt19937 rng(seed);
    TimeGrid grid = TimeGrid::equispaced(m);
    std::vector<Matrix> mats;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < m; ++k) {
        double p_in = 0.55 + 0.2 * grid[k];
        double p_out = 0.15 + 0.1 * grid[k];
        Matrix A = Matrix::Zero(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                double p = (i < n / 2) == (j < n / 2) ? p_in : p_out;
                A(i, j) = A(j, i) = u(rng) < p ? 1.0 : 0.0;
            }
        mats.push_back(std::move(A));
    }
    return make_sequence(std::move(mats), grid);
}

bool bitwise_equal(const ProbMatrixSequence& a, const ProbMatrixSequence& b) {
    if (a.grid.points() != b.grid.points()) return false;
    for (std::size_t k = 0; k < a.matrices.size(); ++k)
        if ((a.matrices[k].array() != b.matrices[k].array()).any()) return false;
    return true;
}

} // namespace

TEST_CASE("time-constant regular graph collapses to its density") {
    const int n = 12, d = 4, m = 6;
    Matrix A = circulant(n, d / 2);
    SnapshotSequence data = make_sequence(std::vector<Matrix>(m, A), TimeGrid::equispaced(m));
    SmoothConfig cfg;
    cfg.ell = 0;
    cfg.h1 = 1.0;
    cfg.h2 = 1.0;
    cfg.kernel = KernelKind::uniform;
    ProbMatrixSequence est = estimate_two_stage(data, {0.5}, cfg);
    // every column mean is d/n, so the estimate is flat at the density
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j)
                CHECK(est.matrices[0](i, j) ==
                      doctest::Approx(static_cast<double>(d) / n).epsilon(1e-12));
}

TEST_CASE("constant-rate ER snapshots shrink toward the global mean") {
    const int n = 30, m = 10;
    std::mt19937 rng(61);
    std::vector<Matrix> mats;
    double total = 0.0;
    for (int k = 0; k < m; ++k) {
        mats.push_back(oracles::random_binary_symmetric(n, 0.5, rng));
        total += mats.back().sum();
    }
    double global_mean = total / (m * n * (n - 1));
    SnapshotSequence data = make_sequence(std::move(mats), TimeGrid::equispaced(m));
    SmoothConfig cfg;
    cfg.ell = 0;
    cfg.h1 = 1.0;
    cfg.h2 = 1.0;
    cfg.kernel = KernelKind::uniform;
    ProbMatrixSequence est = estimate_two_stage(data, {0.5}, cfg);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) CHECK(std::abs(est.matrices[0](i, j) - global_mean) < 0.1);
}

TEST_CASE("duplicate-row pairs make the neighborhood step a no-op") {
    // nodes 2i and 2i+1 share identical probability rows with the block
    // values well separated, so each node's nearest neighbor carries the
    // same slice and averaging barely moves anything
    const int n = 8, m = 400;
    TimeGrid grid = TimeGrid::equispaced(m);
    std::mt19937 rng(62);
    Matrix base(4, 4);
    base << 0.9, 0.2, 0.6, 0.4,
            0.2, 0.8, 0.3, 0.7,
            0.6, 0.3, 0.1, 0.5,
            0.4, 0.7, 0.5, 0.9;
    Matrix P(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) P(i, j) = base(i / 2, j / 2);
    std::vector<Matrix> mats(m);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < m; ++k) {
        Matrix A = Matrix::Zero(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) A(i, j) = A(j, i) = u(rng) < P(i, j) ? 1.0 : 0.0;
        mats[k] = std::move(A);
    }
    SnapshotSequence data = make_sequence(std::move(mats), grid);

    SmoothConfig cfg;
    cfg.ell = 0;
    cfg.h1 = 1.0;
    cfg.h2 = 1.0 / (n - 1); // smallest quantile: self plus nearest neighbor
    cfg.kernel = KernelKind::uniform;

    WeightVector wv = equiv_weights(grid, 0.5, cfg.h1, cfg.ell, cfg.kernel);
    Matrix P_tilde = weighted_matrix_sum(data.adjacency, wv.weights);
    clip_unit_interval(P_tilde);
    // the duplicate rows are near-identical (sampling noise only), so the
    // output stays close to the symmetrized intermediate estimate except at
    // the pair entries themselves: a two-element neighborhood averages in
    // the neighbor's zero self-entry, an O(1/|N|) effect of the adjacency
    // diagonal convention
    ProbMatrixSequence est = estimate_two_stage(data, {0.5}, cfg);
    Matrix diff = est.matrices[0] - 0.5 * (P_tilde + P_tilde.transpose());
    for (int i = 0; i < n; ++i) {
        diff(i, i) = 0.0;
        int dup = i % 2 ? i - 1 : i + 1;
        diff(i, dup) = 0.0;
    }
    CHECK(diff.cwiseAbs().maxCoeff() < 0.06);
    // and the pair entry itself sits halfway to zero
    CHECK(est.matrices[0](0, 1) ==
          doctest::Approx(0.5 * P_tilde(0, 1)).epsilon(0.15));
}

TEST_CASE("two-stage estimate equals the composed oracle") {
    SnapshotSequence data = sbm_like(8, 12, 63);
    SmoothConfig cfg;
    cfg.ell = 1;
    cfg.h1 = 0.35;
    cfg.h2 = 0.4;
    cfg.kernel = KernelKind::tricube;
    for (double t : {0.3, 0.5, 0.9}) {
        ProbMatrixSequence est = estimate_two_stage(data, {t}, cfg);
        WeightVector wv = equiv_weights(data.grid, t, cfg.h1, cfg.ell, cfg.kernel);
        Matrix ref = oracles::two_stage_composed(data.adjacency, wv.weights, cfg.h2);
        CHECK((est.matrices[0] - ref).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("noiseless flat probability input is reproduced exactly") {
    // probability-accepting path: if every row of P is identical the
    // two-stage output returns P itself
    const int m = 9, n = 6;
    ProbMatrixSequence flat;
    flat.grid = TimeGrid::equispaced(m);
    flat.n = n;
    flat.matrices.assign(m, Matrix::Constant(n, n, 0.37));
    SmoothConfig cfg;
    cfg.ell = 1;
    cfg.h1 = 0.4;
    cfg.h2 = 0.6;
    ProbMatrixSequence est = estimate_two_stage(flat, {0.5}, cfg);
    CHECK((est.matrices[0] - Matrix::Constant(n, n, 0.37)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("minimal third-stage window reproduces the two-stage fit") {
    SnapshotSequence data = sbm_like(7, 10, 64);
    SmoothConfig cfg;
    cfg.ell = 0;
    cfg.h1 = 0.3;
    cfg.h2 = 0.5;
    cfg.h3 = 0.07; // window around each grid point holds only that point
    std::vector<double> times = data.grid.points();
    ProbMatrixSequence two = estimate_two_stage(data, times, cfg);
    ProbMatrixSequence three = estimate_three_stage(data, times, cfg);
    for (int k = 0; k < data.grid.count(); ++k)
        CHECK((two.matrices[k] - three.matrices[k]).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("constant two-stage sequence passes through the refinement") {
    const int n = 10, m = 8;
    Matrix A = circulant(n, 2);
    SnapshotSequence data = make_sequence(std::vector<Matrix>(m, A), TimeGrid::equispaced(m));
    SmoothConfig cfg;
    cfg.ell = 0;
    cfg.h1 = 1.0;
    cfg.h2 = 0.3;
    cfg.h3 = 0.5;
    cfg.kernel = KernelKind::uniform;
    ProbMatrixSequence two = estimate_two_stage(data, {data.grid[3]}, cfg);
    ProbMatrixSequence three = estimate_three_stage(data, {0.1, 0.5, 0.9}, cfg);
    for (const Matrix& M : three.matrices)
        CHECK((M - two.matrices[0]).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("three-stage equals scalar smoothing of grid estimates") {
    SnapshotSequence data = sbm_like(6, 10, 65);
    SmoothConfig cfg;
    cfg.ell = 1;
    cfg.h1 = 0.4;
    cfg.h2 = 0.5;
    cfg.h3 = 0.35;
    std::vector<double> times = data.grid.points();
    ProbMatrixSequence hat = estimate_two_stage(data, times, cfg);
    ProbMatrixSequence bar = estimate_three_stage(data, {0.42}, cfg);
    WeightVector wv = equiv_weights(data.grid, 0.42, *cfg.h3, cfg.ell, cfg.kernel);
    for (int i = 0; i < data.n; ++i)
        for (int j = 0; j < data.n; ++j)
            CHECK(bar.matrices[0](i, j) ==
                  doctest::Approx(oracles::smooth_entry(hat.matrices, wv.weights, i, j))
                      .epsilon(1e-12));
}

TEST_CASE("pooled equals independent on time-constant data") {
    const int n = 9, m = 5;
    std::mt19937 rng(66);
    Matrix A = oracles::random_binary_symmetric(n, 0.5, rng);
    SnapshotSequence data = make_sequence(std::vector<Matrix>(m, A), TimeGrid::equispaced(m));
    SmoothConfig cfg;
    cfg.h2 = 0.5;
    cfg.variant = Variant::pooled;
    ProbMatrixSequence pooled = estimate_variant(data, {0.3, 0.8}, cfg);
    cfg.variant = Variant::independent;
    ProbMatrixSequence indep = estimate_variant(data, {0.3, 0.8}, cfg);
    CHECK(bitwise_equal(pooled, indep));
    // pooled output is constant over query times
    CHECK((pooled.matrices[0] - pooled.matrices[1]).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("reversed variant composes neighborhood then temporal smoothing") {
    SnapshotSequence data = sbm_like(7, 8, 67);
    SmoothConfig cfg;
    cfg.ell = 1;
    cfg.h1 = 0.45;
    cfg.h2 = 1.0;
    cfg.variant = Variant::reversed;
    ProbMatrixSequence est = estimate_variant(data, {0.5}, cfg);

    // oracle: smooth each snapshot by full-quantile row averaging, then a
    // scalar temporal pass with the same weights
    std::vector<Matrix> Q(data.grid.count());
    for (int k = 0; k < data.grid.count(); ++k) {
        Matrix D = oracles::distance_triple_loop(data.adjacency[k]);
        auto nb = oracles::neighborhoods_sorted(D, cfg.h2);
        Q[k] = oracles::nbhd_average_loops(data.adjacency[k], nb);
    }
    WeightVector wv = equiv_weights(data.grid, 0.5, cfg.h1, cfg.ell, cfg.kernel);
    for (int i = 0; i < data.n; ++i)
        for (int j = 0; j < data.n; ++j)
            CHECK(est.matrices[0](i, j) ==
                  doctest::Approx(oracles::smooth_entry(Q, wv.weights, i, j)).epsilon(1e-12));
}

TEST_CASE("independent variant picks the nearest snapshot") {
    SnapshotSequence data = sbm_like(6, 5, 68);
    SmoothConfig cfg;
    cfg.h2 = 0.5;
    cfg.variant = Variant::independent;
    // query halfway between grid points 1 and 2 resolves to the earlier one
    double t = 0.5 * (data.grid[1] + data.grid[2]);
    ProbMatrixSequence est = estimate_variant(data, {t}, cfg);
    Matrix D = oracles::distance_triple_loop(data.adjacency[1]);
    auto nb = oracles::neighborhoods_sorted(D, cfg.h2);
    Matrix ref = oracles::nbhd_average_loops(data.adjacency[1], nb);
    CHECK((est.matrices[0] - ref).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("all estimator outputs are symmetric unit-interval matrices") {
    SnapshotSequence data = sbm_like(8, 10, 69);
    std::vector<double> times{0.0, 0.33, 1.0};
    for (Variant v :
         {Variant::proposed, Variant::reversed, Variant::independent, Variant::pooled}) {
        SmoothConfig cfg;
        cfg.ell = 1;
        cfg.h1 = 0.4;
        cfg.h2 = 0.5;
        cfg.h3 = 0.4;
        cfg.variant = v;
        ProbMatrixSequence est = estimate(data, times, cfg, v == Variant::proposed);
        for (const Matrix& M : est.matrices) {
            CHECK((M - M.transpose()).cwiseAbs().maxCoeff() == 0.0);
            CHECK(M.minCoeff() >= 0.0);
            CHECK(M.maxCoeff() <= 1.0);
        }
    }
}

TEST_CASE("identical requests are bitwise deterministic across threads") {
    SnapshotSequence data = sbm_like(8, 10, 70);
    SmoothConfig cfg;
    cfg.ell = 1;
    cfg.h1 = 0.4;
    cfg.h2 = 0.5;
    std::vector<double> times{0.1, 0.4, 0.8};
    set_max_threads(1);
    ProbMatrixSequence a = estimate_two_stage(data, times, cfg);
    set_max_threads(8);
    ProbMatrixSequence b = estimate_two_stage(data, times, cfg);
    set_max_threads(2);
    CHECK(bitwise_equal(a, b));
}

TEST_CASE("boundary singularity retries with a doubled bandwidth") {
    // grid clustered away from t=1: the window at the right edge is empty
    // until the fallback doubles it
    TimeGrid grid(std::vector<double>{0.0, 0.1, 0.2, 0.3, 0.4, 0.5});
    std::mt19937 rng(71);
    std::vector<Matrix> mats;
    for (int k = 0; k < 6; ++k) mats.push_back(oracles::random_binary_symmetric(6, 0.5, rng));
    SnapshotSequence data = make_sequence(std::move(mats), grid);
    SmoothConfig cfg;
    cfg.ell = 0;
    cfg.h1 = 0.3;
    cfg.h2 = 0.5;
    ProbMatrixSequence est = estimate_two_stage(data, {1.0}, cfg); // needs the fallback
    CHECK(est.matrices[0].maxCoeff() <= 1.0);
    // an interior singularity still propagates with the offending time
    SmoothConfig tight = cfg;
    tight.h1 = 0.2; // above the grid floor but the window at t=0.75 is empty
    CHECK_THROWS_AS(estimate_two_stage(data, {0.75}, tight), SingularDesignError);
}

TEST_CASE("bandwidth suggestions cover both regimes") {
    BandwidthSuggestion dense = suggest_bandwidths(600, 100, 0.5, 1.0);
    CHECK(dense.dense_regime);
    CHECK(dense.dense_h1 > 0.0);
    CHECK(dense.dense_h2 > 0.0);
    BandwidthSuggestion sparse = suggest_bandwidths(50, 5000, 0.01, 1.0);
    CHECK_FALSE(sparse.dense_regime);
    CHECK(sparse.sparse_h2 == doctest::Approx(1.0 / 50));
    CHECK_THROWS_AS(suggest_bandwidths(10, 10, -1.0, 1.0), ValidationError);
}

TEST_CASE("sparsity estimate is the max snapshot density") {
    const int n = 8;
    Matrix A = Matrix::Zero(n, n);
    A(0, 1) = A(1, 0) = 1.0;
    Matrix B = circulant(n, 2);
    SnapshotSequence data =
        make_sequence(std::vector<Matrix>{A, B}, TimeGrid(std::vector<double>{0.2, 0.8}));
    CHECK(estimate_sparsity(data) == doctest::Approx(B.sum() / (n * (n - 1))));
}
