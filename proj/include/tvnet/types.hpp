#pragma once

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

namespace tvnet {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// ---------------------------------------------------------------------------
// Enums
// ---------------------------------------------------------------------------

enum class KernelKind { tricube, epanechnikov, uniform };
enum class Variant { proposed, reversed, independent, pooled };
enum class Stage { intermediate, two_stage, three_stage, truth };

std::string to_string(KernelKind k);
std::string to_string(Variant v);
std::string to_string(Stage s);
KernelKind kernel_from_string(const std::string& s);
Variant variant_from_string(const std::string& s);
Stage stage_from_string(const std::string& s);

// ---------------------------------------------------------------------------
// TimeGrid
// ---------------------------------------------------------------------------

/// Ordered observation times in [0,1], strictly increasing.
class TimeGrid {
public:
    TimeGrid() = default;
    explicit TimeGrid(std::vector<double> points);

    /// The grid t_k = k/m for k = 1..m.
    static TimeGrid equispaced(int m);

    int count() const { return static_cast<int>(points_.size()); }
    double operator[](int k) const { return points_[k]; }
    const std::vector<double>& points() const { return points_; }

    /// Index of the grid point nearest to t; ties resolve to the earlier time.
    int nearest(double t) const;

    /// Grid with point k removed (leave-one-out training grid).
    TimeGrid without(int k) const;

private:
    std::vector<double> points_;
};

// ---------------------------------------------------------------------------
// Affine mapping for grids given in raw units (e.g. calendar years)
// ---------------------------------------------------------------------------

struct YearMapping {
    double raw_min = 0.0;
    double raw_max = 1.0;
    double to_unit(double raw) const { return (raw - raw_min) / (raw_max - raw_min); }
};

// ---------------------------------------------------------------------------
// SnapshotSequence
// ---------------------------------------------------------------------------

/// Binary adjacency snapshots over a common node set. Matrices are symmetric,
/// entries in {0,1}, zero diagonal. Immutable by convention after validate().
struct SnapshotSequence {
    TimeGrid grid;
    int n = 0;
    std::vector<std::string> labels; // size n, distinct
    std::vector<Matrix> adjacency;   // grid.count() matrices, n x n
    std::optional<YearMapping> time_mapping;

    /// Throws ValidationError on any invariant violation.
    void validate() const;
};

// ---------------------------------------------------------------------------
// ProbMatrixSequence
// ---------------------------------------------------------------------------

/// Symmetric probability matrices in [0,1] at the grid times.
struct ProbMatrixSequence {
    TimeGrid grid;
    int n = 0;
    std::vector<std::string> labels;
    std::vector<Matrix> matrices;
    Stage stage = Stage::two_stage;
    std::optional<YearMapping> time_mapping;

    void validate() const;
};

// ---------------------------------------------------------------------------
// SmoothConfig
// ---------------------------------------------------------------------------

/// Tuning bundle for the multi-stage estimators. h1 must satisfy
/// h1 >= 1/(2m) for the grid it is used with; that check happens at use
/// because the config does not know the grid.
struct SmoothConfig {
    int ell = 1;                     // local polynomial degree, 0..4
    double h1 = 0.2;                 // temporal bandwidth, (0,1]
    double h2 = 0.5;                 // neighborhood quantile, (0,1]
    std::optional<double> h3;        // refinement bandwidth, (0,1]
    KernelKind kernel = KernelKind::tricube;
    Variant variant = Variant::proposed;

    void validate() const;
};

} // namespace tvnet
