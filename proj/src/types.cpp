#include "tvnet/types.hpp"

#include "tvnet/errors.hpp"

#include <cmath>
#include <unordered_set>

namespace tvnet {

std::string to_string(KernelKind k) {
    switch (k) {
        case KernelKind::tricube: return "tricube";
        case KernelKind::epanechnikov: return "epanechnikov";
        case KernelKind::uniform: return "uniform";
    }
    return "?";
}

std::string to_string(Variant v) {
    switch (v) {
        case Variant::proposed: return "proposed";
        case Variant::reversed: return "reversed";
        case Variant::independent: return "independent";
        case Variant::pooled: return "pooled";
    }
    return "?";
}

std::string to_string(Stage s) {
    switch (s) {
        case Stage::intermediate: return "intermediate";
        case Stage::two_stage: return "two-stage";
        case Stage::three_stage: return "three-stage";
        case Stage::truth: return "truth";
    }
    return "?";
}

KernelKind kernel_from_string(const std::string& s) {
    if (s == "tricube") return KernelKind::tricube;
    if (s == "epanechnikov") return KernelKind::epanechnikov;
    if (s == "uniform") return KernelKind::uniform;
    throw ValidationError("types: unknown kernel '" + s + "'");
}

Variant variant_from_string(const std::string& s) {
    if (s == "proposed") return Variant::proposed;
    if (s == "reversed") return Variant::reversed;
    if (s == "independent") return Variant::independent;
    if (s == "pooled") return Variant::pooled;
    throw ValidationError("types: unknown variant '" + s + "'");
}

Stage stage_from_string(const std::string& s) {
    if (s == "intermediate") return Stage::intermediate;
    if (s == "two-stage") return Stage::two_stage;
    if (s == "three-stage") return Stage::three_stage;
    if (s == "truth") return Stage::truth;
    throw ValidationError("types: unknown stage '" + s + "'");
}

TimeGrid::TimeGrid(std::vector<double> points) : points_(std::move(points)) {
    if (points_.empty())
        throw ValidationError("types: time grid must contain at least one point");
    for (std::size_t k = 0; k < points_.size(); ++k) {
        double t = points_[k];
        if (!(t >= 0.0 && t <= 1.0))
            throw ValidationError("types: grid time " + std::to_string(t) + " outside [0,1]");
        if (k > 0 && !(points_[k - 1] < t))
            throw ValidationError("types: grid times must be strictly increasing");
    }
}

TimeGrid TimeGrid::equispaced(int m) {
    if (m < 1) throw ValidationError("types: equispaced grid needs m >= 1");
    std::vector<double> pts(m);
    for (int k = 1; k <= m; ++k) pts[k - 1] = static_cast<double>(k) / m;
    return TimeGrid(std::move(pts));
}

int TimeGrid::nearest(double t) const {
    int best = 0;
    double best_d = std::abs(points_[0] - t);
    for (int k = 1; k < count(); ++k) {
        double d = std::abs(points_[k] - t);
        if (d < best_d) { // strict: ties keep the earlier time
            best_d = d;
            best = k;
        }
    }
    return best;
}

TimeGrid TimeGrid::without(int k) const {
    std::vector<double> pts;
    pts.reserve(points_.size() - 1);
    for (int i = 0; i < count(); ++i)
        if (i != k) pts.push_back(points_[i]);
    return TimeGrid(std::move(pts));
}

namespace {

void check_square_symmetric(const Matrix& A, int n, const char* what, int k) {
    if (A.rows() != n || A.cols() != n)
        throw ValidationError(std::string("types: ") + what + " " + std::to_string(k) +
                              " has dimension " + std::to_string(A.rows()) + "x" +
                              std::to_string(A.cols()) + ", expected " + std::to_string(n));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (A(i, j) != A(j, i))
                throw ValidationError(std::string("types: ") + what + " " + std::to_string(k) +
                                      " is not symmetric at (" + std::to_string(i) + "," +
                                      std::to_string(j) + ")");
}

} // namespace

void SnapshotSequence::validate() const {
    if (static_cast<int>(labels.size()) != n)
        throw ValidationError("types: label count does not match n");
    std::unordered_set<std::string> seen;
    for (const auto& l : labels)
        if (!seen.insert(l).second)
            throw ValidationError("types: duplicate node label '" + l + "'");
    if (static_cast<int>(adjacency.size()) != grid.count())
        throw ValidationError("types: snapshot count does not match grid");
    for (int k = 0; k < grid.count(); ++k) {
        const Matrix& A = adjacency[k];
        check_square_symmetric(A, n, "snapshot", k);
        for (int i = 0; i < n; ++i) {
            if (A(i, i) != 0.0)
                throw ValidationError("types: snapshot " + std::to_string(k) +
                                      " has a self-loop at node " + std::to_string(i));
            for (int j = i + 1; j < n; ++j)
                if (A(i, j) != 0.0 && A(i, j) != 1.0)
                    throw ValidationError("types: snapshot " + std::to_string(k) +
                                          " entry (" + std::to_string(i) + "," +
                                          std::to_string(j) + ") not in {0,1}");
        }
    }
}

void ProbMatrixSequence::validate() const {
    if (!labels.empty() && static_cast<int>(labels.size()) != n)
        throw ValidationError("types: label count does not match n");
    if (static_cast<int>(matrices.size()) != grid.count())
        throw ValidationError("types: matrix count does not match grid");
    for (int k = 0; k < grid.count(); ++k) {
        const Matrix& P = matrices[k];
        check_square_symmetric(P, n, "matrix", k);
        if ((P.array() < 0.0).any() || (P.array() > 1.0).any())
            throw ValidationError("types: matrix " + std::to_string(k) +
                                  " has entries outside [0,1]");
    }
}

void SmoothConfig::validate() const {
    if (ell < 0 || ell > 4)
        throw ValidationError("types: polynomial degree must be in 0..4");
    if (!(h1 > 0.0 && h1 <= 1.0))
        throw ValidationError("types: h1 must lie in (0,1]");
    if (!(h2 > 0.0 && h2 <= 1.0))
        throw ValidationError("types: h2 must lie in (0,1]");
    if (h3 && !(*h3 > 0.0 && *h3 <= 1.0))
        throw ValidationError("types: h3 must lie in (0,1]");
}

} // namespace tvnet
