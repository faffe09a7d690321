#include "tvnet/analysis.hpp"

#include "tvnet/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <unordered_map>

using nlohmann::json;

namespace tvnet {

Matrix build_trajectories(const ProbMatrixSequence& seq) {
    const int n = seq.n;
    const int m = seq.grid.count();
    if (n < 2 || m < 1) throw ValidationError("analysis: need n >= 2 and m >= 1");
    Matrix V(n, (n - 1) * m);
    for (int i = 0; i < n; ++i) {
        int col = 0;
        for (int k = 0; k < m; ++k) {
            const Matrix& P = seq.matrices[k];
            for (int j = 0; j < n; ++j)
                if (j != i) V(i, col++) = P(i, j);
        }
    }
    return V;
}

Matrix trajectory_dissimilarity(const ProbMatrixSequence& seq) {
    Matrix V = build_trajectories(seq);
    const int n = static_cast<int>(V.rows());
    if (n < 2) throw ValidationError("analysis: need at least 2 trajectories");

    // center and normalize each row, then correlations are inner products
    for (int i = 0; i < n; ++i) {
        V.row(i).array() -= V.row(i).mean();
        double norm = V.row(i).norm();
        if (norm == 0.0)
            throw ValidationError("analysis: trajectory " + std::to_string(i) +
                                  " is constant; correlation undefined");
        V.row(i) /= norm;
    }
    Matrix S(n, n);
    S.noalias() = V * V.transpose();

    Matrix D(n, n);
    for (int i = 0; i < n; ++i) {
        D(i, i) = 0.0;
        for (int j = i + 1; j < n; ++j) {
            double corr = std::clamp(S(i, j), -1.0, 1.0);
            double d = 1.0 - (corr + 1.0) / 2.0;
            D(i, j) = d;
            D(j, i) = d;
        }
    }
    return D;
}

// ---------------------------------------------------------------------------
// Ward linkage (nearest-neighbor chain on squared dissimilarities)
// ---------------------------------------------------------------------------

namespace {

void check_dissimilarity(const Matrix& D) {
    const int n = static_cast<int>(D.rows());
    if (D.cols() != n || n < 2)
        throw ValidationError("analysis: dissimilarity matrix must be square with n >= 2");
    for (int i = 0; i < n; ++i) {
        if (D(i, i) != 0.0)
            throw ValidationError("analysis: dissimilarity diagonal must be zero");
        for (int j = i + 1; j < n; ++j)
            if (!(D(i, j) >= 0.0) || D(i, j) != D(j, i))
                throw ValidationError("analysis: dissimilarity must be symmetric nonnegative");
    }
}

struct RawMerge {
    int rep_a = 0; // smallest leaf of each merged cluster
    int rep_b = 0;
    double height = 0.0;
    int size = 0;
};

} // namespace

std::vector<ClusterMerge> ward_linkage(const Matrix& D) {
    check_dissimilarity(D);
    const int n = static_cast<int>(D.rows());

    Matrix S = D.cwiseProduct(D); // working squared dissimilarities
    std::vector<int> size(n, 1), rep(n);
    std::iota(rep.begin(), rep.end(), 0);
    std::vector<bool> active(n, true);

    std::vector<RawMerge> raw;
    raw.reserve(n - 1);
    std::vector<int> chain;
    chain.reserve(n);

    auto nearest = [&](int a, int prefer) {
        int best = -1;
        double best_d = std::numeric_limits<double>::infinity();
        for (int x = 0; x < n; ++x) {
            if (!active[x] || x == a) continue;
            double d = S(a, x);
            if (d < best_d || (d == best_d && x == prefer)) {
                best_d = d;
                best = x;
            }
        }
        return best;
    };

    int remaining = n;
    int cursor = 0;
    while (remaining > 1) {
        if (chain.empty()) {
            while (!active[cursor]) ++cursor;
            chain.push_back(cursor);
        }
        for (;;) {
            int a = chain.back();
            int prev = chain.size() >= 2 ? chain[chain.size() - 2] : -1;
            int b = nearest(a, prev);
            if (b == prev) {
                chain.pop_back();
                chain.pop_back();
                // merge a and b into slot a, Lance-Williams (Ward) update
                double h2 = S(a, b);
                int sa = size[a], sb = size[b];
                raw.push_back({std::min(rep[a], rep[b]), std::max(rep[a], rep[b]),
                               std::sqrt(h2), sa + sb});
                for (int x = 0; x < n; ++x) {
                    if (!active[x] || x == a || x == b) continue;
                    double val = ((sa + size[x]) * S(a, x) + (sb + size[x]) * S(b, x) -
                                  size[x] * h2) /
                                 (sa + sb + size[x]);
                    S(a, x) = val;
                    S(x, a) = val;
                }
                active[b] = false;
                size[a] = sa + sb;
                rep[a] = std::min(rep[a], rep[b]);
                --remaining;
                break;
            }
            chain.push_back(b);
        }
    }

    // sort by height (stable keeps children before parents on exact ties),
    // then relabel with scipy-style cluster ids via union-find over leaves
    std::stable_sort(raw.begin(), raw.end(),
                     [](const RawMerge& x, const RawMerge& y) { return x.height < y.height; });
    std::vector<int> parent(n), id(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::iota(id.begin(), id.end(), 0);
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    std::vector<ClusterMerge> merges(raw.size());
    for (std::size_t r = 0; r < raw.size(); ++r) {
        int ra = find(raw[r].rep_a);
        int rb = find(raw[r].rep_b);
        int ia = id[ra], ib = id[rb];
        merges[r] = {std::min(ia, ib), std::max(ia, ib), raw[r].height, raw[r].size};
        parent[rb] = ra;
        id[ra] = n + static_cast<int>(r);
    }
    return merges;
}

std::vector<int> cut_dendrogram(const std::vector<ClusterMerge>& merges, int n, int K) {
    if (K < 1 || K > n) throw ValidationError("analysis: K must lie in 1..n");
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    // replay merges through the first n-K rows; ids >= n refer to prior rows
    std::vector<int> row_leaf(merges.size()); // a leaf inside each row's cluster
    for (int r = 0; r < n - K; ++r) {
        int a = merges[r].left < n ? merges[r].left : row_leaf[merges[r].left - n];
        int b = merges[r].right < n ? merges[r].right : row_leaf[merges[r].right - n];
        parent[find(b)] = find(a);
        row_leaf[r] = find(a);
    }
    // number clusters by their smallest member
    std::vector<int> labels(n, -1);
    std::unordered_map<int, int> cluster_id;
    int next = 0;
    for (int i = 0; i < n; ++i) {
        int root = find(i);
        auto it = cluster_id.find(root);
        if (it == cluster_id.end()) it = cluster_id.emplace(root, next++).first;
        labels[i] = it->second;
    }
    return labels;
}

double mean_silhouette(const Matrix& D, const std::vector<int>& labels) {
    const int n = static_cast<int>(D.rows());
    if (static_cast<int>(labels.size()) != n)
        throw ValidationError("analysis: label count mismatch");
    int K = *std::max_element(labels.begin(), labels.end()) + 1;
    std::vector<int> count(K, 0);
    for (int l : labels) ++count[l];

    double total = 0.0;
    std::vector<double> mean_to(K);
    for (int i = 0; i < n; ++i) {
        if (count[labels[i]] <= 1) continue; // singleton contributes 0
        std::fill(mean_to.begin(), mean_to.end(), 0.0);
        for (int j = 0; j < n; ++j)
            if (j != i) mean_to[labels[j]] += D(i, j);
        double a = mean_to[labels[i]] / (count[labels[i]] - 1);
        double b = std::numeric_limits<double>::infinity();
        for (int c = 0; c < K; ++c) {
            if (c == labels[i] || count[c] == 0) continue;
            b = std::min(b, mean_to[c] / count[c]);
        }
        if (!std::isfinite(b)) continue; // single cluster: convention 0
        double denom = std::max(a, b);
        total += denom > 0.0 ? (b - a) / denom : 0.0;
    }
    return total / n;
}

ClusterResult ward_cluster(const Matrix& D, const std::vector<int>& k_range) {
    check_dissimilarity(D);
    const int n = static_cast<int>(D.rows());
    if (k_range.empty()) throw ValidationError("analysis: empty K range");
    for (int k : k_range)
        if (k < 1 || k >= n)
            throw ValidationError("analysis: every K must satisfy 1 <= K < n");

    ClusterResult result;
    result.merges = ward_linkage(D);

    std::vector<int> ks = k_range;
    std::sort(ks.begin(), ks.end());
    ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
    double best = -std::numeric_limits<double>::infinity();
    for (int k : ks) {
        std::vector<int> labels = cut_dendrogram(result.merges, n, k);
        double sil = k == 1 ? 0.0 : mean_silhouette(D, labels);
        result.silhouette_by_k[k] = sil;
        if (sil > best) { // strict: ties keep the smaller K
            best = sil;
            result.chosen_k = k;
            result.labels = std::move(labels);
        }
    }
    return result;
}

std::string ClusterResult::to_json(const std::vector<std::string>& node_labels) const {
    json j;
    j["chosen_k"] = chosen_k;
    json sil = json::object();
    for (const auto& [k, s] : silhouette_by_k) sil[std::to_string(k)] = s;
    j["silhouette_by_k"] = std::move(sil);
    json labs = json::object();
    for (std::size_t i = 0; i < labels.size(); ++i) {
        std::string name = i < node_labels.size() ? node_labels[i] : std::to_string(i);
        labs[name] = labels[i];
    }
    j["labels"] = std::move(labs);
    json rows = json::array();
    for (const ClusterMerge& m : merges)
        rows.push_back(json::array({m.left, m.right, m.height, m.size}));
    j["merges"] = std::move(rows);
    return j.dump(2) + "\n";
}

Matrix cluster_trajectories(const ProbMatrixSequence& seq, const std::vector<int>& labels) {
    const int n = seq.n;
    const int m = seq.grid.count();
    if (static_cast<int>(labels.size()) != n)
        throw ValidationError("analysis: label count mismatch");
    int K = *std::max_element(labels.begin(), labels.end()) + 1;
    std::vector<int> count(K, 0);
    for (int l : labels) ++count[l];

    Matrix curves = Matrix::Constant(K, m, std::numeric_limits<double>::quiet_NaN());
    for (int a = 0; a < K; ++a) {
        if (count[a] < 2) continue; // singleton: affiliation undefined
        double pairs = static_cast<double>(count[a]) * (count[a] - 1);
        for (int k = 0; k < m; ++k) {
            const Matrix& P = seq.matrices[k];
            double sum = 0.0;
            for (int i = 0; i < n; ++i) {
                if (labels[i] != a) continue;
                for (int j = 0; j < n; ++j)
                    if (j != i && labels[j] == a) sum += P(i, j);
            }
            curves(a, k) = sum / pairs;
        }
    }
    return curves;
}

GroupPartition align_party_records(const std::vector<PartyRecord>& records,
                                   const ProbMatrixSequence& seq) {
    const int n = seq.n;
    const int m = seq.grid.count();
    std::unordered_map<std::string, int> label_index;
    for (int i = 0; i < n; ++i) label_index.emplace(seq.labels[i], i);

    GroupPartition gp;
    gp.category.assign(m, std::vector<std::string>(n));
    for (const PartyRecord& rec : records) {
        double t = rec.time;
        if ((t < 0.0 || t > 1.0)) {
            if (!seq.time_mapping)
                throw ParseError("analysis: party time " + std::to_string(t) +
                                 " outside [0,1] and no year mapping is available");
            t = seq.time_mapping->to_unit(t);
        }
        int k = seq.grid.nearest(t);
        if (std::abs(seq.grid[k] - t) > 1e-9)
            throw ParseError("analysis: party time " + std::to_string(rec.time) +
                             " does not match any grid time");
        auto it = label_index.find(rec.node);
        if (it == label_index.end())
            throw ParseError("analysis: unknown node '" + rec.node + "' in party file");
        std::string& slot = gp.category[k][it->second];
        if (!slot.empty() && slot != rec.category)
            throw ParseError("analysis: conflicting categories for node '" + rec.node + "'");
        slot = rec.category;
    }
    for (int k = 0; k < m; ++k)
        for (int i = 0; i < n; ++i)
            if (gp.category[k][i].empty())
                throw ParseError("analysis: node '" + seq.labels[i] +
                                 "' has no category at grid time " + std::to_string(seq.grid[k]));
    return gp;
}

std::vector<double> polarization_score(const ProbMatrixSequence& seq, const GroupPartition& gp) {
    const int n = seq.n;
    const int m = seq.grid.count();
    if (static_cast<int>(gp.category.size()) != m)
        throw ValidationError("analysis: partition does not cover the grid");

    std::vector<double> r2(m);
    for (int k = 0; k < m; ++k) {
        const Matrix& P = seq.matrices[k];
        const auto& cat = gp.category[k];
        std::unordered_map<std::string, std::pair<double, int>> groups; // sum, count
        double total_sum = 0.0;
        int pairs = 0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                const std::string& a = cat[i];
                const std::string& b = cat[j];
                std::string key = a <= b ? a + "|" + b : b + "|" + a;
                auto& g = groups[key];
                g.first += P(i, j);
                g.second += 1;
                total_sum += P(i, j);
                ++pairs;
            }
        double grand = total_sum / pairs;
        double ss_total = 0.0, ss_between = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                const std::string& a = cat[i];
                const std::string& b = cat[j];
                std::string key = a <= b ? a + "|" + b : b + "|" + a;
                const auto& g = groups[key];
                double mean_g = g.first / g.second;
                ss_total += (P(i, j) - grand) * (P(i, j) - grand);
                ss_between += (mean_g - grand) * (mean_g - grand);
            }
        r2[k] = ss_total > 0.0 ? ss_between / ss_total
                               : std::numeric_limits<double>::quiet_NaN();
    }
    return r2;
}

} // namespace tvnet
