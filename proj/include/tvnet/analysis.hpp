#pragma once

#include "tvnet/io.hpp"
#include "tvnet/types.hpp"

#include <map>
#include <string>
#include <vector>

namespace tvnet {

/// Row i concatenates node i's estimated probabilities to every other node
/// across all time points (self-entries excluded), length (n-1)*m.
Matrix build_trajectories(const ProbMatrixSequence& seq);

/// D = 1 - (corr + 1)/2 over the trajectory rows; Pearson correlation,
/// rescaled so D lies in [0,1] with zero diagonal. Throws on a constant
/// trajectory (zero variance).
Matrix trajectory_dissimilarity(const ProbMatrixSequence& seq);

/// One merge of the agglomeration, scipy convention: leaves are 0..n-1 and
/// the merge in row r creates cluster n+r. Rows are sorted by height.
struct ClusterMerge {
    int left = 0;
    int right = 0;
    double height = 0.0;
    int size = 0;
};

struct ClusterResult {
    std::vector<ClusterMerge> merges;
    int chosen_k = 0;
    std::vector<int> labels;              // clusters numbered by smallest member
    std::map<int, double> silhouette_by_k;
    std::string to_json(const std::vector<std::string>& node_labels) const;
};

/// Ward linkage on a dissimilarity matrix via the nearest-neighbor chain,
/// applying the Lance-Williams update to squared dissimilarities (the
/// Ward.D2 convention); heights are the unsquared merge criteria.
std::vector<ClusterMerge> ward_linkage(const Matrix& D);

/// Membership after cutting the dendrogram at K clusters.
std::vector<int> cut_dendrogram(const std::vector<ClusterMerge>& merges, int n, int K);

/// Average silhouette width of a flat clustering under dissimilarity D;
/// singleton clusters contribute zero.
double mean_silhouette(const Matrix& D, const std::vector<int>& labels);

/// Full Ward + silhouette model selection over k_range (chosen K maximizes
/// the average silhouette; ties resolve to the smaller K).
ClusterResult ward_cluster(const Matrix& D, const std::vector<int>& k_range);

/// Mean within-cluster affiliation curves: row a holds
/// (1/(|C_a|(|C_a|-1))) sum_{i != j in C_a} P^(t_k)_{ij} over k. Rows of
/// singleton clusters are NaN (undefined).
Matrix cluster_trajectories(const ProbMatrixSequence& seq, const std::vector<int>& labels);

/// Node categories per time point; pair types are the unordered category
/// pairs. Built from the party TSV aligned against a probability sequence.
struct GroupPartition {
    std::vector<std::vector<std::string>> category; // [time][node]
};

GroupPartition align_party_records(const std::vector<PartyRecord>& records,
                                   const ProbMatrixSequence& seq);

/// Group-based polarization score R^2(t) = SS_between / SS_total over the
/// unordered node pairs, per time point. NaN where every pair probability is
/// equal (SS_total = 0).
std::vector<double> polarization_score(const ProbMatrixSequence& seq, const GroupPartition& gp);

} // namespace tvnet
