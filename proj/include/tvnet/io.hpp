#pragma once

#include "tvnet/types.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace tvnet {

/// Reads the snapshot TSV (header `time<TAB>node_u<TAB>node_v`). Edge lines
/// are OR-symmetrized and idempotent; a line carrying only a time declares a
/// snapshot with no edges. Times must either all lie in [0,1] or all be
/// integer years, which are affinely rescaled to [0,1] with the mapping
/// recorded on the sequence. Labels get dense indices in first-appearance
/// order.
SnapshotSequence load_snapshots(const std::filesystem::path& path);

/// Inverse of load_snapshots up to label-order canonicalization. Times are
/// written normalized to [0,1] with full precision; snapshots without edges
/// become bare time lines.
void save_snapshots(const SnapshotSequence& seq, const std::filesystem::path& path);

/// Writes manifest.json plus one P_%04d.csv per time point (row-major,
/// 10 significant digits). Returns the manifest path.
std::filesystem::path save_prob_sequence(const ProbMatrixSequence& seq,
                                         const std::filesystem::path& dir);

/// Loads a directory written by save_prob_sequence.
ProbMatrixSequence load_prob_sequence(const std::filesystem::path& dir);

/// One row of the party-status sidecar TSV (`time<TAB>node<TAB>category`).
struct PartyRecord {
    double time = 0.0;
    std::string node;
    std::string category;
};

std::vector<PartyRecord> load_party_tsv(const std::filesystem::path& path);

/// Overwrites path with content, throwing IoError on failure.
void write_text_file(const std::filesystem::path& path, const std::string& content);

std::string read_text_file(const std::filesystem::path& path);

} // namespace tvnet
