#pragma once

#include <array>
#include <string_view>

#include <Eigen/Core>

#include "lookout/tgraph.hpp"

namespace lookout {

/// Column indices of the per-node feature matrix. Pair-plot enumeration and
/// file headers depend on this order; do not reorder.
enum FeatureIndex : int {
    kIndegree = 0,   // distinct in-neighbors
    kOutdegree,      // distinct out-neighbors
    kInweightV,      // sum of incoming edge values
    kOutweightV,     // sum of outgoing edge values
    kInweightR,      // incoming edge count (multi-edge repetitions)
    kOutweightR,     // outgoing edge count
    kIatAvg,         // mean inter-arrival time of incident edges
    kIatVar,         // population variance of inter-arrival times
    kIatMin,
    kIatMedian,
    kIatMax,
    kLifetime,       // last incident timestamp - first incident timestamp
    kFeatureCount,
};

/// n x 12 per-node feature table. All entries are finite and non-negative.
struct FeatureMatrix {
    Eigen::MatrixXd values;

    static const std::array<std::string_view, kFeatureCount>& feature_names();
    static std::string_view feature_name(int column) { return feature_names()[static_cast<std::size_t>(column)]; }

    int rows() const { return static_cast<int>(values.rows()); }
};

/// Computes the 12 features for every node. Inter-arrival times run over the
/// union of a node's incident edges (incoming and outgoing together; a
/// self-loop counts once), using consecutive gaps of the timestamp-sorted
/// sequence. Nodes with fewer than two incident edges get 0 for all IAT
/// features and lifetime. Equal timestamps contribute gaps of 0. Median of an
/// even-length gap list is the mean of the two middle values; variance is the
/// population variance.
FeatureMatrix extract_features(const TGraph& graph);

/// Column transform applied before forest fitting and plotting. log1p
/// compresses the heavy-tailed degree/weight features so range-uniform splits
/// discriminate better; none leaves values as extracted.
enum class ScalingMode { log1p, none };

/// Elementwise x -> ln(1 + x) per column under log1p; identity under none.
Eigen::MatrixXd apply_scaling(const Eigen::MatrixXd& values, ScalingMode mode);

std::string_view to_string(ScalingMode mode);

} // namespace lookout
