#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "lookout/errors.hpp"

namespace lookout {

struct ForestParams {
    int trees = 100;
    int subsample = 256;
    std::uint64_t seed = 0;
};

/// One extremely randomized isolation tree, stored as a flat node array.
/// Internal nodes split on `x[split_dimension] < split_value`; leaves carry
/// the subset size reached there. Root is node 0.
struct IsolationTree {
    struct Node {
        double split_value = 0.0;
        std::int32_t left = -1;  // -1 marks a leaf
        std::int32_t right = -1;
        std::int32_t split_dimension = -1;
        std::int32_t size = 0;   // subset size, meaningful at leaves

        bool operator==(const Node&) const = default;
    };
    std::vector<Node> nodes;

    bool operator==(const IsolationTree&) const = default;
};

/// Ensemble of isolation trees over q dimensions. Fitting and scoring are
/// pure functions of (points, params, point); a fitted forest is immutable
/// and shareable across threads.
struct IsolationForest {
    ForestParams params;
    std::vector<IsolationTree> trees;
    int dimensionality = 0;
    /// Per-tree training subsample size: min(params.subsample, point count).
    int effective_subsample = 0;

    /// Expected anomaly score of a point.
    double score(const Eigen::VectorXd& point) const;
    /// Mean root-to-leaf path length of a point across trees.
    double mean_path_length(const Eigen::VectorXd& point) const;
};

/// Average unsuccessful-search path length c(z) of a subset of size z:
/// c(1) = 0, c(2) = 1, and c(z) = 2 H(z-1) - 2 (z-1)/z otherwise, with the
/// harmonic number approximated as H(i) = ln(i) + 0.5772156649 for i >= 2
/// and H(1) = 1 exactly.
double average_path_length(int size);

/// Anomaly score 2^(-mean_path / c(effective_subsample)); 0.5 when the
/// normalizer degenerates (single-point training sets).
double score_from_mean_path(double mean_path, int effective_subsample);

/// Trains `params.trees` isolation trees, each on min(subsample, n) rows of
/// `points` drawn uniformly without replacement from a generator seeded by
/// (params.seed, tree index). Splits pick a uniform dimension among those
/// with nonzero range in the current subset and a uniform value strictly
/// inside that range; recursion stops at ceil(log2(subsample size)), at
/// subsets of one point, or when every dimension is constant.
IsolationForest fit(const Eigen::MatrixXd& points, const ForestParams& params);

/// Same, but restricted to the given columns of `points` (the forest then
/// scores vectors of columns.size() coordinates in that column order).
IsolationForest fit(const Eigen::MatrixXd& points, const std::vector<int>& columns,
                    const ForestParams& params);

} // namespace lookout
