#pragma once

#include <vector>

#include <Eigen/Core>

#include "lookout/features.hpp"
#include "lookout/iforest.hpp"
#include "lookout/tgraph.hpp"

namespace lookout {

/// One 2-d feature space. `index` is the position in the lexicographic
/// enumeration of ordered pairs (feature_x < feature_y), so index <-> pair is
/// a bijection.
struct PairPlotId {
    int index = 0;
    int feature_x = 0;
    int feature_y = 0;

    bool operator==(const PairPlotId&) const = default;
};

/// All d(d-1)/2 feature pairs in lexicographic order. d must be >= 2.
std::vector<PairPlotId> enumerate_pairs(int d);

/// k x l anomaly-score table: scores(i, j) is the anomaly score of the i-th
/// input anomaly within pair plot j. Entries lie in (0, 1).
struct ScoreMatrix {
    Eigen::MatrixXd scores;
    std::vector<int> anomaly_order;    // dense node indices, row order
    std::vector<PairPlotId> plot_order;

    int k() const { return static_cast<int>(scores.rows()); }
    int l() const { return static_cast<int>(scores.cols()); }
};

/// Scores every anomaly in every pair plot. For pair j a forest is fitted on
/// all n nodes restricted to the pair's two columns of the scaled feature
/// matrix, seeded with derive_seed(params.seed, j) so plots are independent
/// but the full matrix is reproducible. Pairs are scored in parallel.
ScoreMatrix score_anomalies(const FeatureMatrix& features, const AnomalySet& anomalies,
                            const ForestParams& params, ScalingMode transform);

} // namespace lookout
