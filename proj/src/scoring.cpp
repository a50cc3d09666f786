#include "lookout/scoring.hpp"

#include "lookout/parallel.hpp"
#include "lookout/prng.hpp"

namespace lookout {

std::vector<PairPlotId> enumerate_pairs(int d) {
    if (d < 2) throw UsageError("pair enumeration needs at least 2 features, got " + std::to_string(d));
    std::vector<PairPlotId> pairs;
    pairs.reserve(static_cast<std::size_t>(d) * static_cast<std::size_t>(d - 1) / 2);
    int j = 0;
    for (int x = 0; x < d; ++x)
        for (int y = x + 1; y < d; ++y)
            pairs.push_back(PairPlotId{j++, x, y});
    return pairs;
}

ScoreMatrix score_anomalies(const FeatureMatrix& features, const AnomalySet& anomalies,
                            const ForestParams& params, ScalingMode transform) {
    const int n = features.rows();
    for (const int a : anomalies.members)
        if (a < 0 || a >= n)
            throw UsageError("anomaly index " + std::to_string(a) + " out of range for " +
                             std::to_string(n) + " nodes");

    // Skip the whole-matrix copy when no transform applies.
    const Eigen::MatrixXd transformed =
        transform == ScalingMode::none ? Eigen::MatrixXd() : apply_scaling(features.values, transform);
    const Eigen::MatrixXd& scaled =
        transform == ScalingMode::none ? features.values : transformed;

    ScoreMatrix out;
    out.anomaly_order = anomalies.members;
    out.plot_order = enumerate_pairs(static_cast<int>(scaled.cols()));
    const int k = anomalies.k();
    const int l = static_cast<int>(out.plot_order.size());
    out.scores.resize(k, l);

    parallel_for(static_cast<std::size_t>(l), [&](std::size_t ji) {
        const PairPlotId& pair = out.plot_order[ji];
        ForestParams pair_params = params;
        pair_params.seed = derive_seed(params.seed, static_cast<std::uint64_t>(pair.index));
        const IsolationForest forest =
            fit(scaled, std::vector<int>{pair.feature_x, pair.feature_y}, pair_params);

        Eigen::VectorXd point(2);
        for (int i = 0; i < k; ++i) {
            const int node = anomalies.members[static_cast<std::size_t>(i)];
            point[0] = scaled(node, pair.feature_x);
            point[1] = scaled(node, pair.feature_y);
            out.scores(i, static_cast<Eigen::Index>(ji)) = forest.score(point);
        }
    });

    return out;
}

} // namespace lookout
