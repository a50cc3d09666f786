#include "lookout/features.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "lookout/parallel.hpp"

namespace lookout {

const std::array<std::string_view, kFeatureCount>& FeatureMatrix::feature_names() {
    static const std::array<std::string_view, kFeatureCount> names = {
        "indegree",  "outdegree",  "inweight_v", "outweight_v",
        "inweight_r", "outweight_r", "iat_avg",    "iat_var",
        "iat_min",   "iat_median", "iat_max",    "lifetime",
    };
    return names;
}

namespace {

int distinct_count(std::vector<std::int32_t>& neighbors) {
    std::sort(neighbors.begin(), neighbors.end());
    return static_cast<int>(std::unique(neighbors.begin(), neighbors.end()) - neighbors.begin());
}

} // namespace

FeatureMatrix extract_features(const TGraph& graph) {
    const int n = graph.n();
    FeatureMatrix out;
    out.values.setZero(n, kFeatureCount);

    const auto& edges = graph.edges();

    parallel_for(static_cast<std::size_t>(n), [&](std::size_t vi) {
        const int v = static_cast<int>(vi);
        const auto& in = graph.in_edges(v);
        const auto& outgoing = graph.out_edges(v);

        double inweight_v = 0.0;
        for (const std::int32_t e : in) inweight_v += edges[static_cast<std::size_t>(e)].value;
        double outweight_v = 0.0;
        for (const std::int32_t e : outgoing) outweight_v += edges[static_cast<std::size_t>(e)].value;

        std::vector<std::int32_t> neighbors;
        neighbors.reserve(in.size());
        for (const std::int32_t e : in) neighbors.push_back(edges[static_cast<std::size_t>(e)].source);
        const int indegree = distinct_count(neighbors);
        neighbors.clear();
        for (const std::int32_t e : outgoing) neighbors.push_back(edges[static_cast<std::size_t>(e)].destination);
        const int outdegree = distinct_count(neighbors);

        // Incident timestamps: merge the two edge-index lists. Both are
        // ascending, and edge index order is timestamp order, so the merged
        // sequence is timestamp-sorted. A self-loop sits in both lists under
        // one index and is taken once.
        std::vector<std::int64_t> ts;
        ts.reserve(in.size() + outgoing.size());
        std::size_t a = 0, b = 0;
        while (a < in.size() || b < outgoing.size()) {
            if (b == outgoing.size() || (a < in.size() && in[a] < outgoing[b])) {
                ts.push_back(edges[static_cast<std::size_t>(in[a++])].timestamp);
            } else if (a == in.size() || outgoing[b] < in[a]) {
                ts.push_back(edges[static_cast<std::size_t>(outgoing[b++])].timestamp);
            } else { // self-loop, same edge index on both sides
                ts.push_back(edges[static_cast<std::size_t>(in[a])].timestamp);
                ++a;
                ++b;
            }
        }

        double iat_avg = 0.0, iat_var = 0.0, iat_min = 0.0, iat_median = 0.0, iat_max = 0.0;
        double lifetime = 0.0;
        if (ts.size() >= 2) {
            std::vector<double> gaps(ts.size() - 1);
            for (std::size_t i = 0; i + 1 < ts.size(); ++i)
                gaps[i] = static_cast<double>(ts[i + 1] - ts[i]);

            double sum = 0.0;
            for (const double g : gaps) sum += g;
            iat_avg = sum / static_cast<double>(gaps.size());
            double sq = 0.0;
            for (const double g : gaps) sq += (g - iat_avg) * (g - iat_avg);
            iat_var = sq / static_cast<double>(gaps.size());

            std::sort(gaps.begin(), gaps.end());
            iat_min = gaps.front();
            iat_max = gaps.back();
            const std::size_t mid = gaps.size() / 2;
            iat_median = gaps.size() % 2 == 1 ? gaps[mid] : (gaps[mid - 1] + gaps[mid]) / 2.0;

            lifetime = static_cast<double>(ts.back() - ts.front());
        }

        auto row = out.values.row(v);
        row[kIndegree] = indegree;
        row[kOutdegree] = outdegree;
        row[kInweightV] = inweight_v;
        row[kOutweightV] = outweight_v;
        row[kInweightR] = static_cast<double>(in.size());
        row[kOutweightR] = static_cast<double>(outgoing.size());
        row[kIatAvg] = iat_avg;
        row[kIatVar] = iat_var;
        row[kIatMin] = iat_min;
        row[kIatMedian] = iat_median;
        row[kIatMax] = iat_max;
        row[kLifetime] = lifetime;
    });

    return out;
}

Eigen::MatrixXd apply_scaling(const Eigen::MatrixXd& values, ScalingMode mode) {
    if (mode == ScalingMode::none) return values;
    return values.unaryExpr([](double x) { return std::log1p(x); });
}

std::string_view to_string(ScalingMode mode) {
    return mode == ScalingMode::log1p ? "log1p" : "none";
}

} // namespace lookout
