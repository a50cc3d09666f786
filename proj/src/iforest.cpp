#include "lookout/iforest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "lookout/prng.hpp"

namespace lookout {

namespace {

constexpr double kEulerMascheroni = 0.5772156649;

double harmonic(int i) {
    if (i <= 1) return 1.0;
    return std::log(static_cast<double>(i)) + kEulerMascheroni;
}

/// ψ distinct row indices from [0, n). Rejection sampling keeps this O(ψ)
/// when ψ is small relative to n, so fitting stays independent of n.
std::vector<std::int32_t> sample_rows(std::int64_t n, int count, SplitMix64& rng) {
    std::vector<std::int32_t> rows;
    rows.reserve(static_cast<std::size_t>(count));
    if (static_cast<std::int64_t>(count) * 2 >= n) {
        std::vector<std::int32_t> all(static_cast<std::size_t>(n));
        std::iota(all.begin(), all.end(), 0);
        for (int i = 0; i < count; ++i) {
            const auto j = static_cast<std::size_t>(i) +
                           static_cast<std::size_t>(rng.next_below(static_cast<std::uint64_t>(n - i)));
            std::swap(all[static_cast<std::size_t>(i)], all[j]);
            rows.push_back(all[static_cast<std::size_t>(i)]);
        }
    } else {
        std::unordered_set<std::int32_t> seen;
        seen.reserve(static_cast<std::size_t>(count) * 2);
        while (rows.size() < static_cast<std::size_t>(count)) {
            const auto r = static_cast<std::int32_t>(rng.next_below(static_cast<std::uint64_t>(n)));
            if (seen.insert(r).second) rows.push_back(r);
        }
    }
    return rows;
}

struct TreeBuilder {
    const Eigen::MatrixXd& sample; // subsample rows x q columns
    IsolationTree& tree;
    SplitMix64& rng;
    int height_limit;

    // Builds the subtree over sample rows index[lo, hi) at the given depth
    // and returns its node id.
    std::int32_t build(std::vector<std::int32_t>& index, int lo, int hi, int depth) {
        const auto id = static_cast<std::int32_t>(tree.nodes.size());
        tree.nodes.emplace_back();
        tree.nodes[static_cast<std::size_t>(id)].size = hi - lo;
        if (hi - lo <= 1 || depth >= height_limit) return id;

        const int q = static_cast<int>(sample.cols());
        // Dimensions that still vary within this subset.
        std::int32_t candidates[64];
        int candidate_count = 0;
        double lo_val[64], hi_val[64];
        for (int c = 0; c < q; ++c) {
            double mn = sample(index[static_cast<std::size_t>(lo)], c);
            double mx = mn;
            for (int i = lo + 1; i < hi; ++i) {
                const double v = sample(index[static_cast<std::size_t>(i)], c);
                mn = std::min(mn, v);
                mx = std::max(mx, v);
            }
            if (mx > mn) {
                candidates[candidate_count] = c;
                lo_val[candidate_count] = mn;
                hi_val[candidate_count] = mx;
                ++candidate_count;
            }
        }
        if (candidate_count == 0) return id; // all dimensions constant

        const int pick = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(candidate_count)));
        const int dim = candidates[pick];
        const double split = rng.next_inside(lo_val[pick], hi_val[pick]);

        const auto first = index.begin() + lo;
        const auto last = index.begin() + hi;
        const auto mid_it = std::partition(first, last, [&](std::int32_t row) {
            return sample(row, dim) < split;
        });
        const int mid = static_cast<int>(mid_it - index.begin());

        const std::int32_t left = build(index, lo, mid, depth + 1);
        const std::int32_t right = build(index, mid, hi, depth + 1);
        auto& node = tree.nodes[static_cast<std::size_t>(id)];
        node.split_dimension = dim;
        node.split_value = split;
        node.left = left;
        node.right = right;
        return id;
    }
};

IsolationForest fit_impl(const Eigen::MatrixXd& points, const std::vector<int>* columns,
                         const ForestParams& params) {
    const auto n = static_cast<std::int64_t>(points.rows());
    const int q = columns ? static_cast<int>(columns->size())
                          : static_cast<int>(points.cols());
    if (n == 0) throw DataError("isolation forest: empty point set");
    if (q < 1) throw UsageError("isolation forest: no dimensions");
    if (q > 64) throw UsageError("isolation forest: more than 64 dimensions");
    if (params.trees < 1) throw UsageError("isolation forest: trees must be >= 1");
    if (params.subsample < 2) throw UsageError("isolation forest: subsample must be >= 2");

    IsolationForest forest;
    forest.params = params;
    forest.dimensionality = q;
    forest.effective_subsample = static_cast<int>(std::min<std::int64_t>(params.subsample, n));
    forest.trees.resize(static_cast<std::size_t>(params.trees));

    const int psi = forest.effective_subsample;
    const int height_limit =
        static_cast<int>(std::ceil(std::log2(static_cast<double>(std::max(psi, 2)))));

    // Draw every tree's subsample first (each tree's row list sorted
    // ascending), then gather all of them in one block-ascending sweep over
    // the source columns: the scattered reads of a large `points` matrix turn
    // into a near-sequential pass instead of one cold walk per tree. A fitted
    // tree depends only on its sampled point set, not on the gather route, so
    // this is purely a locality optimization.
    std::vector<std::vector<std::int32_t>> tree_rows(static_cast<std::size_t>(params.trees));
    std::vector<SplitMix64> tree_rngs;
    tree_rngs.reserve(static_cast<std::size_t>(params.trees));
    for (int t = 0; t < params.trees; ++t) {
        SplitMix64 rng(derive_seed(params.seed, static_cast<std::uint64_t>(t)));
        std::vector<std::int32_t>& rows = tree_rows[static_cast<std::size_t>(t)];
        rows = sample_rows(n, psi, rng);
        std::sort(rows.begin(), rows.end());
        tree_rngs.push_back(rng);
    }

    std::vector<Eigen::MatrixXd> samples(static_cast<std::size_t>(params.trees));
    for (auto& sample : samples) sample.resize(psi, q);
    for (int c = 0; c < q; ++c) {
        const int source = columns ? (*columns)[static_cast<std::size_t>(c)] : c;
        const double* column = points.col(source).data();
        std::vector<int> cursor(static_cast<std::size_t>(params.trees), 0);
        constexpr std::int64_t kBlockRows = 4096;
        for (std::int64_t base = 0; base < n; base += kBlockRows) {
            const auto limit = static_cast<std::int32_t>(std::min<std::int64_t>(base + kBlockRows, n));
            for (int t = 0; t < params.trees; ++t) {
                const std::vector<std::int32_t>& rows = tree_rows[static_cast<std::size_t>(t)];
                int& cur = cursor[static_cast<std::size_t>(t)];
                while (cur < psi && rows[static_cast<std::size_t>(cur)] < limit) {
                    samples[static_cast<std::size_t>(t)](cur, c) = column[rows[static_cast<std::size_t>(cur)]];
                    ++cur;
                }
            }
        }
    }

    for (int t = 0; t < params.trees; ++t) {
        IsolationTree& tree = forest.trees[static_cast<std::size_t>(t)];
        tree.nodes.reserve(static_cast<std::size_t>(2 * psi));
        std::vector<std::int32_t> index(static_cast<std::size_t>(psi));
        std::iota(index.begin(), index.end(), 0);
        TreeBuilder builder{samples[static_cast<std::size_t>(t)], tree, tree_rngs[static_cast<std::size_t>(t)],
                            psi == 1 ? 0 : height_limit};
        builder.build(index, 0, psi, 0);
    }
    return forest;
}

} // namespace

double average_path_length(int size) {
    if (size <= 1) return 0.0;
    if (size == 2) return 1.0;
    const double z = static_cast<double>(size);
    return 2.0 * harmonic(size - 1) - 2.0 * (z - 1.0) / z;
}

double score_from_mean_path(double mean_path, int effective_subsample) {
    const double norm = average_path_length(effective_subsample);
    if (norm <= 0.0) return 0.5;
    return std::exp2(-mean_path / norm);
}

IsolationForest fit(const Eigen::MatrixXd& points, const ForestParams& params) {
    return fit_impl(points, nullptr, params);
}

IsolationForest fit(const Eigen::MatrixXd& points, const std::vector<int>& columns,
                    const ForestParams& params) {
    return fit_impl(points, &columns, params);
}

double IsolationForest::mean_path_length(const Eigen::VectorXd& point) const {
    if (static_cast<int>(point.size()) != dimensionality)
        throw UsageError("isolation forest: point has " + std::to_string(point.size()) +
                         " dimensions, forest expects " + std::to_string(dimensionality));
    for (int c = 0; c < dimensionality; ++c)
        if (!std::isfinite(point[c]))
            throw DataError("isolation forest: non-finite coordinate");

    double total = 0.0;
    for (const IsolationTree& tree : trees) {
        double depth = 0.0;
        std::int32_t at = 0;
        while (tree.nodes[static_cast<std::size_t>(at)].left >= 0) {
            const auto& node = tree.nodes[static_cast<std::size_t>(at)];
            at = point[node.split_dimension] < node.split_value ? node.left : node.right;
            depth += 1.0;
        }
        total += depth + average_path_length(tree.nodes[static_cast<std::size_t>(at)].size);
    }
    return total / static_cast<double>(trees.size());
}

double IsolationForest::score(const Eigen::VectorXd& point) const {
    // Average the per-tree normalized paths rather than normalizing the
    // average: same value in exact arithmetic, but a path that equals the
    // normalizer then contributes exactly 1, so degenerate training sets
    // (every tree a single root leaf) come out at exactly 0.5.
    if (static_cast<int>(point.size()) != dimensionality)
        throw UsageError("isolation forest: point has " + std::to_string(point.size()) +
                         " dimensions, forest expects " + std::to_string(dimensionality));
    for (int c = 0; c < dimensionality; ++c)
        if (!std::isfinite(point[c]))
            throw DataError("isolation forest: non-finite coordinate");
    const double norm = average_path_length(effective_subsample);
    if (norm <= 0.0) return 0.5;

    double total = 0.0;
    for (const IsolationTree& tree : trees) {
        double depth = 0.0;
        std::int32_t at = 0;
        while (tree.nodes[static_cast<std::size_t>(at)].left >= 0) {
            const auto& node = tree.nodes[static_cast<std::size_t>(at)];
            at = point[node.split_dimension] < node.split_value ? node.left : node.right;
            depth += 1.0;
        }
        total += (depth + average_path_length(tree.nodes[static_cast<std::size_t>(at)].size)) / norm;
    }
    return std::exp2(-total / static_cast<double>(trees.size()));
}

} // namespace lookout
