#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "lookout/iforest.hpp"
#include "lookout/prng.hpp"

using namespace lookout;

namespace {

constexpr double kEulerGamma = 0.5772156649;

// Standard-normal draws via Box-Muller on the project generator.
Eigen::MatrixXd gaussian_cloud(int n, int dims, std::uint64_t seed) {
    SplitMix64 rng(seed);
    Eigen::MatrixXd points(n, dims);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < dims; ++j) {
            const double u1 = std::max(rng.next_double(), 1e-300);
            const double u2 = rng.next_double();
            points(i, j) = std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
        }
    }
    return points;
}

int max_depth(const IsolationTree& tree, int node, int depth) {
    const auto& n = tree.nodes[static_cast<std::size_t>(node)];
    if (n.left < 0) return depth;
    return std::max(max_depth(tree, n.left, depth + 1), max_depth(tree, n.right, depth + 1));
}

long leaf_size_sum(const IsolationTree& tree) {
    long total = 0;
    for (const auto& n : tree.nodes)
        if (n.left < 0) total += n.size;
    return total;
}

} // namespace

TEST_SUITE("iforest") {

TEST_CASE("path-length normalizer closed forms") {
    CHECK(average_path_length(1) == 0.0);
    CHECK(average_path_length(2) == 1.0); // 2*H(1) - 2*(1/2) with H(1) = 1 exactly
    CHECK(average_path_length(3) ==
          doctest::Approx(2.0 * (std::log(2.0) + kEulerGamma) - 4.0 / 3.0).epsilon(1e-15));
    CHECK(average_path_length(256) > average_path_length(128));
}

TEST_CASE("score formula fixed points and monotonicity") {
    // Mean path equal to the normalizer forces 2^-1.
    CHECK(score_from_mean_path(average_path_length(256), 256) == 0.5);
    CHECK(score_from_mean_path(0.0, 256) == 1.0);
    // Degenerate normalizer (one-point training set) pins the score at 0.5.
    CHECK(score_from_mean_path(3.0, 1) == 0.5);
    double last = 1.0;
    for (double path = 0.5; path < 20.0; path += 0.5) {
        const double s = score_from_mean_path(path, 128);
        CHECK(s < last);
        CHECK(s > 0.0);
        CHECK(s < 1.0);
        last = s;
    }
}

TEST_CASE("n=1 trains single-leaf trees scoring 0.5") {
    Eigen::MatrixXd one(1, 3);
    one << 4.0, -1.0, 0.5;
    ForestParams params;
    params.seed = 9;
    IsolationForest forest = fit(one, params);
    REQUIRE(static_cast<int>(forest.trees.size()) == params.trees);
    CHECK(forest.effective_subsample == 1);
    for (const IsolationTree& tree : forest.trees) {
        REQUIRE(tree.nodes.size() == 1);
        CHECK(tree.nodes[0].left == -1);
        CHECK(tree.nodes[0].size == 1);
    }
    CHECK(forest.score(one.row(0).transpose()) == 0.5);
}

TEST_CASE("identical points train single-leaf trees scoring 0.5") {
    Eigen::MatrixXd flat = Eigen::MatrixXd::Constant(40, 2, 3.25);
    ForestParams params;
    params.seed = 123;
    IsolationForest forest = fit(flat, params);
    CHECK(forest.effective_subsample == 40);
    for (const IsolationTree& tree : forest.trees) {
        REQUIRE(tree.nodes.size() == 1);
        CHECK(tree.nodes[0].size == 40);
    }
    // Every point lands in the root leaf: mean path = c(40) = normalizer.
    CHECK(forest.score(flat.row(0).transpose()) == 0.5);
}

TEST_CASE("fixed seed and input give a bit-identical forest") {
    Eigen::MatrixXd points = gaussian_cloud(300, 2, 77);
    ForestParams params;
    params.trees = 25;
    params.subsample = 64;
    params.seed = 20240817;
    IsolationForest a = fit(points, params);
    IsolationForest b = fit(points, params);
    REQUIRE(a.trees.size() == b.trees.size());
    for (std::size_t t = 0; t < a.trees.size(); ++t) CHECK(a.trees[t] == b.trees[t]);
    const Eigen::VectorXd probe = points.row(5).transpose();
    CHECK(a.score(probe) == b.score(probe));
}

TEST_CASE("tree shape invariants: height limit and leaf mass") {
    Eigen::MatrixXd points = gaussian_cloud(1000, 3, 5);
    ForestParams params;
    params.trees = 30;
    params.subsample = 128;
    params.seed = 4;
    IsolationForest forest = fit(points, params);
    const int limit = static_cast<int>(std::ceil(std::log2(128.0)));
    for (const IsolationTree& tree : forest.trees) {
        CHECK(max_depth(tree, 0, 0) <= limit);
        CHECK(leaf_size_sum(tree) == 128);
    }
}

TEST_CASE("10-sigma outlier outscores 200 Gaussian inliers") {
    Eigen::MatrixXd points = gaussian_cloud(201, 2, 31);
    points.row(200) << 10.0, 10.0;
    ForestParams params;
    params.trees = 100;
    params.subsample = 128;
    params.seed = 1;
    IsolationForest forest = fit(points, params);

    // Ranking oracle: the planted point is the farthest from the centroid.
    const Eigen::RowVector2d centroid = points.colwise().mean();
    int farthest = 0;
    double best = -1.0;
    for (int i = 0; i < points.rows(); ++i) {
        const double dist = (points.row(i) - centroid).norm();
        if (dist > best) {
            best = dist;
            farthest = i;
        }
    }
    REQUIRE(farthest == 200);

    const double outlier = forest.score(points.row(200).transpose());
    for (int i = 0; i < 200; ++i) CHECK(outlier > forest.score(points.row(i).transpose()));
}

TEST_CASE("1-d spike dataset isolates the outlier at t=500") {
    Eigen::MatrixXd points = Eigen::MatrixXd::Zero(100, 1);
    points(99, 0) = 1e6;
    ForestParams params;
    params.trees = 500;
    params.subsample = 64;
    params.seed = 12;
    IsolationForest forest = fit(points, params);
    Eigen::VectorXd outlier(1), inlier(1);
    outlier << 1e6;
    inlier << 0.0;
    CHECK(forest.score(outlier) > forest.score(inlier));
}

TEST_CASE("column-restricted fit equals fit on a materialized submatrix") {
    Eigen::MatrixXd points = gaussian_cloud(400, 5, 60);
    ForestParams params;
    params.trees = 20;
    params.subsample = 64;
    params.seed = 3;
    IsolationForest direct = fit(points, {1, 4}, params);

    Eigen::MatrixXd sub(points.rows(), 2);
    sub.col(0) = points.col(1);
    sub.col(1) = points.col(4);
    IsolationForest materialized = fit(sub, params);

    REQUIRE(direct.trees.size() == materialized.trees.size());
    for (std::size_t t = 0; t < direct.trees.size(); ++t)
        CHECK(direct.trees[t] == materialized.trees[t]);
}

TEST_CASE("errors") {
    Eigen::MatrixXd empty(0, 2);
    ForestParams params;
    CHECK_THROWS_AS(fit(empty, params), DataError);

    Eigen::MatrixXd ok = gaussian_cloud(10, 2, 1);
    ForestParams bad = params;
    bad.trees = 0;
    CHECK_THROWS_AS(fit(ok, bad), UsageError);
    bad = params;
    bad.subsample = 1;
    CHECK_THROWS_AS(fit(ok, bad), UsageError);

    IsolationForest forest = fit(ok, params);
    Eigen::VectorXd wrong(3);
    wrong << 1, 2, 3;
    CHECK_THROWS_AS(forest.score(wrong), UsageError);
}

TEST_CASE("scores stay in the open unit interval") {
    Eigen::MatrixXd points = gaussian_cloud(500, 2, 8);
    ForestParams params;
    params.seed = 5;
    IsolationForest forest = fit(points, params);
    for (int i = 0; i < points.rows(); i += 7) {
        const double s = forest.score(points.row(i).transpose());
        CHECK(s > 0.0);
        CHECK(s < 1.0);
    }
}

} // TEST_SUITE
