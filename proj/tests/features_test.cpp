#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "lookout/features.hpp"
#include "lookout/prng.hpp"
#include "lookout/tgraph.hpp"

using namespace lookout;

namespace {

TGraph parse(const std::string& text) {
    std::istringstream in(text);
    return parse_edges(in);
}

struct RawRow {
    std::string src;
    std::string dst;
    long long ts;
    double value;
};

std::vector<RawRow> random_rows(int count, int node_pool, std::uint64_t seed) {
    SplitMix64 rng(seed);
    std::vector<RawRow> rows;
    for (int i = 0; i < count; ++i) {
        RawRow row;
        row.src = "n" + std::to_string(rng.next_below(static_cast<std::uint64_t>(node_pool)));
        row.dst = "n" + std::to_string(rng.next_below(static_cast<std::uint64_t>(node_pool)));
        row.ts = static_cast<long long>(rng.next_below(5000)); // dense => many equal ts
        row.value = static_cast<double>(rng.next_below(40)) / 4.0;
        rows.push_back(row);
    }
    return rows;
}

std::string to_text(const std::vector<RawRow>& rows) {
    std::ostringstream out;
    for (const RawRow& row : rows)
        out << row.src << ',' << row.dst << ',' << row.ts << ',' << row.value << '\n';
    return out.str();
}

// Naive O(n*m) recomputation straight from the definitions, no shared code
// with the implementation beyond the graph itself.
Eigen::VectorXd brute_force_row(const TGraph& g, int v) {
    Eigen::VectorXd row = Eigen::VectorXd::Zero(kFeatureCount);
    std::set<int> in_nb, out_nb;
    std::vector<long long> incident;
    for (const Edge& e : g.edges()) {
        const bool is_src = e.source == v;
        const bool is_dst = e.destination == v;
        if (is_dst) {
            in_nb.insert(e.source);
            row[kInweightV] += e.value;
            row[kInweightR] += 1.0;
        }
        if (is_src) {
            out_nb.insert(e.destination);
            row[kOutweightV] += e.value;
            row[kOutweightR] += 1.0;
        }
        if (is_src || is_dst) incident.push_back(e.timestamp);
    }
    row[kIndegree] = static_cast<double>(in_nb.size());
    row[kOutdegree] = static_cast<double>(out_nb.size());

    if (incident.size() >= 2) {
        std::sort(incident.begin(), incident.end());
        std::vector<double> gaps;
        for (std::size_t i = 1; i < incident.size(); ++i)
            gaps.push_back(static_cast<double>(incident[i] - incident[i - 1]));
        double sum = 0;
        for (double gap : gaps) sum += gap;
        const double mean = sum / static_cast<double>(gaps.size());
        double sq = 0;
        for (double gap : gaps) sq += (gap - mean) * (gap - mean);
        std::sort(gaps.begin(), gaps.end());
        const std::size_t half = gaps.size() / 2;
        row[kIatAvg] = mean;
        row[kIatVar] = sq / static_cast<double>(gaps.size());
        row[kIatMin] = gaps.front();
        row[kIatMax] = gaps.back();
        row[kIatMedian] =
            gaps.size() % 2 == 1 ? gaps[half] : 0.5 * (gaps[half - 1] + gaps[half]);
        row[kLifetime] = static_cast<double>(incident.back() - incident.front());
    }
    return row;
}

} // namespace

TEST_SUITE("features") {

TEST_CASE("incident timestamps [2,5,11] give the forced IAT statistics") {
    // Node b touches edges at ts 2 (incoming), 5 (outgoing), 11 (incoming).
    TGraph g = parse("a,b,2\nb,c,5\nd,b,11\n");
    FeatureMatrix f = extract_features(g);
    const int b = g.index_of("b");
    CHECK(f.values(b, kIatMin) == 3.0);
    CHECK(f.values(b, kIatMax) == 6.0);
    CHECK(f.values(b, kIatAvg) == 4.5);
    CHECK(f.values(b, kIatMedian) == 4.5);
    CHECK(f.values(b, kIatVar) == 2.25);
    CHECK(f.values(b, kLifetime) == 9.0);
    CHECK(f.values(b, kIndegree) == 2.0);
    CHECK(f.values(b, kOutdegree) == 1.0);
    CHECK(f.values(b, kInweightR) == 2.0);
    CHECK(f.values(b, kOutweightR) == 1.0);
}

TEST_CASE("single incident edge zeroes the IAT block and lifetime") {
    TGraph g = parse("a,b,7\nc,d,9\nc,d,12\n");
    FeatureMatrix f = extract_features(g);
    const int a = g.index_of("a");
    for (int col : {kIatAvg, kIatVar, kIatMin, kIatMedian, kIatMax, kLifetime})
        CHECK(f.values(a, col) == 0.0);
    CHECK(f.values(a, kOutweightR) == 1.0);
}

TEST_CASE("self-loop counts once in the IAT union, twice in weights") {
    TGraph g = parse("x,x,5\na,x,2\n");
    FeatureMatrix f = extract_features(g);
    const int x = g.index_of("x");
    // Incident timestamps [2,5]: one gap of 3.
    CHECK(f.values(x, kIatMin) == 3.0);
    CHECK(f.values(x, kIatMax) == 3.0);
    CHECK(f.values(x, kIatVar) == 0.0);
    CHECK(f.values(x, kLifetime) == 3.0);
    CHECK(f.values(x, kIndegree) == 2.0);  // a and x itself
    CHECK(f.values(x, kOutdegree) == 1.0); // x itself
    CHECK(f.values(x, kInweightR) == 2.0);
    CHECK(f.values(x, kOutweightR) == 1.0);
}

TEST_CASE("equal timestamps contribute zero gaps") {
    TGraph g = parse("a,b,4\nc,b,4\nb,d,4\n");
    FeatureMatrix f = extract_features(g);
    const int b = g.index_of("b");
    CHECK(f.values(b, kIatMin) == 0.0);
    CHECK(f.values(b, kIatMax) == 0.0);
    CHECK(f.values(b, kIatAvg) == 0.0);
    CHECK(f.values(b, kLifetime) == 0.0);
}

TEST_CASE("500-node random graph matches the brute-force oracle") {
    TGraph g = parse(to_text(random_rows(6000, 500, 2024)));
    FeatureMatrix f = extract_features(g);
    REQUIRE(f.rows() == g.n());
    for (int v = 0; v < g.n(); ++v) {
        const Eigen::VectorXd want = brute_force_row(g, v);
        for (int c = 0; c < kFeatureCount; ++c) {
            if (c == kIatAvg || c == kIatVar) {
                CHECK(f.values(v, c) == doctest::Approx(want[c]).epsilon(1e-12));
            } else {
                CHECK(f.values(v, c) == want[c]);
            }
        }
    }
}

TEST_CASE("aggregate invariants hold on a random graph") {
    TGraph g = parse(to_text(random_rows(3000, 200, 11)));
    FeatureMatrix f = extract_features(g);
    CHECK(f.values.col(kInweightR).sum() == static_cast<double>(g.m()));
    CHECK(f.values.col(kOutweightR).sum() == static_cast<double>(g.m()));
    CHECK((f.values.array() >= 0.0).all());
    CHECK(f.values.allFinite());
    for (int v = 0; v < g.n(); ++v) {
        CHECK(f.values(v, kIndegree) <= f.values(v, kInweightR));
        CHECK(f.values(v, kOutdegree) <= f.values(v, kOutweightR));
        CHECK(f.values(v, kIatMin) <= f.values(v, kIatMedian));
        CHECK(f.values(v, kIatMedian) <= f.values(v, kIatMax));
        CHECK(f.values(v, kIatVar) >= 0.0);
        const std::size_t incident = g.in_edges(v).size() + g.out_edges(v).size();
        if (incident >= 2) CHECK(f.values(v, kLifetime) >= f.values(v, kIatMax));
    }
}

TEST_CASE("edge order permutation leaves the matrix unchanged") {
    std::vector<RawRow> rows = random_rows(800, 80, 555);
    TGraph g1 = parse(to_text(rows));
    FeatureMatrix f1 = extract_features(g1);

    SplitMix64 rng(99);
    for (std::size_t i = rows.size(); i > 1; --i)
        std::swap(rows[i - 1], rows[rng.next_below(i)]);
    TGraph g2 = parse(to_text(rows));
    FeatureMatrix f2 = extract_features(g2);

    REQUIRE(g1.n() == g2.n());
    for (int v = 0; v < g1.n(); ++v) {
        const int w = g2.index_of(g1.node_id(v));
        REQUIRE(w >= 0);
        for (int c = 0; c < kFeatureCount; ++c) CHECK(f1.values(v, c) == f2.values(w, c));
    }
}

TEST_CASE("feature names and order are fixed") {
    const auto& names = FeatureMatrix::feature_names();
    REQUIRE(names.size() == 12);
    CHECK(names[kIndegree] == "indegree");
    CHECK(names[kOutdegree] == "outdegree");
    CHECK(names[kInweightV] == "inweight_v");
    CHECK(names[kOutweightV] == "outweight_v");
    CHECK(names[kInweightR] == "inweight_r");
    CHECK(names[kOutweightR] == "outweight_r");
    CHECK(names[kIatAvg] == "iat_avg");
    CHECK(names[kIatVar] == "iat_var");
    CHECK(names[kIatMin] == "iat_min");
    CHECK(names[kIatMedian] == "iat_median");
    CHECK(names[kIatMax] == "iat_max");
    CHECK(names[kLifetime] == "lifetime");
}

TEST_CASE("scaling modes") {
    Eigen::MatrixXd values(2, 2);
    values << 0.0, 1.0, std::exp(1.0) - 1.0, 9.0;
    Eigen::MatrixXd logged = apply_scaling(values, ScalingMode::log1p);
    CHECK(logged(0, 0) == 0.0);
    CHECK(logged(0, 1) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
    CHECK(logged(1, 0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK((apply_scaling(values, ScalingMode::none) - values).cwiseAbs().maxCoeff() == 0.0);
    CHECK(to_string(ScalingMode::log1p) == "log1p");
    CHECK(to_string(ScalingMode::none) == "none");
}

} // TEST_SUITE
