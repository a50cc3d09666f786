#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <sstream>
#include <vector>

#include "lookout/metrics.hpp"
#include "lookout/prng.hpp"

using namespace lookout;

namespace {

ScoreMatrix make_matrix(const Eigen::MatrixXd& values) {
    ScoreMatrix m;
    m.scores = values;
    m.anomaly_order.resize(static_cast<std::size_t>(values.rows()));
    std::iota(m.anomaly_order.begin(), m.anomaly_order.end(), 0);
    for (int j = 0; j < values.cols(); ++j) m.plot_order.push_back(PairPlotId{j, 0, j + 1});
    return m;
}

Eigen::MatrixXd random_matrix(int k, int l, SplitMix64& rng) {
    Eigen::MatrixXd values(k, l);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < l; ++j) values(i, j) = rng.next_double();
    return values;
}

// Instance family where column sums mislead: two copies of a strong column
// plus a column that uniquely covers the remaining anomalies.
Eigen::MatrixXd dominant_duplicate_instance(int k, SplitMix64& rng) {
    Eigen::MatrixXd values = random_matrix(k, 4, rng) * 0.3;
    for (int i = 0; i < k; ++i) {
        const bool covered = i < k / 2;
        values(i, 0) = covered ? 0.9 : 0.05;
        values(i, 1) = values(i, 0);
        values(i, 2) = covered ? 0.1 : 0.85;
    }
    return values;
}

} // namespace

TEST_SUITE("metrics") {

TEST_CASE("incrimination is objective per anomaly") {
    SplitMix64 rng(77);
    ScoreMatrix m = make_matrix(random_matrix(6, 5, rng));

    CHECK(incrimination(m, {}) == 0.0);

    std::vector<int> all(5);
    std::iota(all.begin(), all.end(), 0);
    const double ideal = objective(m, all) / 6.0;

    for (int trial = 0; trial < 30; ++trial) {
        std::vector<int> S;
        for (int j = 0; j < 5; ++j)
            if (rng.next_below(2) == 0) S.push_back(j);
        CHECK(incrimination(m, S) == doctest::Approx(objective(m, S) / 6.0).epsilon(1e-12));
        CHECK(incrimination(m, S) <= ideal + 1e-12);
    }

    PlotSelection sel = greedy_select(m, 3);
    IncriminationReport report = incrimination_report(m, sel);
    CHECK(report.budget == 3);
    CHECK(report.objective == sel.objective);
    CHECK(report.incrimination == doctest::Approx(sel.objective / 6.0).epsilon(1e-12));
    CHECK(report.ideal == doctest::Approx(ideal).epsilon(1e-12));
}

TEST_CASE("naive baseline matches greedy at budget one") {
    SplitMix64 rng(501);
    for (int trial = 0; trial < 50; ++trial) {
        ScoreMatrix m = make_matrix(random_matrix(5, 6, rng));
        PlotSelection greedy = greedy_select(m, 1);
        PlotSelection naive = naive_select(m, 1);
        CHECK(naive.selected.size() == 1);
        CHECK(naive.selected[0].index == greedy.selected[0].index);
        CHECK(naive.objective == greedy.objective);
    }
}

TEST_CASE("duplicate dominant column trips the naive baseline") {
    Eigen::MatrixXd values(2, 3);
    values << 0.9, 0.9, 0.95,
              0.9, 0.9, 0.2;
    ScoreMatrix m = make_matrix(values);

    PlotSelection naive = naive_select(m, 2);
    // Column sums are 1.8, 1.8, 1.15: the naive pick takes both copies.
    CHECK(naive.selected[0].index == 0);
    CHECK(naive.selected[1].index == 1);
    CHECK(naive.objective == doctest::Approx(1.8).epsilon(1e-12));

    PlotSelection greedy = greedy_select(m, 2);
    CHECK(greedy.objective == doctest::Approx(1.85).epsilon(1e-12));
    CHECK(greedy.objective > naive.objective);
}

TEST_CASE("greedy never loses to the naive baseline") {
    SplitMix64 rng(606);
    int strict = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const int k = 4 + static_cast<int>(rng.next_below(5));
        ScoreMatrix m = make_matrix(dominant_duplicate_instance(k, rng));
        for (int b = 1; b <= 4; ++b) {
            PlotSelection greedy = greedy_select(m, b);
            PlotSelection naive = naive_select(m, b);
            CHECK(greedy.objective >= naive.objective - 1e-12);
            if (greedy.objective > naive.objective + 1e-9) ++strict;
        }
    }
    CHECK(strict > 0);
}

TEST_CASE("budget sweep walks greedy prefixes") {
    SplitMix64 rng(8181);
    ScoreMatrix m = make_matrix(random_matrix(7, 6, rng));

    auto rows = budget_sweep(m, 10); // clamps to 6 columns
    REQUIRE(rows.size() == 6);

    double last = 0.0;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const int b = static_cast<int>(r) + 1;
        CHECK(rows[r].budget == b);
        PlotSelection direct = greedy_select(m, b);
        CHECK(rows[r].objective == direct.objective);
        CHECK(rows[r].incrimination >= last);
        last = rows[r].incrimination;
        CHECK(rows[r].ideal == rows[0].ideal);
        CHECK(rows[r].incrimination >= 0.0);
        CHECK(rows[r].incrimination <= rows[r].ideal + 1e-12);
        CHECK(rows[r].ideal <= 1.0 + 1e-12);
    }
    // Full budget reaches the ceiling exactly.
    CHECK(rows.back().incrimination == rows.back().ideal);
}

TEST_CASE("budget sweep table format") {
    std::vector<IncriminationReport> rows = {
        {1, 1.5, 0.5, 0.75},
        {2, 2.25, 0.75, 0.75},
    };
    std::ostringstream out;
    write_budget_sweep(out, rows);
    CHECK(out.str() == "budget,objective,incrimination,ideal\n"
                       "1,1.5,0.5,0.75\n"
                       "2,2.25,0.75,0.75\n");

    std::ostringstream tabbed;
    write_budget_sweep(tabbed, rows, '\t');
    CHECK(tabbed.str().find("budget\tobjective") == 0);
}

} // TEST_SUITE
