#include "lookout/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <ostream>

#include "lookout/errors.hpp"

namespace lookout {

double incrimination(const ScoreMatrix& scores, const std::vector<int>& S) {
    if (scores.k() == 0) return 0.0;
    return objective(scores, S) / static_cast<double>(scores.k());
}

IncriminationReport incrimination_report(const ScoreMatrix& scores, const PlotSelection& selection) {
    IncriminationReport report;
    report.budget = selection.budget;
    report.objective = selection.objective;
    const double k = static_cast<double>(scores.k());
    report.incrimination = k > 0 ? selection.objective / k : 0.0;
    std::vector<int> all(static_cast<std::size_t>(scores.l()));
    std::iota(all.begin(), all.end(), 0);
    report.ideal = k > 0 ? objective(scores, all) / k : 0.0;
    return report;
}

PlotSelection naive_select(const ScoreMatrix& scores, int budget) {
    if (budget < 1) throw UsageError("budget must be at least 1");
    const int l = scores.l();
    std::vector<int> order(static_cast<std::size_t>(l));
    std::iota(order.begin(), order.end(), 0);
    Eigen::VectorXd sums = scores.scores.colwise().sum();
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (sums[a] != sums[b]) return sums[a] > sums[b];
        return a < b;
    });

    const int take = std::min(budget, l);
    std::vector<int> chosen(order.begin(), order.begin() + take);

    PlotSelection result;
    result.budget = budget;
    result.objective = objective(scores, chosen);
    result.selected.reserve(chosen.size());
    for (int p : chosen) result.selected.push_back(scores.plot_order[static_cast<std::size_t>(p)]);
    result.owners = partition_owners(scores, chosen, 0);
    return result;
}

std::vector<IncriminationReport> budget_sweep(const ScoreMatrix& scores, int max_budget) {
    if (max_budget < 1) throw UsageError("budget must be at least 1");
    const int top = std::min(max_budget, scores.l());
    PlotSelection full = greedy_select(scores, top);

    // Greedy selections nest, so prefixes of one full run give every budget.
    std::vector<int> prefix;
    prefix.reserve(full.selected.size());
    std::vector<IncriminationReport> rows;
    rows.reserve(full.selected.size());
    const double k = static_cast<double>(scores.k());
    std::vector<int> all(static_cast<std::size_t>(scores.l()));
    std::iota(all.begin(), all.end(), 0);
    const double ideal = k > 0 ? objective(scores, all) / k : 0.0;

    for (const PairPlotId& plot : full.selected) {
        auto slot = std::find(scores.plot_order.begin(), scores.plot_order.end(), plot);
        prefix.push_back(static_cast<int>(slot - scores.plot_order.begin()));
        IncriminationReport row;
        row.budget = static_cast<int>(prefix.size());
        row.objective = objective(scores, prefix);
        row.incrimination = k > 0 ? row.objective / k : 0.0;
        row.ideal = ideal;
        rows.push_back(row);
    }
    return rows;
}

void write_budget_sweep(std::ostream& out, const std::vector<IncriminationReport>& rows,
                        char delimiter) {
    out << "budget" << delimiter << "objective" << delimiter << "incrimination" << delimiter
        << "ideal" << '\n';
    char buf[128];
    for (const IncriminationReport& row : rows) {
        std::snprintf(buf, sizeof(buf), "%d%c%.9g%c%.9g%c%.9g", row.budget, delimiter,
                      row.objective, delimiter, row.incrimination, delimiter, row.ideal);
        out << buf << '\n';
    }
}

} // namespace lookout
