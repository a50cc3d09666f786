#pragma once

#include <iosfwd>
#include <vector>

#include "lookout/selection.hpp"

namespace lookout {

/// Explanation quality at one budget: incrimination is the average maximum
/// blame per anomaly, f(S)/k; ideal is the ceiling f(P)/k reached by
/// selecting every plot.
struct IncriminationReport {
    int budget = 0;
    double objective = 0.0;
    double incrimination = 0.0;
    double ideal = 0.0;
};

/// Average maximum blame of set S, objective(S) / k.
double incrimination(const ScoreMatrix& scores, const std::vector<int>& S);

IncriminationReport incrimination_report(const ScoreMatrix& scores, const PlotSelection& selection);

/// Baseline that ignores diminishing returns: ranks plots by plain column
/// sum (ties toward the lower index) and takes the top b. Objective is still
/// evaluated with the max-per-anomaly rule.
PlotSelection naive_select(const ScoreMatrix& scores, int budget);

/// Greedy incrimination at every budget 1..max_budget (clamped to the plot
/// count), plus the shared ideal value. One row per budget.
std::vector<IncriminationReport> budget_sweep(const ScoreMatrix& scores, int max_budget);

/// Budget-sweep table as delimiter-separated text with a header row:
/// budget, objective, incrimination, ideal.
void write_budget_sweep(std::ostream& out, const std::vector<IncriminationReport>& rows,
                        char delimiter = ',');

} // namespace lookout
