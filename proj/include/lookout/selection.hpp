#pragma once

#include <cstdint>
#include <vector>

#include "lookout/scoring.hpp"

namespace lookout {

/// Result of plot selection: plots in the order they were accepted, the
/// objective value they achieve, and for each selected plot the anomalies
/// (row indices into the ScoreMatrix) whose best score it provides. Owner
/// lists are disjoint and together cover every anomaly.
struct PlotSelection {
    std::vector<PairPlotId> selected;
    std::vector<std::vector<int>> owners; // aligned with selected
    double objective = 0.0;
    int budget = 0;
};

/// Total maximum score credited to the anomalies by plot set S:
/// sum over anomalies of max over j in S of scores(i, j). Empty S gives 0.
double objective(const ScoreMatrix& scores, const std::vector<int>& S);

/// Objective increase from adding plot p to S: sum over anomalies of
/// max(0, scores(i, p) - best_i) with best_i the running max over S
/// (0 when S is empty). p must not already be in S.
double marginal_gain(const ScoreMatrix& scores, int p, const std::vector<int>& S);

/// Budgeted plot selection by lazy greedy. A max-priority queue holds stale
/// marginal gains; the popped plot's gain is recomputed against the current
/// selection and accepted only if it still ranks at or above the new queue
/// top, otherwise reinserted with the refreshed gain. Gains tie toward the
/// lower plot index, which makes the outcome identical to plain greedy.
/// Selection stops at min(budget, plot count); owner tie-breaks draw from a
/// generator derived from tie_seed.
PlotSelection greedy_select(const ScoreMatrix& scores, int budget, std::uint64_t tie_seed = 0);

/// Assigns every anomaly to the plot in S (given in selection order) holding
/// its maximum score. Exact score ties are broken by a seeded draw that
/// depends only on (seed, anomaly row), so assignments are reproducible.
/// Returns owner lists aligned with S.
std::vector<std::vector<int>> partition_owners(const ScoreMatrix& scores,
                                               const std::vector<int>& S,
                                               std::uint64_t seed);

} // namespace lookout
