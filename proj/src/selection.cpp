#include "lookout/selection.hpp"

#include <algorithm>
#include <queue>

#include "lookout/prng.hpp"

namespace lookout {

namespace {

void check_plot_index(const ScoreMatrix& scores, int p) {
    if (p < 0 || p >= scores.l())
        throw UsageError("plot index " + std::to_string(p) + " out of range for " +
                         std::to_string(scores.l()) + " plots");
}

// Gains and objectives reduce with one sequential scalar loop: Eigen's
// vectorized sums round differently depending on column alignment, which
// would let the same quantity compare unequal to itself across call sites.
double gain_against(const ScoreMatrix& scores, int p, const Eigen::VectorXd& best) {
    const Eigen::MatrixXd& s = scores.scores;
    double total = 0.0;
    for (int i = 0; i < s.rows(); ++i) {
        const double lift = s(i, p) - best[i];
        if (lift > 0.0) total += lift;
    }
    return total;
}

double sequential_sum(const Eigen::VectorXd& v) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) total += v[i];
    return total;
}

struct QueueEntry {
    double gain;
    int plot;
};

// Max-queue order: larger gain first, ties toward the lower plot index.
struct QueueOrder {
    bool operator()(const QueueEntry& a, const QueueEntry& b) const {
        if (a.gain != b.gain) return a.gain < b.gain;
        return a.plot > b.plot;
    }
};

// True when (gain, plot) ranks at or above the queue head under QueueOrder.
bool ranks_top(const QueueEntry& refreshed, const QueueEntry& head) {
    if (refreshed.gain != head.gain) return refreshed.gain > head.gain;
    return refreshed.plot < head.plot;
}

} // namespace

double objective(const ScoreMatrix& scores, const std::vector<int>& S) {
    if (S.empty()) return 0.0;
    Eigen::VectorXd best = Eigen::VectorXd::Zero(scores.k());
    for (const int p : S) {
        check_plot_index(scores, p);
        best = best.cwiseMax(scores.scores.col(p));
    }
    return sequential_sum(best);
}

double marginal_gain(const ScoreMatrix& scores, int p, const std::vector<int>& S) {
    check_plot_index(scores, p);
    if (std::find(S.begin(), S.end(), p) != S.end())
        throw UsageError("plot " + std::to_string(p) + " already selected");
    Eigen::VectorXd best = Eigen::VectorXd::Zero(scores.k());
    for (const int q : S) {
        check_plot_index(scores, q);
        best = best.cwiseMax(scores.scores.col(q));
    }
    return gain_against(scores, p, best);
}

PlotSelection greedy_select(const ScoreMatrix& scores, int budget, std::uint64_t tie_seed) {
    if (budget < 1) throw UsageError("budget must be >= 1, got " + std::to_string(budget));
    const int l = scores.l();
    const int take = std::min(budget, l);

    Eigen::VectorXd best = Eigen::VectorXd::Zero(scores.k());
    std::priority_queue<QueueEntry, std::vector<QueueEntry>, QueueOrder> queue;
    for (int p = 0; p < l; ++p)
        queue.push(QueueEntry{gain_against(scores, p, best), p});
    std::vector<int> chosen;
    chosen.reserve(static_cast<std::size_t>(take));

    while (static_cast<int>(chosen.size()) < take) {
        QueueEntry top = queue.top();
        queue.pop();
        top.gain = gain_against(scores, top.plot, best);
        if (queue.empty() || ranks_top(top, queue.top())) {
            chosen.push_back(top.plot);
            best = best.cwiseMax(scores.scores.col(top.plot));
        } else {
            queue.push(top);
        }
    }

    PlotSelection result;
    result.budget = budget;
    result.objective = sequential_sum(best);
    result.selected.reserve(chosen.size());
    for (const int p : chosen) result.selected.push_back(scores.plot_order[static_cast<std::size_t>(p)]);
    result.owners = partition_owners(scores, chosen, tie_seed);
    return result;
}

std::vector<std::vector<int>> partition_owners(const ScoreMatrix& scores,
                                               const std::vector<int>& S,
                                               std::uint64_t seed) {
    if (S.empty()) throw UsageError("owner partition needs a nonempty plot set");
    for (const int p : S) check_plot_index(scores, p);

    std::vector<std::vector<int>> owners(S.size());
    // Tied plots are considered in ascending plot index so the draw does not
    // depend on selection order.
    std::vector<int> by_index(S.size());
    for (std::size_t s = 0; s < S.size(); ++s) by_index[s] = static_cast<int>(s);
    std::sort(by_index.begin(), by_index.end(),
              [&](int a, int b) { return S[static_cast<std::size_t>(a)] < S[static_cast<std::size_t>(b)]; });

    for (int i = 0; i < scores.k(); ++i) {
        double max_score = scores.scores(i, S[0]);
        for (const int p : S) max_score = std::max(max_score, scores.scores(i, p));

        std::vector<int> tied; // slots into S, ascending plot index
        for (const int slot : by_index)
            if (scores.scores(i, S[static_cast<std::size_t>(slot)]) == max_score)
                tied.push_back(slot);

        int winner = tied.front();
        if (tied.size() > 1) {
            SplitMix64 rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
            winner = tied[static_cast<std::size_t>(rng.next_below(tied.size()))];
        }
        owners[static_cast<std::size_t>(winner)].push_back(i);
    }
    return owners;
}

} // namespace lookout
