#include "lookout/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <unordered_set>

#include "lookout/errors.hpp"
#include "lookout/prng.hpp"

namespace lookout {

std::vector<std::string> SyntheticResult::planted() const {
    std::vector<std::string> all = burst;
    all.insert(all.end(), fanout.begin(), fanout.end());
    return all;
}

namespace {

int skewed_index(SplitMix64& rng, int n) {
    const double u = rng.next_double();
    int idx = static_cast<int>(static_cast<double>(n) * std::pow(u, 1.2));
    return std::min(idx, n - 1);
}

void emit(std::ostream& out, char d, const std::string& src, const std::string& dst,
          long long ts, std::uint64_t value) {
    out << src << d << dst << d << ts << d << value << '\n';
}

} // namespace

SyntheticResult generate_synthetic(std::ostream& out, const SyntheticSpec& spec) {
    if (spec.nodes < 2) throw UsageError("synthetic: need at least 2 nodes");
    if (spec.edges < spec.nodes) throw UsageError("synthetic: need edges >= nodes");
    if (spec.burst_nodes < 0 || spec.fanout_nodes < 0)
        throw UsageError("synthetic: planted counts must be non-negative");

    const long long planted_total = spec.burst_nodes + spec.fanout_nodes;
    long long per = 0;
    if (planted_total > 0) {
        per = std::max<long long>(64, 16 * spec.edges / spec.nodes);
        per = std::min(per, spec.edges / (2 * planted_total));
        per = std::max<long long>(per, 1);
        if (per * planted_total > spec.edges)
            throw UsageError("synthetic: not enough edges for planted anomalies");
    }
    const long long background = spec.edges - per * planted_total;
    const long long ts_max = 2 * spec.edges;

    std::vector<std::string> ids(static_cast<std::size_t>(spec.nodes));
    for (int i = 0; i < spec.nodes; ++i) ids[static_cast<std::size_t>(i)] = "v" + std::to_string(i);

    SplitMix64 rng(spec.seed);
    const char d = spec.delimiter;

    for (long long e = 0; e < background; ++e) {
        const std::string& src = ids[static_cast<std::size_t>(skewed_index(rng, spec.nodes))];
        const std::string& dst = ids[static_cast<std::size_t>(skewed_index(rng, spec.nodes))];
        emit(out, d, src, dst, static_cast<long long>(rng.next_below(
                                   static_cast<std::uint64_t>(ts_max) + 1)),
             1 + rng.next_below(9));
    }

    SyntheticResult result;
    int planted_idx = 0;

    // Burst: `per` edges at one shared timestamp toward a couple of targets,
    // so the out-edge count towers over the background.
    for (int b = 0; b < spec.burst_nodes; ++b, ++planted_idx) {
        const std::string id = "p" + std::to_string(planted_idx);
        result.burst.push_back(id);
        const long long t0 =
            static_cast<long long>(rng.next_below(static_cast<std::uint64_t>(ts_max) + 1));
        const int want = std::min(3, spec.nodes);
        std::vector<int> targets;
        while (static_cast<int>(targets.size()) < want) {
            const int t = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(spec.nodes)));
            if (std::find(targets.begin(), targets.end(), t) == targets.end()) targets.push_back(t);
        }
        for (long long e = 0; e < per; ++e) {
            emit(out, d, id, ids[static_cast<std::size_t>(targets[e % want])], t0,
                 1 + rng.next_below(9));
        }
    }

    // Fanout: `per` edges to mostly distinct targets across the whole window,
    // so the distinct out-degree towers over the background.
    for (int f = 0; f < spec.fanout_nodes; ++f, ++planted_idx) {
        const std::string id = "p" + std::to_string(planted_idx);
        result.fanout.push_back(id);
        std::unordered_set<int> seen;
        for (long long e = 0; e < per; ++e) {
            int t = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(spec.nodes)));
            if (static_cast<long long>(seen.size()) < spec.nodes) {
                int tries = 0;
                while (seen.count(t) && tries < 64) {
                    t = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(spec.nodes)));
                    ++tries;
                }
                seen.insert(t);
            }
            emit(out, d, id, ids[static_cast<std::size_t>(t)],
                 static_cast<long long>(rng.next_below(static_cast<std::uint64_t>(ts_max) + 1)),
                 1 + rng.next_below(9));
        }
    }

    return result;
}

} // namespace lookout
