#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace lookout {

/// Recipe for a synthetic t-graph: a skewed-degree background stream plus
/// planted outliers. Burst nodes fire many same-timestamp edges at a handful
/// of targets (extreme out-edge count); fanout nodes spray edges across many
/// distinct targets over time (extreme out-degree).
struct SyntheticSpec {
    int nodes = 1000;       // background node pool, ids v0..v{nodes-1}
    long long edges = 10000; // exact total edge count
    int burst_nodes = 0;    // planted ids p0..  (burst first, then fanout)
    int fanout_nodes = 0;
    std::uint64_t seed = 42;
    char delimiter = ',';
};

struct SyntheticResult {
    std::vector<std::string> burst;
    std::vector<std::string> fanout;

    std::vector<std::string> planted() const;
};

/// Write spec.edges edge rows to out; returns the planted node ids.
SyntheticResult generate_synthetic(std::ostream& out, const SyntheticSpec& spec);

} // namespace lookout
