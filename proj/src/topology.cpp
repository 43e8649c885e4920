#include "hscrf/topology.hpp"

#include <algorithm>
#include <string>

namespace hscrf {

Topology::Topology(std::vector<int> sizes,
                   std::vector<std::vector<std::vector<State>>> children)
    : depth_(static_cast<int>(sizes.size())),
      sizes_(std::move(sizes)),
      children_(std::move(children)) {
    if (depth_ < 2) throw TopologyError("topology depth must be >= 2");
    if (static_cast<int>(children_.size()) != depth_ - 1)
        throw TopologyError("children must cover levels 1..D-1");
    for (Level d = 1; d < depth_; ++d) {
        if (static_cast<int>(children_[d - 1].size()) != sizes_[d - 1])
            throw TopologyError("children list size mismatch at level " + std::to_string(d));
    }
    validate();

    // Derive pa() and the membership mask from ch().
    parents_.resize(depth_ - 1);
    child_mask_.resize(depth_ - 1);
    for (Level d = 1; d < depth_; ++d) {
        parents_[d - 1].assign(sizes_[d], {});
        child_mask_[d - 1].assign(static_cast<size_t>(sizes_[d - 1]) * sizes_[d], 0);
        for (State s = 1; s <= sizes_[d - 1]; ++s) {
            for (State u : children_[d - 1][s - 1]) {
                parents_[d - 1][u - 1].push_back(s);
                child_mask_[d - 1][(s - 1) * sizes_[d] + (u - 1)] = 1;
            }
        }
    }
}

int Topology::max_states() const {
    return *std::max_element(sizes_.begin(), sizes_.end());
}

void Topology::validate() const {
    for (Level d = 1; d <= depth_; ++d) {
        if (sizes_[d - 1] < 1)
            throw TopologyError("BadBounds: level " + std::to_string(d) + " has empty alphabet");
    }
    std::vector<std::vector<char>> covered(depth_ - 1);
    for (Level d = 1; d < depth_; ++d) covered[d - 1].assign(sizes_[d], 0);
    for (Level d = 1; d < depth_; ++d) {
        for (State s = 1; s <= sizes_[d - 1]; ++s) {
            const auto& ch = children_[d - 1][s - 1];
            if (ch.empty())
                throw TopologyError("EmptyChildSet: level " + std::to_string(d) + " state " +
                                    std::to_string(s));
            for (State u : ch) {
                if (u < 1 || u > sizes_[d])
                    throw TopologyError("BadBounds: level " + std::to_string(d) + " state " +
                                        std::to_string(s) + " child " + std::to_string(u));
                covered[d - 1][u - 1] = 1;
            }
        }
    }
    for (Level d = 2; d <= depth_; ++d) {
        for (State u = 1; u <= sizes_[d - 1]; ++u) {
            if (!covered[d - 2][u - 1])
                throw TopologyError("OrphanState: level " + std::to_string(d) + " state " +
                                    std::to_string(u) + " has no parent");
        }
    }
}

bool Topology::is_legal_configuration(const Configuration& config) const {
    const int D = depth_;
    if (config.depth() != D || static_cast<int>(config.e.size()) != D)
        throw DimensionMismatch("configuration depth mismatch");
    const Time T = config.length();
    if (T < 1) throw DimensionMismatch("empty configuration");
    for (Level d = 1; d <= D; ++d) {
        if (static_cast<Time>(config.x[d - 1].size()) != T ||
            static_cast<Time>(config.e[d - 1].size()) != T)
            throw DimensionMismatch("configuration length mismatch at level " + std::to_string(d));
    }

    auto x = [&](Level d, Time t) { return config.x[d - 1][t - 1]; };
    auto e = [&](Level d, Time t) { return config.e[d - 1][t - 1]; };

    for (Level d = 1; d <= D; ++d)
        for (Time t = 1; t <= T; ++t)
            if (x(d, t) < 1 || x(d, t) > sizes_[d - 1] || (e(d, t) != 0 && e(d, t) != 1))
                return false;

    for (Time t = 1; t <= T; ++t) {
        if (t < T && e(1, t) != 0) return false;   // top persists
        if (e(D, t) != 1) return false;            // bottom never persists
        if (t == T && e(1, t) != 1) return false;  // everything ends at T
        for (Level d = 1; d < D; ++d) {
            if (e(d, t) == 1 && e(d + 1, t) != 1) return false;  // descendants finish too
        }
    }
    // States constant within segments, and child membership at every step.
    for (Level d = 1; d <= D; ++d) {
        for (Time t = 1; t < T; ++t)
            if (e(d, t) == 0 && x(d, t) != x(d, t + 1)) return false;
    }
    for (Level d = 1; d < D; ++d) {
        for (Time t = 1; t <= T; ++t)
            if (!is_child(d, x(d, t), x(d + 1, t))) return false;
    }
    return true;
}

Topology make_full_topology(const std::vector<int>& sizes) {
    std::vector<std::vector<std::vector<State>>> children(sizes.size() - 1);
    for (size_t d = 0; d + 1 < sizes.size(); ++d) {
        std::vector<State> all(sizes[d + 1]);
        for (int u = 0; u < sizes[d + 1]; ++u) all[u] = u + 1;
        children[d].assign(sizes[d], all);
    }
    return Topology(sizes, std::move(children));
}

}  // namespace hscrf
