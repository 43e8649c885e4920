#ifndef HSCRF_TOPOLOGY_HPP
#define HSCRF_TOPOLOGY_HPP

#include <vector>

#include "hscrf/types.hpp"

namespace hscrf {

// Full assignment of state variables and ending indicators.
// x[d-1][t-1] is the state at level d, time t; e[d-1][t-1] the ending indicator.
struct Configuration {
    std::vector<std::vector<State>> x;
    std::vector<std::vector<int>> e;

    int depth() const { return static_cast<int>(x.size()); }
    Time length() const { return x.empty() ? 0 : static_cast<Time>(x[0].size()); }
};

// State hierarchy: depth, per-level alphabet sizes and the parent->children
// relation. Children may be shared between parents. Immutable after
// construction; pa() is derived from ch() once.
class Topology {
public:
    // children[d-1][s-1] lists ch(s) for s at level d, for d in [1, D-1].
    Topology(std::vector<int> sizes, std::vector<std::vector<std::vector<State>>> children);

    int depth() const { return depth_; }
    int num_states(Level d) const { return sizes_[d - 1]; }
    const std::vector<State>& children(Level d, State s) const {
        return children_[d - 1][s - 1];
    }
    const std::vector<State>& parents(Level d_child, State u) const {
        return parents_[d_child - 2][u - 1];
    }
    bool is_child(Level d_parent, State s, State u) const {
        return child_mask_[d_parent - 1][(s - 1) * sizes_[d_parent] + (u - 1)] != 0;
    }
    int max_states() const;

    // Checks all Topology invariants; throws TopologyError naming the first
    // violated one (EmptyChildSet / OrphanState / BadBounds).
    void validate() const;

    // True iff config satisfies every hierarchical constraint, every child
    // assignment respects ch(), and states are constant within segments.
    // Throws DimensionMismatch when shapes disagree. O(D*T).
    bool is_legal_configuration(const Configuration& config) const;

private:
    int depth_;
    std::vector<int> sizes_;
    std::vector<std::vector<std::vector<State>>> children_;
    std::vector<std::vector<std::vector<State>>> parents_;  // indexed by child level - 2
    std::vector<std::vector<char>> child_mask_;             // per parent level, s-major
};

// Convenience: a topology where every parent owns the full next-level alphabet.
Topology make_full_topology(const std::vector<int>& sizes);

}  // namespace hscrf

#endif
