#ifndef HSCRF_LABELS_HPP
#define HSCRF_LABELS_HPP

#include <vector>

#include "hscrf/topology.hpp"
#include "hscrf/types.hpp"

namespace hscrf {

// Sparse partial observations of states and ending indicators. Label sets
// that directly violate the hierarchical constraints are rejected eagerly by
// validate(); contradictions that only surface through the topology or the
// potentials are left to inference (zero constrained mass).
class PartialLabels {
public:
    PartialLabels(int depth, Time T);

    int depth() const { return depth_; }
    Time length() const { return T_; }

    void set_state(Level d, Time t, State s);
    void set_ending(Level d, Time t, int value);

    State labeled_state(Level d, Time t) const { return x_[d - 1][t - 1]; }  // 0 = unlabeled
    int labeled_ending(Level d, Time t) const { return e_[d - 1][t - 1]; }   // -1 = unlabeled
    bool empty() const { return num_labels_ == 0; }
    int num_labels() const { return num_labels_; }

    void validate(const Topology& topology) const;

    // I[Delta^{d,s}_{i:j}]: all four consistency conditions. O(1) after the
    // first call (prefix tables built lazily).
    bool inside_ok(Level d, State s, Time i, Time j) const;
    // I[alpha^{d,s}_{i:j}(u)]: first three inside conditions plus the child
    // conditions at j. No condition on e^d_j.
    bool alpha_ok(Level d, State s, Time i, Time j, State u) const;

    // Restriction of labels to a single level, viewed as flat SemiCRF labels.
    // Positions keep their e/x labels at that level only.
    PartialLabels level_view(Level d) const;

private:
    void build_tables() const;

    int depth_;
    Time T_;
    int num_labels_ = 0;
    std::vector<std::vector<State>> x_;  // 0 = unlabeled
    std::vector<std::vector<int>> e_;    // -1 = unlabeled

    mutable bool tables_built_ = false;
    mutable std::vector<std::vector<int>> cnt_x_;    // [d][t]: labeled states up to t
    mutable std::vector<std::vector<int>> cnt_e1_;   // [d][t]: labeled e==1 up to t
    mutable std::vector<std::vector<std::vector<int>>> match_x_;  // [d][s][t]
};

}  // namespace hscrf

#endif
