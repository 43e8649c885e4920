#include "hscrf/labels.hpp"

#include <string>

namespace hscrf {

PartialLabels::PartialLabels(int depth, Time T) : depth_(depth), T_(T) {
    if (depth < 2 || T < 1) throw DataError("bad label container dimensions");
    x_.assign(depth, std::vector<State>(T, 0));
    e_.assign(depth, std::vector<int>(T, -1));
}

void PartialLabels::set_state(Level d, Time t, State s) {
    if (d < 1 || d > depth_ || t < 1 || t > T_)
        throw InconsistentLabels("state label out of range at (d=" + std::to_string(d) +
                                 ", t=" + std::to_string(t) + ")");
    if (x_[d - 1][t - 1] == 0) ++num_labels_;
    x_[d - 1][t - 1] = s;
    tables_built_ = false;
}

void PartialLabels::set_ending(Level d, Time t, int value) {
    if (d < 1 || d > depth_ || t < 1 || t > T_ || (value != 0 && value != 1))
        throw InconsistentLabels("ending label out of range at (d=" + std::to_string(d) +
                                 ", t=" + std::to_string(t) + ")");
    if (e_[d - 1][t - 1] == -1) ++num_labels_;
    e_[d - 1][t - 1] = value;
    tables_built_ = false;
}

void PartialLabels::validate(const Topology& topology) const {
    if (topology.depth() != depth_) throw DimensionMismatch("label depth mismatch");
    for (Level d = 1; d <= depth_; ++d) {
        for (Time t = 1; t <= T_; ++t) {
            const State s = x_[d - 1][t - 1];
            if (s != 0 && (s < 1 || s > topology.num_states(d)))
                throw InconsistentLabels("state label out of alphabet at (d=" +
                                         std::to_string(d) + ", t=" + std::to_string(t) + ")");
            const int e = e_[d - 1][t - 1];
            if (e == -1) continue;
            if (d == 1 && t < T_ && e == 1)
                throw InconsistentLabels("top level cannot end before T (t=" +
                                         std::to_string(t) + ")");
            if (t == T_ && e == 0)
                throw InconsistentLabels("all states end at T (d=" + std::to_string(d) + ")");
            if (d == depth_ && e == 0)
                throw InconsistentLabels("bottom states always end (t=" + std::to_string(t) + ")");
        }
    }
    // e^d_t = 1 forces every deeper level to end at t.
    for (Time t = 1; t <= T_; ++t) {
        int shallowest_one = depth_ + 1, deepest_zero = 0;
        for (Level d = 1; d <= depth_; ++d) {
            if (e_[d - 1][t - 1] == 1 && d < shallowest_one) shallowest_one = d;
            if (e_[d - 1][t - 1] == 0 && d > deepest_zero) deepest_zero = d;
        }
        if (shallowest_one < deepest_zero)
            throw InconsistentLabels("ending labels at t=" + std::to_string(t) +
                                     " violate the nesting constraint");
    }
}

void PartialLabels::build_tables() const {
    if (tables_built_) return;
    cnt_x_.assign(depth_, std::vector<int>(T_ + 1, 0));
    cnt_e1_.assign(depth_, std::vector<int>(T_ + 1, 0));
    match_x_.assign(depth_, {});
    for (Level d = 1; d <= depth_; ++d) {
        int max_state = 0;
        for (Time t = 1; t <= T_; ++t) max_state = std::max(max_state, x_[d - 1][t - 1]);
        match_x_[d - 1].assign(max_state + 1, std::vector<int>(T_ + 1, 0));
        for (Time t = 1; t <= T_; ++t) {
            const State s = x_[d - 1][t - 1];
            cnt_x_[d - 1][t] = cnt_x_[d - 1][t - 1] + (s != 0);
            cnt_e1_[d - 1][t] = cnt_e1_[d - 1][t - 1] + (e_[d - 1][t - 1] == 1);
            for (State q = 1; q <= max_state; ++q)
                match_x_[d - 1][q][t] = match_x_[d - 1][q][t - 1] + (s == q);
        }
    }
    tables_built_ = true;
}

bool PartialLabels::inside_ok(Level d, State s, Time i, Time j) const {
    build_tables();
    const auto& cx = cnt_x_[d - 1];
    const int labeled = cx[j] - cx[i - 1];
    if (labeled > 0) {
        const auto& mx = match_x_[d - 1];
        const int matching =
            s < static_cast<State>(mx.size()) ? mx[s][j] - mx[s][i - 1] : 0;
        if (matching != labeled) return false;
    }
    if (i > 1 && e_[d - 1][i - 2] == 0) return false;
    if (j > i && cnt_e1_[d - 1][j - 1] - cnt_e1_[d - 1][i - 1] > 0) return false;
    if (e_[d - 1][j - 1] == 0) return false;
    return true;
}

bool PartialLabels::alpha_ok(Level d, State s, Time i, Time j, State u) const {
    build_tables();
    const auto& cx = cnt_x_[d - 1];
    const int labeled = cx[j] - cx[i - 1];
    if (labeled > 0) {
        const auto& mx = match_x_[d - 1];
        const int matching =
            s < static_cast<State>(mx.size()) ? mx[s][j] - mx[s][i - 1] : 0;
        if (matching != labeled) return false;
    }
    if (i > 1 && e_[d - 1][i - 2] == 0) return false;
    if (j > i && cnt_e1_[d - 1][j - 1] - cnt_e1_[d - 1][i - 1] > 0) return false;
    const State xl = x_[d][j - 1];
    if (xl != 0 && xl != u) return false;
    if (e_[d][j - 1] == 0) return false;
    return true;
}

PartialLabels PartialLabels::level_view(Level d) const {
    PartialLabels out(depth_, T_);
    for (Time t = 1; t <= T_; ++t) {
        if (x_[d - 1][t - 1] != 0) out.set_state(d, t, x_[d - 1][t - 1]);
        if (e_[d - 1][t - 1] != -1) out.set_ending(d, t, e_[d - 1][t - 1]);
    }
    return out;
}

}  // namespace hscrf
