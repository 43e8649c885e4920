#ifndef HSCRF_VITERBI_HPP
#define HSCRF_VITERBI_HPP

#include <utility>
#include <vector>

#include "hscrf/labels.hpp"
#include "hscrf/masses.hpp"
#include "hscrf/potentials.hpp"
#include "hscrf/topology.hpp"

namespace hscrf {

struct Segment {
    State s;
    Time i, j;
};

// Per-level sets of segments partitioning [1, T]; level d+1 segments nest
// exactly inside level d ones.
struct SegmentTree {
    int depth = 0;
    Time length = 0;
    std::vector<std::vector<Segment>> levels;  // ordered by start time

    Configuration to_configuration() const;
};

// Max-product bookkeepers. AlphaArg is defined exactly when the transition
// branch strictly beats the initialisation branch; the undefined state is an
// explicit flag, never a sentinel value.
class BookKeeper {
public:
    struct ArgVT {
        State v = 0;
        Time t = 0;
        bool defined = false;
    };

    BookKeeper(const Topology& topology, Time T);

    double& log_delta_hat_max(Level d, State s, Time i, Time j) {
        return log_dh_[d - 1][static_cast<size_t>(s - 1) * sym_[d - 1].count() +
                             sym_[d - 1].at(i, j)];
    }
    double log_delta_hat_max(Level d, State s, Time i, Time j) const {
        return log_dh_[d - 1][static_cast<size_t>(s - 1) * sym_[d - 1].count() +
                             sym_[d - 1].at(i, j)];
    }
    double& log_alpha_max(Level d, State s, Time i, Time j, State u) {
        return log_alpha_[d - 1][(static_cast<size_t>(s - 1) * sym_[d - 1].count() +
                                  sym_[d - 1].at(i, j)) *
                                     child_width_[d - 1] +
                                 (u - 1)];
    }
    double log_alpha_max(Level d, State s, Time i, Time j, State u) const {
        return log_alpha_[d - 1][(static_cast<size_t>(s - 1) * sym_[d - 1].count() +
                                  sym_[d - 1].at(i, j)) *
                                     child_width_[d - 1] +
                                 (u - 1)];
    }
    State& delta_arg(Level d, State s, Time i, Time j) {
        return delta_arg_[d - 1][static_cast<size_t>(s - 1) * sym_[d - 1].count() +
                                 sym_[d - 1].at(i, j)];
    }
    State delta_arg(Level d, State s, Time i, Time j) const {
        return delta_arg_[d - 1][static_cast<size_t>(s - 1) * sym_[d - 1].count() +
                                 sym_[d - 1].at(i, j)];
    }
    ArgVT& alpha_arg(Level d, State s, Time i, Time j, State u) {
        return alpha_arg_[d - 1][(static_cast<size_t>(s - 1) * sym_[d - 1].count() +
                                  sym_[d - 1].at(i, j)) *
                                     child_width_[d - 1] +
                                 (u - 1)];
    }
    const ArgVT& alpha_arg(Level d, State s, Time i, Time j, State u) const {
        return alpha_arg_[d - 1][(static_cast<size_t>(s - 1) * sym_[d - 1].count() +
                                  sym_[d - 1].at(i, j)) *
                                     child_width_[d - 1] +
                                 (u - 1)];
    }

    int depth() const { return static_cast<int>(sym_.size()); }
    Time length() const { return T_; }

private:
    Time T_;
    std::vector<LevelIndex> sym_;
    std::vector<size_t> child_width_;
    std::vector<std::vector<double>> log_dh_;
    std::vector<std::vector<double>> log_alpha_;
    std::vector<std::vector<State>> delta_arg_;
    std::vector<std::vector<ArgVT>> alpha_arg_;
};

// Max log Phi over legal configurations plus the filled bookkeepers.
// Log-space throughout; ties prefer smaller state index, then smaller start
// time. `labels` switches on the constrained variant.
std::pair<double, BookKeeper> viterbi_forward(const PotentialLattice& lattice,
                                              const Topology& topology,
                                              const PartialLabels* labels = nullptr,
                                              bool parallel = true);

// Top-down decoding of the bookkeepers into nested segments.
SegmentTree backtrack(const BookKeeper& book, const Topology& topology);

// viterbi_forward + backtrack. Throws NoConsistentConfiguration when the
// root mass is impossible (only under labels or degenerate potentials).
SegmentTree viterbi_decode(const PotentialLattice& lattice, const Topology& topology,
                           const PartialLabels* labels = nullptr, bool parallel = true);

}  // namespace hscrf

#endif
