#include "hscrf/viterbi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hscrf {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

Configuration SegmentTree::to_configuration() const {
    Configuration c;
    c.x.assign(depth, std::vector<State>(length, 0));
    c.e.assign(depth, std::vector<int>(length, 0));
    for (Level d = 1; d <= depth; ++d) {
        for (const Segment& seg : levels[d - 1]) {
            for (Time t = seg.i; t <= seg.j; ++t) {
                c.x[d - 1][t - 1] = seg.s;
                c.e[d - 1][t - 1] = (t == seg.j) ? 1 : 0;
            }
        }
    }
    return c;
}

BookKeeper::BookKeeper(const Topology& topology, Time T) : T_(T) {
    const int D = topology.depth();
    sym_.resize(D);
    child_width_.assign(D, 0);
    for (Level d = 1; d <= D; ++d) {
        sym_[d - 1].T = T;
        sym_[d - 1].shape = (d == 1)   ? LevelIndex::Shape::FirstRow
                            : (d == D) ? LevelIndex::Shape::Diagonal
                                       : LevelIndex::Shape::Triangular;
        if (d < D) child_width_[d - 1] = static_cast<size_t>(topology.num_states(d + 1));
    }
    log_dh_.resize(D);
    log_alpha_.resize(D);
    delta_arg_.resize(D);
    alpha_arg_.resize(D);
    for (Level d = 1; d <= D; ++d) {
        const size_t n = static_cast<size_t>(topology.num_states(d)) * sym_[d - 1].count();
        log_dh_[d - 1].assign(n, kNegInf);
        delta_arg_[d - 1].assign(n, 0);
        if (d < D) {
            log_alpha_[d - 1].assign(n * child_width_[d - 1], kNegInf);
            alpha_arg_[d - 1].assign(n * child_width_[d - 1], ArgVT{});
        }
    }
}

namespace {

struct VitIndicators {
    const PartialLabels* labels;
    bool inside_ok(Level d, State s, Time i, Time j) const {
        return labels == nullptr || labels->inside_ok(d, s, i, j);
    }
    bool alpha_ok(Level d, State s, Time i, Time j, State u) const {
        return labels == nullptr || labels->alpha_ok(d, s, i, j, u);
    }
};

// log alpha-max and its bookkeeper for one (d, s, i, j, u).
void alpha_max_entry(const PotentialLattice& pot, const Topology& topo, BookKeeper& bk,
                     Level d, State s, Time i, Time j, State u, int D) {
    double best;
    BookKeeper::ArgVT arg;
    if (i == j) {
        best = bk.log_delta_hat_max(d + 1, u, i, i) + pot.logPi(d, s, u, i);
    } else if (d == D - 1) {
        best = kNegInf;
        for (State v : topo.children(d, s)) {
            const double cand = bk.log_alpha_max(d, s, i, j - 1, v) +
                                bk.log_delta_hat_max(D, u, j, j) + pot.logA(D, s, v, u, j - 1);
            if (cand > best) {
                best = cand;
                arg = {v, j, true};
            }
        }
    } else {
        // Initialisation branch first; the transition branch must beat it
        // strictly for the bookkeeper to be defined.
        const double init = bk.log_delta_hat_max(d + 1, u, i, j) + pot.logPi(d, s, u, i);
        double trans = kNegInf;
        BookKeeper::ArgVT targ;
        for (State v : topo.children(d, s)) {
            for (Time t = i + 1; t <= j; ++t) {
                const double cand = bk.log_alpha_max(d, s, i, t - 1, v) +
                                    bk.log_delta_hat_max(d + 1, u, t, j) +
                                    pot.logA(d + 1, s, v, u, t - 1);
                if (cand > trans) {
                    trans = cand;
                    targ = {v, t, true};
                }
            }
        }
        if (trans > init) {
            best = trans;
            arg = targ;
        } else {
            best = init;
        }
    }
    bk.log_alpha_max(d, s, i, j, u) = best;
    if (d < D) bk.alpha_arg(d, s, i, j, u) = arg;
}

}  // namespace

std::pair<double, BookKeeper> viterbi_forward(const PotentialLattice& lattice,
                                              const Topology& topology,
                                              const PartialLabels* labels, bool parallel) {
    const Time T = lattice.length();
    const int D = topology.depth();
    if (labels != nullptr) labels->validate(topology);
    const VitIndicators ind{labels};
    BookKeeper bk(topology, T);

    for (Time i = 1; i <= T; ++i)
        for (State s = 1; s <= topology.num_states(D); ++s)
            bk.log_delta_hat_max(D, s, i, i) =
                ind.inside_ok(D, s, i, i) ? lattice.logR(D, s, i, i) : kNegInf;

    for (Level d = D - 1; d >= 1; --d) {
        for (Time j = 1; j <= T; ++j) {
            const int ns = topology.num_states(d);
            const int n_i = (d == 1) ? 1 : j;
            const long total = static_cast<long>(ns) * n_i;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 4) if (parallel && total* j >= 2048)
#endif
            for (long p = 0; p < total; ++p) {
                const State s = static_cast<State>(p / n_i) + 1;
                const Time i = static_cast<Time>(p % n_i) + 1;
                for (State u : topology.children(d, s)) {
                    if (!ind.alpha_ok(d, s, i, j, u)) {
                        bk.log_alpha_max(d, s, i, j, u) = kNegInf;
                        bk.alpha_arg(d, s, i, j, u) = BookKeeper::ArgVT{};
                        continue;
                    }
                    alpha_max_entry(lattice, topology, bk, d, s, i, j, u, D);
                }
                if (d >= 2 || (d == 1 && j == T)) {
                    double best = kNegInf;
                    State arg = 0;
                    if (ind.inside_ok(d, s, i, j)) {
                        for (State u : topology.children(d, s)) {
                            const double cand =
                                lattice.logE(d, s, u, j) + bk.log_alpha_max(d, s, i, j, u);
                            if (cand > best) {
                                best = cand;
                                arg = u;
                            }
                        }
                    }
                    bk.log_delta_hat_max(d, s, i, j) = lattice.logR(d, s, i, j) + best;
                    bk.delta_arg(d, s, i, j) = arg;
                }
            }
        }
    }

    double best = kNegInf;
    for (State s = 1; s <= topology.num_states(1); ++s)
        best = std::max(best, bk.log_delta_hat_max(1, s, 1, T));
    return {best, std::move(bk)};
}

SegmentTree backtrack(const BookKeeper& book, const Topology& topology) {
    const Time T = book.length();
    const int D = topology.depth();
    SegmentTree tree;
    tree.depth = D;
    tree.length = T;
    tree.levels.resize(D);

    double best = kNegInf;
    State root = 0;
    for (State s = 1; s <= topology.num_states(1); ++s) {
        const double cand = book.log_delta_hat_max(1, s, 1, T);
        if (cand > best) {
            best = cand;
            root = s;
        }
    }
    if (root == 0 || best == kNegInf)
        throw NoConsistentConfiguration("no configuration survives the constraints");
    tree.levels[0].push_back({root, 1, T});

    for (Level d = 1; d <= D - 1; ++d) {
        for (const Segment& seg : tree.levels[d - 1]) {
            State u = book.delta_arg(d, seg.s, seg.i, seg.j);
            if (u == 0) throw HscrfError("CorruptBookkeeper: missing delta argument");
            Time j = seg.j;
            while (true) {
                const auto& arg = book.alpha_arg(d, seg.s, seg.i, j, u);
                if (arg.defined) {
                    tree.levels[d].push_back({u, arg.t, j});
                    if (arg.t <= seg.i || arg.t > j)
                        throw HscrfError("CorruptBookkeeper: bad transition time");
                    j = arg.t - 1;
                    u = arg.v;
                } else {
                    tree.levels[d].push_back({u, seg.i, j});
                    break;
                }
            }
        }
    }
    for (auto& level : tree.levels)
        std::sort(level.begin(), level.end(),
                  [](const Segment& a, const Segment& b) { return a.i < b.i; });
    return tree;
}

SegmentTree viterbi_decode(const PotentialLattice& lattice, const Topology& topology,
                           const PartialLabels* labels, bool parallel) {
    auto [best, book] = viterbi_forward(lattice, topology, labels, parallel);
    if (best == kNegInf)
        throw NoConsistentConfiguration("no configuration survives the constraints");
    return backtrack(book, topology);
}

}  // namespace hscrf
