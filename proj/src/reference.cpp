#include "hscrf/inference.hpp"

namespace hscrf {
namespace reference {

namespace {
bool iok(const PartialLabels* lab, Level d, State s, Time i, Time j) {
    return lab == nullptr || lab->inside_ok(d, s, i, j);
}
bool aok(const PartialLabels* lab, Level d, State s, Time i, Time j, State u) {
    return lab == nullptr || lab->alpha_ok(d, s, i, j, u);
}
}  // namespace

MassLattice compute_inside(const PotentialLattice& pot, const Topology& topo,
                           const PartialLabels* labels) {
    const Time T = pot.length();
    const int D = topo.depth();
    if (labels != nullptr) labels->validate(topo);
    MassLattice m(topo, T);

    for (Time i = 1; i <= T; ++i)
        for (State s = 1; s <= topo.num_states(D); ++s)
            m.delta_hat_raw(D, s, i, i) = iok(labels, D, s, i, i) ? pot.R(D, s, i, i) : 0.0;

    for (Level d = D - 1; d >= 1; --d) {
        const Time i_max = (d == 1) ? 1 : T;
        for (Time i = 1; i <= i_max; ++i) {
            for (Time j = i; j <= T; ++j) {
                for (State s = 1; s <= topo.num_states(d); ++s) {
                    for (State u : topo.children(d, s)) {
                        double a = 0.0;
                        if (aok(labels, d, s, i, j, u)) {
                            if (i == j) {
                                a = m.delta_hat_raw(d + 1, u, i, i) * pot.Pi(d, s, u, i);
                            } else if (d == D - 1) {
                                double sum = 0.0;
                                for (State v : topo.children(d, s))
                                    sum += m.alpha_raw(d, s, i, j - 1, v) *
                                           pot.A(D, s, v, u, j - 1);
                                a = sum * m.delta_hat_raw(D, u, j, j);
                            } else {
                                for (Time t = i + 1; t <= j; ++t) {
                                    double sum = 0.0;
                                    for (State v : topo.children(d, s))
                                        sum += m.alpha_raw(d, s, i, t - 1, v) *
                                               pot.A(d + 1, s, v, u, t - 1);
                                    a += sum * m.delta_hat_raw(d + 1, u, t, j);
                                }
                                a += m.delta_hat_raw(d + 1, u, i, j) * pot.Pi(d, s, u, i);
                            }
                        }
                        m.alpha_raw(d, s, i, j, u) = a;
                    }
                    if (d >= 2 || (i == 1 && j == T)) {
                        double delta = 0.0;
                        if (iok(labels, d, s, i, j)) {
                            for (State u : topo.children(d, s))
                                delta += pot.E(d, s, u, j) * m.alpha_raw(d, s, i, j, u);
                        }
                        m.delta_hat_raw(d, s, i, j) = pot.R(d, s, i, j) * delta;
                    }
                }
            }
        }
    }
    m.mark_inside_filled();
    return m;
}

void compute_outside(const PotentialLattice& pot, const Topology& topo, MassLattice& m,
                     const PartialLabels* labels) {
    if (!m.inside_filled()) throw HscrfError("InsideNotComputed");
    const Time T = m.length();
    const int D = topo.depth();
    if (labels != nullptr) labels->validate(topo);

    for (State s = 1; s <= topo.num_states(1); ++s) {
        const double base = iok(labels, 1, s, 1, T) ? 1.0 : 0.0;
        m.lambda_ref(1, s, 1, T) = base;
        m.lambda_hat_ref(1, s, 1, T) = pot.R(1, s, 1, T) * base;
    }

    for (Level d = 1; d <= D - 1; ++d) {
        const Time i_max = (d == 1) ? 1 : T;
        for (Time i = 1; i <= i_max; ++i) {
            for (Time j = T; j >= i; --j) {
                for (State s = 1; s <= topo.num_states(d); ++s) {
                    for (State u : topo.children(d, s)) {
                        double acc = 0.0;
                        if (aok(labels, d, s, i, j, u)) {
                            if (j < T) {
                                if (d == D - 1) {
                                    for (State v : topo.children(d, s))
                                        acc += m.lambda_asym(d, s, i, j + 1, v) *
                                               m.delta_hat_raw(D, v, j + 1, j + 1) *
                                               pot.A(D, s, u, v, j);
                                } else {
                                    for (State v : topo.children(d, s))
                                        for (Time t = j + 1; t <= T; ++t)
                                            acc += m.lambda_asym(d, s, i, t, v) *
                                                   m.delta_hat_raw(d + 1, v, j + 1, t) *
                                                   pot.A(d + 1, s, u, v, j);
                                }
                            }
                            if (d >= 2 || (i == 1 && j == T))
                                acc += m.lambda_hat(d, s, i, j) * pot.E(d, s, u, j);
                        }
                        m.lambda_asym_ref(d, s, i, j, u) = acc;
                    }
                }
            }
        }
        // Level d+1 symmetric outside from the freshly filled level-d family.
        const Level dc = d + 1;
        for (State u = 1; u <= topo.num_states(dc); ++u) {
            for (Time i = 1; i <= T; ++i) {
                const Time j_hi = (dc == D) ? i : T;
                for (Time j = i; j <= j_hi; ++j) {
                    double acc = 0.0;
                    if (iok(labels, dc, u, i, j)) {
                        for (State s : topo.parents(dc, u)) {
                            if (i > 1) {
                                const Time t_max = (d == 1) ? 1 : static_cast<Time>(i - 1);
                                for (Time t = 1; t <= t_max; ++t) {
                                    double sum = 0.0;
                                    for (State v : topo.children(d, s))
                                        sum += m.alpha_raw(d, s, t, i - 1, v) *
                                               pot.A(dc, s, v, u, i - 1);
                                    acc += m.lambda_asym(d, s, t, j, u) * sum;
                                }
                            }
                            if (d >= 2 || i == 1)
                                acc += m.lambda_asym(d, s, i, j, u) * pot.Pi(d, s, u, i);
                        }
                    }
                    m.lambda_ref(dc, u, i, j) = acc;
                    m.lambda_hat_ref(dc, u, i, j) = pot.R(dc, u, i, j) * acc;
                }
            }
        }
    }
    m.mark_outside_filled();
}

}  // namespace reference
}  // namespace hscrf
