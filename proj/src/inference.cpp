#include "hscrf/inference.hpp"

#include <cmath>
#include <limits>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace hscrf {

namespace {

bool use_scaling(const InferenceOptions& opts, Time T) {
    switch (opts.numerics) {
        case NumericsMode::Exact: return false;
        case NumericsMode::Scaled: return true;
        default: return T > 64;
    }
}

struct Indicators {
    const PartialLabels* labels;
    bool inside_ok(Level d, State s, Time i, Time j) const {
        return labels == nullptr || labels->inside_ok(d, s, i, j);
    }
    bool alpha_ok(Level d, State s, Time i, Time j, State u) const {
        return labels == nullptr || labels->alpha_ok(d, s, i, j, u);
    }
};

// One alpha entry: the full recursion for a fixed (d, s, i, j, u).
// Reads alpha at earlier end columns through the final-scale accessor and
// delta-hat at end column j through the raw (partially scaled) one, so the
// result lands at the partial scale of column j.
double alpha_entry(const PotentialLattice& pot, const Topology& topo, const MassLattice& m,
                   Level d, State s, Time i, Time j, State u, int D) {
    if (i == j) return m.delta_hat_raw(d + 1, u, i, i) * pot.Pi(d, s, u, i);
    const auto& ch = topo.children(d, s);
    double acc = 0.0;
    if (d == D - 1) {
        const double dh = m.delta_hat_raw(D, u, j, j);
        if (dh != 0.0) {
            double sum = 0.0;
            for (State v : ch) sum += m.alpha(d, s, i, j - 1, v) * pot.A(D, s, v, u, j - 1);
            acc = sum * dh;
        }
    } else {
        for (Time t = i + 1; t <= j; ++t) {
            const double dh = m.delta_hat_raw(d + 1, u, t, j);
            if (dh == 0.0) continue;
            double sum = 0.0;
            for (State v : ch) sum += m.alpha(d, s, i, t - 1, v) * pot.A(d + 1, s, v, u, t - 1);
            acc += sum * dh;
        }
        acc += m.delta_hat_raw(d + 1, u, i, j) * pot.Pi(d, s, u, i);
    }
    return acc;
}

// Fill all alpha / delta-hat entries ending at column j for level d.
void fill_inside_column_level(const PotentialLattice& pot, const Topology& topo, MassLattice& m,
                              const Indicators& ind, Level d, Time j, int D, bool parallel) {
    const int ns = topo.num_states(d);
    const int n_i = (d == 1) ? 1 : j;
    const long total = static_cast<long>(ns) * n_i;
    const bool go_parallel = parallel && total * j >= 2048;

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 4) if (go_parallel)
#endif
    for (long p = 0; p < total; ++p) {
        const State s = static_cast<State>(p / n_i) + 1;
        const Time i = static_cast<Time>(p % n_i) + 1;
        for (State u : topo.children(d, s)) {
            double a = 0.0;
            if (ind.alpha_ok(d, s, i, j, u)) a = alpha_entry(pot, topo, m, d, s, i, j, u, D);
            m.alpha_raw(d, s, i, j, u) = a;
        }
        const bool want_delta = (d >= 2) || (d == 1 && j == m.length());
        if (want_delta) {
            double delta = 0.0;
            if (ind.inside_ok(d, s, i, j)) {
                for (State u : topo.children(d, s))
                    delta += pot.E(d, s, u, j) * m.alpha_raw(d, s, i, j, u);
            }
            m.delta_hat_raw(d, s, i, j) = pot.R(d, s, i, j) * delta;
        }
    }
    (void)go_parallel;
}

}  // namespace

MassLattice compute_inside(const PotentialLattice& lattice, const Topology& topology,
                           const InferenceOptions& opts) {
    const Time T = lattice.length();
    const int D = topology.depth();
    const bool scaled = use_scaling(opts, T);
    if (opts.labels != nullptr) opts.labels->validate(topology);
    const Indicators ind{opts.labels};

    MassLattice m(topology, T);
    Time first_zero_column = 0;
    for (Time j = 1; j <= T; ++j) {
        // Bottom level, partially scaled: exact value is just R (Delta = 1).
        for (State s = 1; s <= topology.num_states(D); ++s)
            m.delta_hat_raw(D, s, j, j) = ind.inside_ok(D, s, j, j) ? lattice.R(D, s, j, j) : 0.0;
        for (Level d = D - 1; d >= 1; --d)
            fill_inside_column_level(lattice, topology, m, ind, d, j, D, opts.parallel);
        if (scaled) {
            double kappa = 0.0;
            for (State s = 1; s <= topology.num_states(1); ++s)
                for (State u : topology.children(1, s)) kappa += m.alpha_raw(1, s, 1, j, u);
            if (kappa > 0.0) {
                m.scale().set(j, kappa);
            } else if (opts.labels != nullptr) {
                // Labels can legitimately empty the level-1 column (e.g. a
                // forbidden level-2 boundary at j); skip rescaling there.
                if (first_zero_column == 0) first_zero_column = j;
                m.scale().set(j, 1.0);
            } else {
                throw NumericError("zero level-1 column at j=" + std::to_string(j) +
                                   " without constraints");
            }
        }
    }
    m.mark_inside_filled();
    if (scaled) {
        double root = 0.0;
        for (State s = 1; s <= topology.num_states(1); ++s) root += m.delta_hat(1, s, 1, T);
        if (root == 0.0)
            throw ZeroColumnError(
                "no consistent mass survives the labels (first empty column j=" +
                std::to_string(first_zero_column) + ")");
    }
    return m;
}

namespace {

// One asymmetric-outside entry at (d, s, i, j, u); everything is read and
// written at its final scale.
double lambda_entry(const PotentialLattice& pot, const Topology& topo, const MassLattice& m,
                    Level d, State s, Time i, Time j, State u, int D, Time T) {
    const auto& ch = topo.children(d, s);
    double acc = 0.0;
    if (j < T) {
        if (d == D - 1) {
            double sum = 0.0;
            for (State v : ch) {
                const double dh = m.delta_hat(D, v, j + 1, j + 1);
                if (dh == 0.0) continue;
                sum += m.lambda_asym(d, s, i, j + 1, v) * dh * pot.A(D, s, u, v, j);
            }
            acc = sum;
        } else {
            for (State v : ch) {
                double sum = 0.0;
                for (Time t = j + 1; t <= T; ++t) {
                    const double dh = m.delta_hat(d + 1, v, j + 1, t);
                    if (dh == 0.0) continue;
                    sum += m.lambda_asym(d, s, i, t, v) * dh;
                }
                acc += sum * pot.A(d + 1, s, u, v, j);
            }
        }
    }
    if (d >= 2 || (i == 1 && j == T)) acc += m.lambda_hat(d, s, i, j) * pot.E(d, s, u, j);
    return acc;
}

void fill_lambda_level(const PotentialLattice& pot, const Topology& topo, MassLattice& m,
                       const Indicators& ind, Level d, int D, Time T, bool parallel) {
    for (Time j = T; j >= 1; --j) {
        const int ns = topo.num_states(d);
        const int n_i = (d == 1) ? 1 : j;
        const long total = static_cast<long>(ns) * n_i;
        const bool go_parallel = parallel && total * (T - j + 1) >= 2048;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 4) if (go_parallel)
#endif
        for (long p = 0; p < total; ++p) {
            const State s = static_cast<State>(p / n_i) + 1;
            const Time i = static_cast<Time>(p % n_i) + 1;
            for (State u : topo.children(d, s)) {
                double v = 0.0;
                if (ind.alpha_ok(d, s, i, j, u))
                    v = lambda_entry(pot, topo, m, d, s, i, j, u, D, T);
                m.lambda_asym_ref(d, s, i, j, u) = v;
            }
        }
        (void)go_parallel;
    }
}

void fill_big_lambda_level(const PotentialLattice& pot, const Topology& topo, MassLattice& m,
                           const Indicators& ind, Level d_child, int D, Time T, bool parallel) {
    const Level d = d_child - 1;  // parent level feeding this one
    const int nu = topo.num_states(d_child);
    const long total = static_cast<long>(nu) * T;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 2) if (parallel && total >= 8)
#endif
    for (long p = 0; p < total; ++p) {
        const State u = static_cast<State>(p / T) + 1;
        const Time i = static_cast<Time>(p % T) + 1;
        const auto& parents = topo.parents(d_child, u);

        // w[s](t) = sum_v alpha^{d,s}_{t:i-1}(v) A^{d_child,s}_{v,u,i-1},
        // shared across every end index j of the child segment.
        std::vector<std::vector<double>> w(parents.size());
        if (i > 1) {
            for (size_t si = 0; si < parents.size(); ++si) {
                const State s = parents[si];
                const Time t_max = (d == 1) ? 1 : static_cast<Time>(i - 1);
                w[si].assign(t_max + 1, 0.0);
                for (Time t = 1; t <= t_max; ++t) {
                    double sum = 0.0;
                    for (State v : topo.children(d, s))
                        sum += m.alpha(d, s, t, i - 1, v) * pot.A(d_child, s, v, u, i - 1);
                    w[si][t] = sum;
                }
            }
        }
        const Time j_lo = i, j_hi = (d_child == D) ? i : T;
        for (Time j = j_lo; j <= j_hi; ++j) {
            double acc = 0.0;
            if (ind.inside_ok(d_child, u, i, j)) {
                for (size_t si = 0; si < parents.size(); ++si) {
                    const State s = parents[si];
                    if (i > 1) {
                        const Time t_max = (d == 1) ? 1 : static_cast<Time>(i - 1);
                        for (Time t = 1; t <= t_max; ++t)
                            if (w[si][t] != 0.0) acc += m.lambda_asym(d, s, t, j, u) * w[si][t];
                    }
                    if (d >= 2 || i == 1)
                        acc += m.lambda_asym(d, s, i, j, u) * pot.Pi(d, s, u, i);
                }
            }
            m.lambda_ref(d_child, u, i, j) = acc;
            m.lambda_hat_ref(d_child, u, i, j) = pot.R(d_child, u, i, j) * acc;
        }
    }
}

}  // namespace

void compute_outside(const PotentialLattice& lattice, const Topology& topology,
                     MassLattice& masses, const InferenceOptions& opts) {
    if (!masses.inside_filled()) throw HscrfError("InsideNotComputed");
    const Time T = masses.length();
    const int D = topology.depth();
    if (opts.labels != nullptr) opts.labels->validate(topology);
    const Indicators ind{opts.labels};

    for (State s = 1; s <= topology.num_states(1); ++s) {
        const double base = ind.inside_ok(1, s, 1, T) ? 1.0 : 0.0;
        masses.lambda_ref(1, s, 1, T) = base;
        masses.lambda_hat_ref(1, s, 1, T) = lattice.R(1, s, 1, T) * base;
    }
    for (Level d = 1; d <= D - 1; ++d) {
        fill_lambda_level(lattice, topology, masses, ind, d, D, T, opts.parallel);
        fill_big_lambda_level(lattice, topology, masses, ind, d + 1, D, T, opts.parallel);
    }
    masses.mark_outside_filled();
}

InferenceResult compute_aio(const PotentialLattice& lattice, const Topology& topology,
                            const InferenceOptions& opts) {
    MassLattice m = compute_inside(lattice, topology, opts);
    compute_outside(lattice, topology, m, opts);
    const double log_Z = log_partition(m);
    return InferenceResult{std::move(m), log_Z};
}

double log_partition(const MassLattice& masses) {
    return log_partition_route(masses, ZRoute::InsideTop);
}

double log_partition_route(const MassLattice& masses, ZRoute route, int a, int b) {
    if (!masses.inside_filled()) throw HscrfError("MassesMissing");
    const Time T = masses.length();
    const int D = masses.depth();
    const auto& scale = masses.scale();
    switch (route) {
        case ZRoute::InsideTop: {
            double z = 0.0;
            for (State s = 1; s <= masses.top_states(); ++s) z += masses.delta_hat(1, s, 1, T);
            return std::log(z) + scale.log_total();
        }
        case ZRoute::OutsideBottom: {
            if (!masses.outside_filled()) throw HscrfError("MassesMissing");
            const Time i = a;
            if (i < 1 || i > T) throw DataError("OutsideBottom index out of range");
            double z = 0.0;
            for (State s = 1; s <= masses.bottom_states(); ++s) z += masses.lambda_hat(D, s, i, i);
            const double log_kappa_i = scale.log_prefix[i] - scale.log_prefix[i - 1];
            return std::log(z) + scale.log_total() - log_kappa_i;
        }
        case ZRoute::General: {
            if (!masses.outside_filled()) throw HscrfError("MassesMissing");
            const Level d = a;
            const Time t = b;
            if (d < 2 || d > D - 1) throw DataError("General route level must be in [2, D-1]");
            if (t < 1 || t > T) throw DataError("General route time out of range");
            double z = 0.0;
            for (State s = 1; s <= masses.states_at(d); ++s)
                for (Time i = 1; i <= t; ++i)
                    for (Time j = t; j <= T; ++j)
                        z += masses.delta_hat(d, s, i, j) * masses.lambda(d, s, i, j);
            return std::log(z) + scale.log_total();
        }
    }
    throw HscrfError("unreachable");
}

double partition_function(const MassLattice& masses, ZRoute route, int a, int b) {
    return std::exp(log_partition_route(masses, route, a, b));
}

std::vector<double> state_marginal(const MassLattice& masses, Level d, Time t) {
    if (!masses.inside_filled() || !masses.outside_filled()) throw HscrfError("MassesMissing");
    const Time T = masses.length();
    const int D = masses.depth();
    double z = 0.0;
    for (State s = 1; s <= masses.top_states(); ++s) z += masses.delta_hat(1, s, 1, T);

    const int ns = masses.states_at(d);
    std::vector<double> out(ns, 0.0);
    if (d == 1) {
        for (State s = 1; s <= ns; ++s) out[s - 1] = masses.delta_hat(1, s, 1, T) / z;
    } else if (d == D) {
        const double inv_k = masses.scale().inv_kappa[t - 1];
        for (State s = 1; s <= ns; ++s) out[s - 1] = masses.lambda_hat(D, s, t, t) * inv_k / z;
    } else {
        for (State s = 1; s <= ns; ++s) {
            double acc = 0.0;
            for (Time i = 1; i <= t; ++i)
                for (Time j = t; j <= T; ++j)
                    acc += masses.delta_hat(d, s, i, j) * masses.lambda(d, s, i, j);
            out[s - 1] = acc / z;
        }
    }
    return out;
}

MassLattice scaled_inside(const PotentialLattice& lattice, const Topology& topology,
                          const PartialLabels* labels, bool parallel) {
    InferenceOptions opts;
    opts.numerics = NumericsMode::Scaled;
    opts.labels = labels;
    opts.parallel = parallel;
    return compute_inside(lattice, topology, opts);
}

void scaled_outside(const PotentialLattice& lattice, const Topology& topology, MassLattice& masses,
                    const PartialLabels* labels, bool parallel) {
    InferenceOptions opts;
    opts.numerics = NumericsMode::Scaled;
    opts.labels = labels;
    opts.parallel = parallel;
    compute_outside(lattice, topology, masses, opts);
}

}  // namespace hscrf
