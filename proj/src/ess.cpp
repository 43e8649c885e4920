#include "hscrf/ess.hpp"

#include <cmath>

#include "hscrf/inference.hpp"

namespace hscrf {

namespace {

double inside_top_mass(const MassLattice& m) {
    if (!m.inside_filled() || !m.outside_filled()) throw HscrfError("MassesMissing");
    double z = 0.0;
    for (State s = 1; s <= m.top_states(); ++s) z += m.delta_hat(1, s, 1, m.length());
    if (z <= 0.0) throw NumericError("zero partition mass in ESS");
    return z;
}

void accumulate(ESSVector& out, const SparseVec& f, double weight) {
    for (const auto& [id, v] : f) out[static_cast<size_t>(id)] += weight * v;
}

}  // namespace

void ess_persist(const MassLattice& m, const PotentialLattice& pot, const FeatureModel& model,
                 const ObservationSequence& obs, ESSVector& out) {
    (void)pot;  // R is already folded into delta-hat
    const double z = inside_top_mass(m);
    const Time T = m.length();
    const int D = m.depth();
    SparseVec f;
    for (Level d = 1; d <= D; ++d) {
        for (State s = 1; s <= m.states_at(d); ++s) {
            const Time i_hi = (d == 1) ? 1 : T;
            for (Time i = 1; i <= i_hi; ++i) {
                const Time j_lo = (d == 1) ? T : i;
                const Time j_hi = (d == D) ? i : T;
                for (Time j = j_lo; j <= j_hi; ++j) {
                    const double w = m.delta_hat(d, s, i, j) * m.lambda(d, s, i, j) / z;
                    if (w == 0.0) continue;
                    f.clear();
                    model.persist_features(s, d, i, j, obs, f);
                    accumulate(out, f, w);
                }
            }
        }
    }
}

void ess_transit(const MassLattice& m, const PotentialLattice& pot, const FeatureModel& model,
                 const ObservationSequence& obs, ESSVector& out) {
    const double z = inside_top_mass(m);
    const Time T = m.length();
    const int D = m.depth();
    const Topology& topo = pot.topology();
    SparseVec f;
    for (Level dc = 2; dc <= D; ++dc) {
        const Level dp = dc - 1;
        for (State s = 1; s <= m.states_at(dp); ++s) {
            for (State u : topo.children(dp, s)) {
                for (State v : topo.children(dp, s)) {
                    for (Time t = 1; t <= T - 1; ++t) {
                        const double a = pot.A(dc, s, u, v, t);
                        if (a == 0.0) continue;
                        double mass = 0.0;
                        const Time i_hi = (dp == 1) ? 1 : t;
                        for (Time i = 1; i <= i_hi; ++i) {
                            const double au = m.alpha(dp, s, i, t, u);
                            if (au == 0.0) continue;
                            const Time j_lo = t + 1, j_hi = (dc == D) ? t + 1 : T;
                            double inner = 0.0;
                            for (Time j = j_lo; j <= j_hi; ++j)
                                inner += m.lambda_asym(dp, s, i, j, v) *
                                         m.delta_hat(dc, v, t + 1, j);
                            mass += au * inner;
                        }
                        const double w = a * mass / z;
                        if (w == 0.0) continue;
                        f.clear();
                        model.transit_features(dc, s, u, v, t, obs, f);
                        accumulate(out, f, w);
                    }
                }
            }
        }
    }
}

void ess_init(const MassLattice& m, const PotentialLattice& pot, const FeatureModel& model,
              const ObservationSequence& obs, ESSVector& out) {
    const double z = inside_top_mass(m);
    const Time T = m.length();
    const int D = m.depth();
    const Topology& topo = pot.topology();
    SparseVec f;
    for (Level d = 1; d <= D - 1; ++d) {
        for (State s = 1; s <= m.states_at(d); ++s) {
            for (State u : topo.children(d, s)) {
                const Time i_hi = (d == 1) ? 1 : T;
                for (Time i = 1; i <= i_hi; ++i) {
                    const double pi = pot.Pi(d, s, u, i);
                    if (pi == 0.0) continue;
                    const Time j_hi = (d == D - 1) ? i : T;
                    double mass = 0.0;
                    for (Time j = i; j <= j_hi; ++j)
                        mass += m.lambda_asym(d, s, i, j, u) * m.delta_hat(d + 1, u, i, j);
                    const double w = pi * mass / z;
                    if (w == 0.0) continue;
                    f.clear();
                    model.init_features(d, s, u, i, obs, f);
                    accumulate(out, f, w);
                }
            }
        }
    }
}

void ess_end(const MassLattice& m, const PotentialLattice& pot, const FeatureModel& model,
             const ObservationSequence& obs, ESSVector& out) {
    const double z = inside_top_mass(m);
    const Time T = m.length();
    const int D = m.depth();
    const Topology& topo = pot.topology();
    SparseVec f;
    for (Level d = 1; d <= D - 1; ++d) {
        for (State s = 1; s <= m.states_at(d); ++s) {
            for (State u : topo.children(d, s)) {
                const Time j_lo = (d == 1) ? T : 1;
                for (Time j = j_lo; j <= T; ++j) {
                    const double e = pot.E(d, s, u, j);
                    if (e == 0.0) continue;
                    double mass = 0.0;
                    const Time i_lo = (d == 1) ? 1 : 1;
                    const Time i_hi = (d == 1) ? 1 : j;
                    for (Time i = i_lo; i <= i_hi; ++i)
                        mass += m.lambda_hat(d, s, i, j) * m.alpha(d, s, i, j, u);
                    const double w = e * mass / z;
                    if (w == 0.0) continue;
                    f.clear();
                    model.end_features(d, s, u, j, obs, f);
                    accumulate(out, f, w);
                }
            }
        }
    }
}

ESSVector ess_all(const MassLattice& m, const PotentialLattice& pot, const FeatureModel& model,
                  const ObservationSequence& obs) {
    ESSVector out(model.index().size(), 0.0);
    ess_persist(m, pot, model, obs, out);
    ess_transit(m, pot, model, obs, out);
    ess_init(m, pot, model, obs, out);
    ess_end(m, pot, model, obs, out);
    return out;
}

}  // namespace hscrf
