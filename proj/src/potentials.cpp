#include "hscrf/potentials.hpp"

#include <cmath>
#include <random>

namespace hscrf {

PotentialLattice::PotentialLattice(const Topology& topology, Time T, Mode mode)
    : topology_(&topology), T_(T), mode_(mode) {
    if (T < 1) throw DataError("sequence length must be >= 1");
    if (mode_ != Mode::Table) return;
    const int D = topology.depth();
    r_.resize(D);
    for (Level d = 1; d <= D; ++d)
        r_[d - 1].assign(static_cast<size_t>(topology.num_states(d)) * T * (T + 1) / 2, 0.0);
    a_.resize(D - 1);
    pi_.resize(D - 1);
    e_.resize(D - 1);
    for (Level d = 1; d < D; ++d) {
        const size_t np = topology.num_states(d), nc = topology.num_states(d + 1);
        a_[d - 1].assign(np * nc * nc * static_cast<size_t>(T > 1 ? T - 1 : 0), 0.0);
        pi_[d - 1].assign(np * nc * static_cast<size_t>(T), 0.0);
        e_[d - 1].assign(np * nc * static_cast<size_t>(T), 0.0);
    }
}

PotentialLattice::PotentialLattice(const Topology& topology, Time T)
    : PotentialLattice(topology, T, Mode::Table) {
    const int D = topology.depth();
    for (Level d = 1; d <= D; ++d)
        for (State s = 1; s <= topology.num_states(d); ++s)
            for (Time i = 1; i <= T; ++i)
                for (Time j = i; j <= T; ++j) set_R(d, s, i, j, 1.0);
    for (Level d = 1; d < D; ++d) {
        for (State s = 1; s <= topology.num_states(d); ++s) {
            for (State u : topology.children(d, s)) {
                for (Time t = 1; t <= T; ++t) {
                    set_Pi(d, s, u, t, 1.0);
                    set_E(d, s, u, t, 1.0);
                }
                for (State v : topology.children(d, s))
                    for (Time t = 1; t < T; ++t) set_A(d + 1, s, u, v, t, 1.0);
            }
        }
    }
}

PotentialLattice PotentialLattice::build(const FeatureModel& model,
                                         const ObservationSequence& obs, BuildOptions options) {
    model.check_finite_weights();
    const Topology& topo = model.topology();
    const Time T = obs.length();
    bool table = options.storage == BuildOptions::Storage::Table ||
                 (options.storage == BuildOptions::Storage::Auto && T <= 512);
    if (!table) {
        PotentialLattice lat(topo, T, Mode::OnTheFly);
        lat.model_ = &model;
        lat.obs_ = &obs;
        lat.max_duration_ = options.max_duration;
        return lat;
    }
    PotentialLattice lat(topo, T, Mode::Table);
    lat.max_duration_ = options.max_duration;
    const int D = topo.depth();
    for (Level d = 1; d <= D; ++d) {
        for (State s = 1; s <= topo.num_states(d); ++s)
            for (Time i = 1; i <= T; ++i)
                for (Time j = i; j <= T; ++j) {
                    if (!lat.duration_ok(d, i, j)) continue;
                    lat.set_R(d, s, i, j, std::exp(model.persist_score(s, d, i, j, obs)));
                }
    }
    for (Level d = 1; d < D; ++d) {
        for (State s = 1; s <= topo.num_states(d); ++s) {
            for (State u : topo.children(d, s)) {
                for (Time t = 1; t <= T; ++t) {
                    lat.set_Pi(d, s, u, t, std::exp(model.init_score(d, s, u, t, obs)));
                    lat.set_E(d, s, u, t, std::exp(model.end_score(d, s, u, t, obs)));
                }
                for (State v : topo.children(d, s))
                    for (Time t = 1; t < T; ++t)
                        lat.set_A(d + 1, s, u, v, t,
                                  std::exp(model.transit_score(d + 1, s, u, v, t, obs)));
            }
        }
    }
    return lat;
}

bool PotentialLattice::duration_ok(Level d, Time i, Time j) const {
    if (max_duration_ <= 0) return true;
    if (d == 1 || d == topology_->depth()) return true;
    return j - i + 1 <= max_duration_;
}

double PotentialLattice::R(Level d, State s, Time i, Time j) const {
    if (!duration_ok(d, i, j)) return 0.0;
    if (mode_ == Mode::Table)
        return r_[d - 1][static_cast<size_t>(s - 1) * (static_cast<size_t>(T_) * (T_ + 1) / 2) +
                         tri(i, j)];
    return std::exp(model_->persist_score(s, d, i, j, *obs_));
}

double PotentialLattice::A(Level d_child, State s, State u, State v, Time t) const {
    if (!topology_->is_child(d_child - 1, s, u) || !topology_->is_child(d_child - 1, s, v))
        return 0.0;
    if (mode_ == Mode::Table) {
        const size_t nc = topology_->num_states(d_child);
        const size_t idx = ((static_cast<size_t>(s - 1) * nc + (u - 1)) * nc + (v - 1)) *
                               static_cast<size_t>(T_ - 1) +
                           (t - 1);
        return a_[d_child - 2][idx];
    }
    return std::exp(model_->transit_score(d_child, s, u, v, t, *obs_));
}

double PotentialLattice::Pi(Level d, State s, State u, Time t) const {
    if (!topology_->is_child(d, s, u)) return 0.0;
    if (mode_ == Mode::Table) {
        const size_t nc = topology_->num_states(d + 1);
        return pi_[d - 1][(static_cast<size_t>(s - 1) * nc + (u - 1)) * T_ + (t - 1)];
    }
    return std::exp(model_->init_score(d, s, u, t, *obs_));
}

double PotentialLattice::E(Level d, State s, State u, Time t) const {
    if (!topology_->is_child(d, s, u)) return 0.0;
    if (mode_ == Mode::Table) {
        const size_t nc = topology_->num_states(d + 1);
        return e_[d - 1][(static_cast<size_t>(s - 1) * nc + (u - 1)) * T_ + (t - 1)];
    }
    return std::exp(model_->end_score(d, s, u, t, *obs_));
}

double PotentialLattice::logR(Level d, State s, Time i, Time j) const {
    if (mode_ == Mode::OnTheFly && duration_ok(d, i, j))
        return model_->persist_score(s, d, i, j, *obs_);
    return std::log(R(d, s, i, j));
}

double PotentialLattice::logA(Level d_child, State s, State u, State v, Time t) const {
    return std::log(A(d_child, s, u, v, t));
}

double PotentialLattice::logPi(Level d, State s, State u, Time t) const {
    return std::log(Pi(d, s, u, t));
}

double PotentialLattice::logE(Level d, State s, State u, Time t) const {
    return std::log(E(d, s, u, t));
}

void PotentialLattice::set_R(Level d, State s, Time i, Time j, double value) {
    r_[d - 1][static_cast<size_t>(s - 1) * (static_cast<size_t>(T_) * (T_ + 1) / 2) + tri(i, j)] =
        value;
}

void PotentialLattice::set_A(Level d_child, State s, State u, State v, Time t, double value) {
    const size_t nc = topology_->num_states(d_child);
    a_[d_child - 2][((static_cast<size_t>(s - 1) * nc + (u - 1)) * nc + (v - 1)) *
                        static_cast<size_t>(T_ - 1) +
                    (t - 1)] = value;
}

void PotentialLattice::set_Pi(Level d, State s, State u, Time t, double value) {
    const size_t nc = topology_->num_states(d + 1);
    pi_[d - 1][(static_cast<size_t>(s - 1) * nc + (u - 1)) * T_ + (t - 1)] = value;
}

void PotentialLattice::set_E(Level d, State s, State u, Time t, double value) {
    const size_t nc = topology_->num_states(d + 1);
    e_[d - 1][(static_cast<size_t>(s - 1) * nc + (u - 1)) * T_ + (t - 1)] = value;
}

size_t PotentialLattice::table_entries() const {
    size_t n = 0;
    for (const auto& v : r_) n += v.size();
    for (const auto& v : a_) n += v.size();
    for (const auto& v : pi_) n += v.size();
    for (const auto& v : e_) n += v.size();
    return n;
}

PotentialLattice make_random_lattice(const Topology& topology, Time T, double lo, double hi,
                                     std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(lo, hi);
    PotentialLattice lat(topology, T);
    const int D = topology.depth();
    for (Level d = 1; d <= D; ++d)
        for (State s = 1; s <= topology.num_states(d); ++s)
            for (Time i = 1; i <= T; ++i)
                for (Time j = i; j <= T; ++j) lat.set_R(d, s, i, j, dist(rng));
    for (Level d = 1; d < D; ++d) {
        for (State s = 1; s <= topology.num_states(d); ++s) {
            for (State u : topology.children(d, s)) {
                for (Time t = 1; t <= T; ++t) {
                    lat.set_Pi(d, s, u, t, dist(rng));
                    lat.set_E(d, s, u, t, dist(rng));
                }
                for (State v : topology.children(d, s))
                    for (Time t = 1; t < T; ++t) lat.set_A(d + 1, s, u, v, t, dist(rng));
            }
        }
    }
    return lat;
}

}  // namespace hscrf
