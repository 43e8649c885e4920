#ifndef HSCRF_POTENTIALS_HPP
#define HSCRF_POTENTIALS_HPP

#include <cstdint>
#include <vector>

#include "hscrf/features.hpp"
#include "hscrf/topology.hpp"
#include "hscrf/types.hpp"

namespace hscrf {

// Clique potentials for one observation sequence. Entries are strictly
// positive except for topology-forbidden pairs and duration-capped segments,
// which are hard zeros. Two storage modes behind one accessor surface:
// a materialized table (default for T <= 512) and on-the-fly evaluation
// against a FeatureModel.
class PotentialLattice {
public:
    enum class Mode { Table, OnTheFly };
    struct BuildOptions {
        enum class Storage { Auto, Table, OnTheFly } storage = Storage::Auto;
        // 0 = uncapped; otherwise R(d,s,i,j) = 0 when j-i+1 > cap for
        // levels 2..D-1.
        int max_duration = 0;
    };

    // Table mode with unit potentials everywhere (topology zeros honored).
    PotentialLattice(const Topology& topology, Time T);

    // Materializes (or wraps) exp(w . f) for every contextual clique.
    static PotentialLattice build(const FeatureModel& model, const ObservationSequence& obs,
                                  BuildOptions options = {});

    const Topology& topology() const { return *topology_; }
    Time length() const { return T_; }
    Mode mode() const { return mode_; }

    // Persistence R^{d,s}_{i:j}.
    double R(Level d, State s, Time i, Time j) const;
    // Transition A^{dc,s}_{u,v,t}: u -> v at child level dc under parent s.
    double A(Level d_child, State s, State u, State v, Time t) const;
    // Initialisation pi^{d,s}_{u,t} and ending E^{d,s}_{u,t} (parent level d).
    double Pi(Level d, State s, State u, Time t) const;
    double E(Level d, State s, State u, Time t) const;

    double logR(Level d, State s, Time i, Time j) const;
    double logA(Level d_child, State s, State u, State v, Time t) const;
    double logPi(Level d, State s, State u, Time t) const;
    double logE(Level d, State s, State u, Time t) const;

    // Table-mode mutation, used by tests and the SemiCRF reduction.
    void set_R(Level d, State s, Time i, Time j, double value);
    void set_A(Level d_child, State s, State u, State v, Time t, double value);
    void set_Pi(Level d, State s, State u, Time t, double value);
    void set_E(Level d, State s, State u, Time t, double value);

    // Number of table entries allocated (0 in on-the-fly mode).
    size_t table_entries() const;

    int max_duration() const { return max_duration_; }
    void set_max_duration(int cap) { max_duration_ = cap; }

private:
    PotentialLattice(const Topology& topology, Time T, Mode mode);
    size_t tri(Time i, Time j) const { return static_cast<size_t>(j - 1) * j / 2 + (i - 1); }
    bool duration_ok(Level d, Time i, Time j) const;

    const Topology* topology_;
    Time T_;
    Mode mode_;
    int max_duration_ = 0;

    // Table storage, indexed per level.
    std::vector<std::vector<double>> r_;        // [d-1]: s-major x tri(i,j)
    std::vector<std::vector<double>> a_;        // [dc-2]: ((s,u),v)-major x (T-1)
    std::vector<std::vector<double>> pi_;       // [d-1]: ((s,u))-major x T
    std::vector<std::vector<double>> e_;        // [d-1]: ((s,u))-major x T

    // On-the-fly backing.
    const FeatureModel* model_ = nullptr;
    const ObservationSequence* obs_ = nullptr;
};

// Random positive potentials in [lo, hi] (table mode), deterministic per seed.
// Topology-forbidden entries stay zero. Shared by tests and `validate`.
PotentialLattice make_random_lattice(const Topology& topology, Time T, double lo, double hi,
                                     std::uint64_t seed);

}  // namespace hscrf

#endif
