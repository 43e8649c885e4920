#ifndef HSCRF_ORACLE_HPP
#define HSCRF_ORACLE_HPP

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "hscrf/features.hpp"
#include "hscrf/labels.hpp"
#include "hscrf/masses.hpp"
#include "hscrf/potentials.hpp"
#include "hscrf/topology.hpp"

namespace hscrf {
namespace oracle {

struct EnumerationBudget {
    long max_configs = 2'000'000;
    bool reached = false;
};

// Visits every legal configuration exactly once (nested-segmentation order).
// Returns the count; stops early and sets budget.reached when the cap hits.
long enumerate(const Topology& topology, Time T, EnumerationBudget& budget,
               const std::function<void(const Configuration&)>& visit);

// Direct evaluation of log Phi[zeta] by walking the contextual cliques of a
// configuration; independent of the inside-outside factorisation.
double log_config_potential(const PotentialLattice& lattice, const Configuration& config);

// Does the configuration agree with every labeled state / ending indicator?
bool config_matches_labels(const Configuration& config, const PartialLabels& labels);

// Global feature vector F(zeta), dense over the model index.
std::vector<double> config_global_features(const FeatureModel& model,
                                           const ObservationSequence& obs,
                                           const Configuration& config);

// Brute-force reference quantities. All throw DataError when the enumeration
// budget is exceeded. `labels` restricts the sum/argmax to consistent
// configurations (nullptr = unconstrained).
double log_Z(const PotentialLattice& lattice, const Topology& topology,
             const PartialLabels* labels = nullptr,
             EnumerationBudget budget = {});
std::vector<double> marginal(const PotentialLattice& lattice, const Topology& topology, Level d,
                             Time t, const PartialLabels* labels = nullptr,
                             EnumerationBudget budget = {});
std::pair<double, Configuration> map_config(const PotentialLattice& lattice,
                                            const Topology& topology,
                                            const PartialLabels* labels = nullptr,
                                            EnumerationBudget budget = {});
std::vector<double> ess(const PotentialLattice& lattice, const Topology& topology,
                        const FeatureModel& model, const ObservationSequence& obs,
                        const PartialLabels* labels = nullptr, EnumerationBudget budget = {});

// Pr(segment (d,s,i,j) occurs) by enumeration; checks Proposition 3.
double blanket_probability(const PotentialLattice& lattice, const Topology& topology, Level d,
                           State s, Time i, Time j, EnumerationBudget budget = {});

// Exact draw from Pr(zeta | z) by backward sampling through the inside
// masses; deterministic given the generator state.
Configuration sample_configuration(const PotentialLattice& lattice, const Topology& topology,
                                   const MassLattice& inside, std::uint64_t& rng_state);

struct LabeledSequence {
    ObservationSequence obs;
    Configuration gold;
};

// Synthetic planted-model dataset: per-position N(0,1) values for every raw
// observation id the model knows, labels sampled exactly from the planted
// conditional. Deterministic per seed.
std::vector<LabeledSequence> sample_dataset(const Topology& topology, const FeatureModel& model,
                                            int n, Time T, std::uint64_t seed);

// Independent textbook linear-chain forward pass: unary(t, s) times
// transition(t, s_prev, s) with both tables addressed 1-based. Used to pin
// the SemiCRF L=1 reduction.
double chain_log_Z(int num_states, Time T,
                   const std::function<double(Time, State)>& unary,
                   const std::function<double(Time, State, State)>& transition);

}  // namespace oracle
}  // namespace hscrf

#endif
