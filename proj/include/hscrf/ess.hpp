#ifndef HSCRF_ESS_HPP
#define HSCRF_ESS_HPP

#include <vector>

#include "hscrf/features.hpp"
#include "hscrf/masses.hpp"
#include "hscrf/potentials.hpp"

namespace hscrf {

// Dense expected-sufficient-statistics vector aligned with the model index.
using ESSVector = std::vector<double>;

// Each family accumulates E[F] into `out` (sized to the model index).
// Requires both mass families; the normalizer is the inside-top partition
// value of `masses`, so constrained masses yield constrained expectations
// under Pr(h | labels, z) with no further changes.
void ess_persist(const MassLattice& masses, const PotentialLattice& lattice,
                 const FeatureModel& model, const ObservationSequence& obs, ESSVector& out);
void ess_transit(const MassLattice& masses, const PotentialLattice& lattice,
                 const FeatureModel& model, const ObservationSequence& obs, ESSVector& out);
void ess_init(const MassLattice& masses, const PotentialLattice& lattice,
              const FeatureModel& model, const ObservationSequence& obs, ESSVector& out);
void ess_end(const MassLattice& masses, const PotentialLattice& lattice,
             const FeatureModel& model, const ObservationSequence& obs, ESSVector& out);

// All four families.
ESSVector ess_all(const MassLattice& masses, const PotentialLattice& lattice,
                  const FeatureModel& model, const ObservationSequence& obs);

}  // namespace hscrf

#endif
