#ifndef HSCRF_INFERENCE_HPP
#define HSCRF_INFERENCE_HPP

#include <vector>

#include "hscrf/labels.hpp"
#include "hscrf/masses.hpp"
#include "hscrf/potentials.hpp"
#include "hscrf/topology.hpp"
#include "hscrf/types.hpp"

namespace hscrf {

enum class NumericsMode { Exact, Scaled, Auto };

struct InferenceOptions {
    NumericsMode numerics = NumericsMode::Auto;  // Auto: scaled when T > 64
    const PartialLabels* labels = nullptr;       // constrained inference when set
    bool parallel = true;                        // OpenMP over per-column entry sets
};

struct InferenceResult {
    MassLattice masses;
    double log_Z;
};

// Fills the inside family (delta-hat, alpha) bottom-up / left-right.
// In scaled mode the per-column factors kappa_j are chosen from the level-1
// asymmetric mass; exact mode runs the same code with every kappa = 1.
MassLattice compute_inside(const PotentialLattice& lattice, const Topology& topology,
                           const InferenceOptions& opts = {});

// Fills the outside family (lambda, lambda-hat, asymmetric lambda) top-down.
// Requires the inside family; throws HscrfError("InsideNotComputed") else.
void compute_outside(const PotentialLattice& lattice, const Topology& topology,
                     MassLattice& masses, const InferenceOptions& opts = {});

// Inside + outside in one call.
InferenceResult compute_aio(const PotentialLattice& lattice, const Topology& topology,
                            const InferenceOptions& opts = {});

// log Z from the full-inside mass at the top level (valid in either mode).
double log_partition(const MassLattice& masses);

enum class ZRoute { InsideTop, OutsideBottom, General };

// The three partition-function identities. OutsideBottom takes the time
// index i; General takes (d, t) with d in [2, D-1]. All agree in exact
// arithmetic; in scaled mode the cumulative kappa logs are folded back in.
double log_partition_route(const MassLattice& masses, ZRoute route, int a = 0, int b = 0);
double partition_function(const MassLattice& masses, ZRoute route, int a = 0, int b = 0);

// Pr(x^d_t = .): normalized by the inside-top partition value.
std::vector<double> state_marginal(const MassLattice& masses, Level d, Time t);

// Scaled-mode entry points (module surface for the scaling algorithm).
// scaled_inside returns the lattice with its ScaleVector and log Z; the
// outside pass consumes scaled masses with the unchanged equations.
MassLattice scaled_inside(const PotentialLattice& lattice, const Topology& topology,
                          const PartialLabels* labels = nullptr, bool parallel = true);
void scaled_outside(const PotentialLattice& lattice, const Topology& topology,
                    MassLattice& masses, const PartialLabels* labels = nullptr,
                    bool parallel = true);

namespace reference {

// Straightforward serial transliteration of the recursions (exact mode,
// paper loop order), kept as a cross-check for the parallel kernels.
MassLattice compute_inside(const PotentialLattice& lattice, const Topology& topology,
                           const PartialLabels* labels = nullptr);
void compute_outside(const PotentialLattice& lattice, const Topology& topology,
                     MassLattice& masses, const PartialLabels* labels = nullptr);

}  // namespace reference

}  // namespace hscrf

#endif
