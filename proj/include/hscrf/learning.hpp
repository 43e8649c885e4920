#ifndef HSCRF_LEARNING_HPP
#define HSCRF_LEARNING_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "hscrf/ess.hpp"
#include "hscrf/features.hpp"
#include "hscrf/labels.hpp"

namespace hscrf {

// One training sequence: observations plus (possibly empty or partial)
// labels. A null labels pointer means fully hidden.
struct TrainSequence {
    const ObservationSequence* obs = nullptr;
    const PartialLabels* labels = nullptr;
};

// Full labels as a PartialLabels container (every x and e set).
PartialLabels labels_from_configuration(const Configuration& config);

// Conditional log-likelihood sum_seq (log Z(labels, z) - log Z(z)) minus the
// optional L2 term, and its gradient (constrained ESS - free ESS - l2 * w).
// Per-sequence terms are computed in parallel and reduced in input order.
std::pair<double, std::vector<double>> log_likelihood_and_gradient(
    const FeatureModel& model, const std::vector<TrainSequence>& batch, double l2 = 0.0,
    bool parallel = true);

struct SgdConfig {
    int epochs = 10;
    double lr0 = 0.1;  // step at epoch e is lr0 / (1 + e), e starting at 0
    double l2 = 0.0;
    std::uint64_t shuffle_seed = 0;
};

struct TrainState {
    std::vector<double> weights;
    std::vector<double> epoch_nll;  // dataset NLL after each epoch
    int epochs_run = 0;
};

// Online stochastic gradient ascent over shuffled sequences, deterministic
// per seed. Updates model.weights() in place and records the dataset NLL
// after every epoch. Throws DataError("EmptyDataset") on an empty dataset.
TrainState train_sgd(FeatureModel& model, const std::vector<TrainSequence>& dataset,
                     const SgdConfig& config);

}  // namespace hscrf

#endif
