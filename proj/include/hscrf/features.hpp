#ifndef HSCRF_FEATURES_HPP
#define HSCRF_FEATURES_HPP

#include <cstdint>
#include <unordered_map>
#include <utility>
#include <vector>

#include "hscrf/topology.hpp"
#include "hscrf/types.hpp"

namespace hscrf {

using FeatureId = std::int64_t;
using SparseVec = std::vector<std::pair<FeatureId, double>>;

// Observation sequence: per-position sparse raw feature bundles g(z).
class ObservationSequence {
public:
    ObservationSequence() = default;
    explicit ObservationSequence(Time length) : rows_(length) {}

    Time length() const { return static_cast<Time>(rows_.size()); }
    void set(Time t, FeatureId raw_id, double value);
    const SparseVec& row(Time t) const { return rows_[t - 1]; }

    // Sum of g_k over positions [i, j]; built lazily, reused across segments.
    void build_prefix_cache() const;
    void segment_sum(Time i, Time j, SparseVec& out) const;

private:
    std::vector<SparseVec> rows_;
    mutable std::vector<FeatureId> cached_ids_;
    mutable std::vector<std::vector<double>> prefix_;  // per cached id, length T+1
    mutable bool cache_built_ = false;
};

enum class CliqueFamily : std::uint8_t { Persist = 0, Transit = 1, Init = 2, End = 3 };

// Feature kinds within a family. Bias and the two gamma-duration sufficient
// statistics take no raw id; Obs conjoins the clique indicator with one raw
// observation feature.
enum class FeatureKind : std::uint8_t { Bias = 0, DurLog = 1, DurLin = 2, Obs = 3 };

struct FeatureKey {
    CliqueFamily family;
    FeatureKind kind;
    Level d;      // persist: level of s; transit: child level; init/end: parent level
    State s;
    State u;      // transit/init/end child state (0 for persist)
    State v;      // transit target state (0 otherwise)
    FeatureId raw_id;  // Obs kind only, else 0

    bool operator==(const FeatureKey& o) const = default;
};

struct FeatureKeyHash {
    size_t operator()(const FeatureKey& k) const;
};

// Stable id registry built in a registration pass; unseen keys resolve to -1
// and are dropped at extraction time.
class FeatureIndex {
public:
    FeatureId intern(const FeatureKey& key);
    FeatureId lookup(const FeatureKey& key) const;
    size_t size() const { return keys_.size(); }
    const FeatureKey& key(FeatureId id) const { return keys_[static_cast<size_t>(id)]; }

private:
    std::unordered_map<FeatureKey, FeatureId, FeatureKeyHash> map_;
    std::vector<FeatureKey> keys_;
};

// Which feature templates are active. Observation conjunctions follow the
// factored form f(x_c, z) = I(x_c) g(z); persistence aggregates g over the
// segment and optionally adds the gamma-duration statistics.
struct FeatureConfig {
    bool persist_bias = true;
    bool persist_duration = true;
    bool persist_obs = true;
    bool transit_bias = true;
    bool transit_obs = false;
    bool init_bias = true;
    bool init_obs = false;
    bool end_bias = true;
    bool end_obs = false;
};

// Emits the gamma-duration sufficient statistics {I(s) log(dt), I(s) dt} for
// a segment of state s lasting dt steps, keyed at level d. The indicator is
// carried in the key: states other than s contribute nothing.
std::vector<std::pair<FeatureKey, double>> duration_features(Level d, State s, int delta_t);

// Log-linear feature model: index, weights and the four extractor families.
class FeatureModel {
public:
    FeatureModel(FeatureConfig config, Topology topology)
        : config_(config), topology_(std::move(topology)) {}

    const FeatureConfig& config() const { return config_; }
    const Topology& topology() const { return topology_; }
    FeatureIndex& index() { return index_; }
    const FeatureIndex& index() const { return index_; }
    std::vector<double>& weights() { return weights_; }
    const std::vector<double>& weights() const { return weights_; }

    // Registers every structural feature reachable under the topology plus
    // observation conjunctions for raw ids present in data; zero-initialises
    // any new weights.
    void register_features(const std::vector<const ObservationSequence*>& data);

    // Extractors. Appends (id, value) pairs for registered features only.
    void persist_features(State s, Level d, Time i, Time j, const ObservationSequence& obs,
                          SparseVec& out) const;
    void transit_features(Level d_child, State s, State u, State v, Time t,
                          const ObservationSequence& obs, SparseVec& out) const;
    void init_features(Level d, State s, State u, Time t, const ObservationSequence& obs,
                       SparseVec& out) const;
    void end_features(Level d, State s, State u, Time t, const ObservationSequence& obs,
                      SparseVec& out) const;

    // w . f for the given clique context; throws NumericError on non-finite
    // weights at registration time, never here.
    double persist_score(State s, Level d, Time i, Time j, const ObservationSequence& obs) const;
    double transit_score(Level d_child, State s, State u, State v, Time t,
                         const ObservationSequence& obs) const;
    double init_score(Level d, State s, State u, Time t, const ObservationSequence& obs) const;
    double end_score(Level d, State s, State u, Time t, const ObservationSequence& obs) const;

    void check_finite_weights() const;

private:
    double dot(const SparseVec& f) const;

    FeatureConfig config_;
    Topology topology_;
    FeatureIndex index_;
    std::vector<double> weights_;
};

}  // namespace hscrf

#endif
