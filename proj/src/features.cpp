#include "hscrf/features.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace hscrf {

void ObservationSequence::set(Time t, FeatureId raw_id, double value) {
    if (t < 1 || t > length()) throw DataError("observation position out of range");
    if (!std::isfinite(value)) throw DataError("non-finite observation feature value");
    rows_[t - 1].emplace_back(raw_id, value);
    cache_built_ = false;
}

void ObservationSequence::build_prefix_cache() const {
    if (cache_built_) return;
    std::set<FeatureId> ids;
    for (const auto& row : rows_)
        for (const auto& [id, v] : row) ids.insert(id);
    cached_ids_.assign(ids.begin(), ids.end());
    const Time T = length();
    prefix_.assign(cached_ids_.size(), std::vector<double>(T + 1, 0.0));
    for (size_t k = 0; k < cached_ids_.size(); ++k) {
        const FeatureId id = cached_ids_[k];
        for (Time t = 1; t <= T; ++t) {
            double v = 0.0;
            for (const auto& [rid, val] : rows_[t - 1])
                if (rid == id) v += val;
            prefix_[k][t] = prefix_[k][t - 1] + v;
        }
    }
    cache_built_ = true;
}

void ObservationSequence::segment_sum(Time i, Time j, SparseVec& out) const {
    build_prefix_cache();
    for (size_t k = 0; k < cached_ids_.size(); ++k) {
        const double v = prefix_[k][j] - prefix_[k][i - 1];
        if (v != 0.0) out.emplace_back(cached_ids_[k], v);
    }
}

size_t FeatureKeyHash::operator()(const FeatureKey& k) const {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](std::uint64_t x) {
        h ^= x;
        h *= 1099511628211ull;
    };
    mix(static_cast<std::uint64_t>(k.family));
    mix(static_cast<std::uint64_t>(k.kind));
    mix(static_cast<std::uint64_t>(k.d));
    mix(static_cast<std::uint64_t>(k.s));
    mix(static_cast<std::uint64_t>(k.u));
    mix(static_cast<std::uint64_t>(k.v));
    mix(static_cast<std::uint64_t>(k.raw_id));
    return static_cast<size_t>(h);
}

FeatureId FeatureIndex::intern(const FeatureKey& key) {
    auto it = map_.find(key);
    if (it != map_.end()) return it->second;
    const FeatureId id = static_cast<FeatureId>(keys_.size());
    map_.emplace(key, id);
    keys_.push_back(key);
    return id;
}

FeatureId FeatureIndex::lookup(const FeatureKey& key) const {
    auto it = map_.find(key);
    return it == map_.end() ? -1 : it->second;
}

std::vector<std::pair<FeatureKey, double>> duration_features(Level d, State s, int delta_t) {
    if (delta_t < 1) throw DataError("segment duration must be >= 1");
    std::vector<std::pair<FeatureKey, double>> out;
    out.emplace_back(FeatureKey{CliqueFamily::Persist, FeatureKind::DurLog, d, s, 0, 0, 0},
                     std::log(static_cast<double>(delta_t)));
    out.emplace_back(FeatureKey{CliqueFamily::Persist, FeatureKind::DurLin, d, s, 0, 0, 0},
                     static_cast<double>(delta_t));
    return out;
}

void FeatureModel::register_features(const std::vector<const ObservationSequence*>& data) {
    std::set<FeatureId> raw_ids;
    for (const ObservationSequence* obs : data) {
        for (Time t = 1; t <= obs->length(); ++t)
            for (const auto& [id, v] : obs->row(t)) raw_ids.insert(id);
    }
    const int D = topology_.depth();
    auto reg = [this](FeatureKey k) { index_.intern(k); };

    for (Level d = 1; d <= D; ++d) {
        for (State s = 1; s <= topology_.num_states(d); ++s) {
            if (config_.persist_bias)
                reg({CliqueFamily::Persist, FeatureKind::Bias, d, s, 0, 0, 0});
            if (config_.persist_duration) {
                reg({CliqueFamily::Persist, FeatureKind::DurLog, d, s, 0, 0, 0});
                reg({CliqueFamily::Persist, FeatureKind::DurLin, d, s, 0, 0, 0});
            }
            if (config_.persist_obs)
                for (FeatureId rid : raw_ids)
                    reg({CliqueFamily::Persist, FeatureKind::Obs, d, s, 0, 0, rid});
        }
    }
    for (Level d = 1; d < D; ++d) {
        for (State s = 1; s <= topology_.num_states(d); ++s) {
            for (State u : topology_.children(d, s)) {
                if (config_.init_bias)
                    reg({CliqueFamily::Init, FeatureKind::Bias, d, s, u, 0, 0});
                if (config_.end_bias)
                    reg({CliqueFamily::End, FeatureKind::Bias, d, s, u, 0, 0});
                if (config_.init_obs)
                    for (FeatureId rid : raw_ids)
                        reg({CliqueFamily::Init, FeatureKind::Obs, d, s, u, 0, rid});
                if (config_.end_obs)
                    for (FeatureId rid : raw_ids)
                        reg({CliqueFamily::End, FeatureKind::Obs, d, s, u, 0, rid});
                for (State v : topology_.children(d, s)) {
                    if (config_.transit_bias)
                        reg({CliqueFamily::Transit, FeatureKind::Bias, d + 1, s, u, v, 0});
                    if (config_.transit_obs)
                        for (FeatureId rid : raw_ids)
                            reg({CliqueFamily::Transit, FeatureKind::Obs, d + 1, s, u, v, rid});
                }
            }
        }
    }
    weights_.resize(index_.size(), 0.0);
}

void FeatureModel::check_finite_weights() const {
    for (double w : weights_)
        if (!std::isfinite(w)) throw NumericError("non-finite weight");
}

void FeatureModel::persist_features(State s, Level d, Time i, Time j,
                                    const ObservationSequence& obs, SparseVec& out) const {
    if (config_.persist_bias) {
        FeatureId id = index_.lookup({CliqueFamily::Persist, FeatureKind::Bias, d, s, 0, 0, 0});
        if (id >= 0) out.emplace_back(id, 1.0);
    }
    if (config_.persist_duration) {
        const int dt = j - i + 1;
        FeatureId id = index_.lookup({CliqueFamily::Persist, FeatureKind::DurLog, d, s, 0, 0, 0});
        if (id >= 0) out.emplace_back(id, std::log(static_cast<double>(dt)));
        id = index_.lookup({CliqueFamily::Persist, FeatureKind::DurLin, d, s, 0, 0, 0});
        if (id >= 0) out.emplace_back(id, static_cast<double>(dt));
    }
    if (config_.persist_obs) {
        SparseVec sums;
        obs.segment_sum(i, j, sums);
        for (const auto& [rid, v] : sums) {
            FeatureId id = index_.lookup({CliqueFamily::Persist, FeatureKind::Obs, d, s, 0, 0, rid});
            if (id >= 0) out.emplace_back(id, v);
        }
    }
}

void FeatureModel::transit_features(Level d_child, State s, State u, State v, Time t,
                                    const ObservationSequence& obs, SparseVec& out) const {
    if (config_.transit_bias) {
        FeatureId id = index_.lookup({CliqueFamily::Transit, FeatureKind::Bias, d_child, s, u, v, 0});
        if (id >= 0) out.emplace_back(id, 1.0);
    }
    if (config_.transit_obs) {
        for (const auto& [rid, val] : obs.row(t)) {
            FeatureId id =
                index_.lookup({CliqueFamily::Transit, FeatureKind::Obs, d_child, s, u, v, rid});
            if (id >= 0) out.emplace_back(id, val);
        }
    }
}

void FeatureModel::init_features(Level d, State s, State u, Time t,
                                 const ObservationSequence& obs, SparseVec& out) const {
    if (config_.init_bias) {
        FeatureId id = index_.lookup({CliqueFamily::Init, FeatureKind::Bias, d, s, u, 0, 0});
        if (id >= 0) out.emplace_back(id, 1.0);
    }
    if (config_.init_obs) {
        for (const auto& [rid, val] : obs.row(t)) {
            FeatureId id = index_.lookup({CliqueFamily::Init, FeatureKind::Obs, d, s, u, 0, rid});
            if (id >= 0) out.emplace_back(id, val);
        }
    }
}

void FeatureModel::end_features(Level d, State s, State u, Time t,
                                const ObservationSequence& obs, SparseVec& out) const {
    if (config_.end_bias) {
        FeatureId id = index_.lookup({CliqueFamily::End, FeatureKind::Bias, d, s, u, 0, 0});
        if (id >= 0) out.emplace_back(id, 1.0);
    }
    if (config_.end_obs) {
        for (const auto& [rid, val] : obs.row(t)) {
            FeatureId id = index_.lookup({CliqueFamily::End, FeatureKind::Obs, d, s, u, 0, rid});
            if (id >= 0) out.emplace_back(id, val);
        }
    }
}

double FeatureModel::dot(const SparseVec& f) const {
    double acc = 0.0;
    for (const auto& [id, v] : f) acc += weights_[static_cast<size_t>(id)] * v;
    return acc;
}

double FeatureModel::persist_score(State s, Level d, Time i, Time j,
                                   const ObservationSequence& obs) const {
    SparseVec f;
    persist_features(s, d, i, j, obs, f);
    return dot(f);
}

double FeatureModel::transit_score(Level d_child, State s, State u, State v, Time t,
                                   const ObservationSequence& obs) const {
    SparseVec f;
    transit_features(d_child, s, u, v, t, obs, f);
    return dot(f);
}

double FeatureModel::init_score(Level d, State s, State u, Time t,
                                const ObservationSequence& obs) const {
    SparseVec f;
    init_features(d, s, u, t, obs, f);
    return dot(f);
}

double FeatureModel::end_score(Level d, State s, State u, Time t,
                               const ObservationSequence& obs) const {
    SparseVec f;
    end_features(d, s, u, t, obs, f);
    return dot(f);
}

}  // namespace hscrf
