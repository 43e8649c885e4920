#include "hscrf/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "hscrf/inference.hpp"

namespace hscrf {
namespace oracle {

namespace {

struct Enumerator {
    const Topology& topo;
    Time T;
    EnumerationBudget& budget;
    const std::function<void(const Configuration&)>& visit;
    Configuration cur;
    long count = 0;
    bool stopped = false;

    Enumerator(const Topology& t, Time len, EnumerationBudget& b,
               const std::function<void(const Configuration&)>& v)
        : topo(t), T(len), budget(b), visit(v) {
        cur.x.assign(topo.depth(), std::vector<State>(T, 0));
        cur.e.assign(topo.depth(), std::vector<int>(T, 0));
    }

    void emit() {
        if (stopped) return;
        if (count >= budget.max_configs) {
            budget.reached = true;
            stopped = true;
            return;
        }
        ++count;
        visit(cur);
    }

    // Fill row d from position p onward; rows above are complete.
    void fill_row(Level d, Time p) {
        if (stopped) return;
        if (p > T) {
            if (d == topo.depth())
                emit();
            else
                fill_row(d + 1, 1);
            return;
        }
        // End of the parent segment containing p.
        Time pj = p;
        while (pj < T && cur.e[d - 2][pj - 1] == 0) ++pj;
        const State parent = cur.x[d - 2][p - 1];
        for (State u : topo.children(d - 1, parent)) {
            const Time q_hi = (d == topo.depth()) ? p : pj;
            for (Time q = p; q <= q_hi; ++q) {
                for (Time t = p; t <= q; ++t) {
                    cur.x[d - 1][t - 1] = u;
                    cur.e[d - 1][t - 1] = (t == q) ? 1 : 0;
                }
                fill_row(d, q + 1);
                if (stopped) return;
            }
        }
    }

    void run() {
        for (State s = 1; s <= topo.num_states(1); ++s) {
            for (Time t = 1; t <= T; ++t) {
                cur.x[0][t - 1] = s;
                cur.e[0][t - 1] = (t == T) ? 1 : 0;
            }
            fill_row(2, 1);
            if (stopped) return;
        }
    }
};

void require_within_budget(const EnumerationBudget& budget) {
    if (budget.reached) throw DataError("enumeration budget exceeded");
}

}  // namespace

long enumerate(const Topology& topology, Time T, EnumerationBudget& budget,
               const std::function<void(const Configuration&)>& visit) {
    Enumerator en(topology, T, budget, visit);
    en.run();
    return en.count;
}

double log_config_potential(const PotentialLattice& lattice, const Configuration& config) {
    const int D = config.depth();
    const Time T = config.length();
    double acc = 0.0;
    auto x = [&](Level d, Time t) { return config.x[d - 1][t - 1]; };
    auto e = [&](Level d, Time t) { return config.e[d - 1][t - 1]; };

    for (Level d = 1; d <= D; ++d) {
        Time i = 1;
        for (Time t = 1; t <= T; ++t) {
            if (e(d, t) == 1) {
                acc += lattice.logR(d, x(d, t), i, t);
                i = t + 1;
            }
        }
    }
    for (Level d = 1; d < D; ++d) {
        for (Time t = 1; t <= T; ++t) {
            const bool parent_starts = (t == 1) || e(d, t - 1) == 1;
            if (parent_starts) acc += lattice.logPi(d, x(d, t), x(d + 1, t), t);
            if (e(d, t) == 1) acc += lattice.logE(d, x(d, t), x(d + 1, t), t);
            if (t < T && e(d + 1, t) == 1 && e(d, t) == 0)
                acc += lattice.logA(d + 1, x(d, t), x(d + 1, t), x(d + 1, t + 1), t);
        }
    }
    return acc;
}

bool config_matches_labels(const Configuration& config, const PartialLabels& labels) {
    for (Level d = 1; d <= config.depth(); ++d) {
        for (Time t = 1; t <= config.length(); ++t) {
            const State xs = labels.labeled_state(d, t);
            if (xs != 0 && xs != config.x[d - 1][t - 1]) return false;
            const int el = labels.labeled_ending(d, t);
            if (el != -1 && el != config.e[d - 1][t - 1]) return false;
        }
    }
    return true;
}

std::vector<double> config_global_features(const FeatureModel& model,
                                           const ObservationSequence& obs,
                                           const Configuration& config) {
    std::vector<double> out(model.index().size(), 0.0);
    auto add = [&out](const SparseVec& f) {
        for (const auto& [id, v] : f) out[static_cast<size_t>(id)] += v;
    };
    const int D = config.depth();
    const Time T = config.length();
    auto x = [&](Level d, Time t) { return config.x[d - 1][t - 1]; };
    auto e = [&](Level d, Time t) { return config.e[d - 1][t - 1]; };

    SparseVec f;
    for (Level d = 1; d <= D; ++d) {
        Time i = 1;
        for (Time t = 1; t <= T; ++t) {
            if (e(d, t) == 1) {
                f.clear();
                model.persist_features(x(d, t), d, i, t, obs, f);
                add(f);
                i = t + 1;
            }
        }
    }
    for (Level d = 1; d < D; ++d) {
        for (Time t = 1; t <= T; ++t) {
            if (t == 1 || e(d, t - 1) == 1) {
                f.clear();
                model.init_features(d, x(d, t), x(d + 1, t), t, obs, f);
                add(f);
            }
            if (e(d, t) == 1) {
                f.clear();
                model.end_features(d, x(d, t), x(d + 1, t), t, obs, f);
                add(f);
            }
            if (t < T && e(d + 1, t) == 1 && e(d, t) == 0) {
                f.clear();
                model.transit_features(d + 1, x(d, t), x(d + 1, t), x(d + 1, t + 1), t, obs, f);
                add(f);
            }
        }
    }
    return out;
}

double log_Z(const PotentialLattice& lattice, const Topology& topology,
             const PartialLabels* labels, EnumerationBudget budget) {
    double z = 0.0;
    enumerate(topology, lattice.length(), budget, [&](const Configuration& c) {
        if (labels != nullptr && !config_matches_labels(c, *labels)) return;
        z += std::exp(log_config_potential(lattice, c));
    });
    require_within_budget(budget);
    return std::log(z);
}

std::vector<double> marginal(const PotentialLattice& lattice, const Topology& topology, Level d,
                             Time t, const PartialLabels* labels, EnumerationBudget budget) {
    std::vector<double> mass(topology.num_states(d), 0.0);
    double z = 0.0;
    enumerate(topology, lattice.length(), budget, [&](const Configuration& c) {
        if (labels != nullptr && !config_matches_labels(c, *labels)) return;
        const double phi = std::exp(log_config_potential(lattice, c));
        z += phi;
        mass[c.x[d - 1][t - 1] - 1] += phi;
    });
    require_within_budget(budget);
    for (double& v : mass) v /= z;
    return mass;
}

std::pair<double, Configuration> map_config(const PotentialLattice& lattice,
                                            const Topology& topology,
                                            const PartialLabels* labels,
                                            EnumerationBudget budget) {
    double best = -std::numeric_limits<double>::infinity();
    Configuration arg;
    enumerate(topology, lattice.length(), budget, [&](const Configuration& c) {
        if (labels != nullptr && !config_matches_labels(c, *labels)) return;
        const double lp = log_config_potential(lattice, c);
        if (lp > best) {
            best = lp;
            arg = c;
        }
    });
    require_within_budget(budget);
    return {best, arg};
}

std::vector<double> ess(const PotentialLattice& lattice, const Topology& topology,
                        const FeatureModel& model, const ObservationSequence& obs,
                        const PartialLabels* labels, EnumerationBudget budget) {
    std::vector<double> acc(model.index().size(), 0.0);
    double z = 0.0;
    enumerate(topology, lattice.length(), budget, [&](const Configuration& c) {
        if (labels != nullptr && !config_matches_labels(c, *labels)) return;
        const double phi = std::exp(log_config_potential(lattice, c));
        z += phi;
        const std::vector<double> f = config_global_features(model, obs, c);
        for (size_t k = 0; k < f.size(); ++k) acc[k] += phi * f[k];
    });
    require_within_budget(budget);
    for (double& v : acc) v /= z;
    return acc;
}

double blanket_probability(const PotentialLattice& lattice, const Topology& topology, Level d,
                           State s, Time i, Time j, EnumerationBudget budget) {
    double z = 0.0, hit = 0.0;
    enumerate(topology, lattice.length(), budget, [&](const Configuration& c) {
        const double phi = std::exp(log_config_potential(lattice, c));
        z += phi;
        // Segment (d, s, i, j) occurs: state s spans [i, j] as a full segment.
        const auto& xs = c.x[d - 1];
        const auto& es = c.e[d - 1];
        bool ok = (i == 1 || es[i - 2] == 1) && es[j - 1] == 1;
        for (Time t = i; ok && t <= j; ++t) ok = xs[t - 1] == s && (t == j || es[t - 1] == 0);
        if (ok) hit += phi;
    });
    require_within_budget(budget);
    return hit / z;
}

namespace {

double next_uniform(std::uint64_t& state) {
    // splitmix64; cheap, reproducible, good enough for sampling tests.
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    z = z ^ (z >> 31);
    return static_cast<double>(z >> 11) * 0x1.0p-53;
}

size_t draw(const std::vector<double>& weights, std::uint64_t& state) {
    double total = 0.0;
    for (double w : weights) total += w;
    if (total <= 0.0) throw NumericError("sampling from an all-zero weight vector");
    double r = next_uniform(state) * total;
    for (size_t k = 0; k < weights.size(); ++k) {
        r -= weights[k];
        if (r <= 0.0) return k;
    }
    return weights.size() - 1;
}

struct Sampler {
    struct Seg {
        State s;
        Time i, j;
    };

    const PotentialLattice& pot;
    const Topology& topo;
    const MassLattice& m;
    std::uint64_t& rng;
    std::vector<std::vector<Seg>> segments;

    Sampler(const PotentialLattice& p, const Topology& t, const MassLattice& mm,
            std::uint64_t& r)
        : pot(p), topo(t), m(mm), rng(r) {
        segments.resize(topo.depth());
    }

    void sample_segment(Level d, State s, Time i, Time j) {
        segments[d - 1].push_back({s, i, j});
        if (d == topo.depth()) return;
        const auto& ch = topo.children(d, s);
        // Last child u ~ E * alpha.
        std::vector<double> w(ch.size());
        for (size_t k = 0; k < ch.size(); ++k)
            w[k] = pot.E(d, s, ch[k], j) * m.alpha(d, s, i, j, ch[k]);
        State u = ch[draw(w, rng)];
        Time cur_j = j;
        while (true) {
            if (cur_j == i) {
                sample_segment(d + 1, u, i, cur_j);
                break;
            }
            // Decompose alpha(d, s, i, cur_j, u) into its additive branches.
            std::vector<double> bw;
            std::vector<std::pair<State, Time>> branch;  // (v, t); t == i is init
            if (d == topo.depth() - 1) {
                for (State v : ch) {
                    bw.push_back(m.alpha(d, s, i, cur_j - 1, v) *
                                 pot.A(d + 1, s, v, u, cur_j - 1));
                    branch.emplace_back(v, cur_j);
                }
            } else {
                bw.push_back(m.delta_hat(d + 1, u, i, cur_j) * pot.Pi(d, s, u, i));
                branch.emplace_back(0, i);
                for (State v : ch) {
                    for (Time t = i + 1; t <= cur_j; ++t) {
                        bw.push_back(m.alpha(d, s, i, t - 1, v) *
                                     m.delta_hat(d + 1, u, t, cur_j) *
                                     pot.A(d + 1, s, v, u, t - 1));
                        branch.emplace_back(v, t);
                    }
                }
            }
            const auto [v, t] = branch[draw(bw, rng)];
            if (v == 0) {  // init branch: u spans [i, cur_j]
                sample_segment(d + 1, u, i, cur_j);
                break;
            }
            sample_segment(d + 1, u, t, cur_j);
            cur_j = t - 1;
            u = v;
        }
    }

    Configuration run() {
        const Time T = m.length();
        std::vector<double> w(topo.num_states(1));
        for (State s = 1; s <= topo.num_states(1); ++s) w[s - 1] = m.delta_hat(1, s, 1, T);
        const State root = static_cast<State>(draw(w, rng)) + 1;
        sample_segment(1, root, 1, T);

        Configuration c;
        c.x.assign(topo.depth(), std::vector<State>(T, 0));
        c.e.assign(topo.depth(), std::vector<int>(T, 0));
        for (Level d = 1; d <= topo.depth(); ++d) {
            for (const auto& seg : segments[d - 1]) {
                for (Time t = seg.i; t <= seg.j; ++t) {
                    c.x[d - 1][t - 1] = seg.s;
                    c.e[d - 1][t - 1] = (t == seg.j) ? 1 : 0;
                }
            }
        }
        return c;
    }
};

}  // namespace

Configuration sample_configuration(const PotentialLattice& lattice, const Topology& topology,
                                   const MassLattice& inside, std::uint64_t& rng_state) {
    if (!inside.inside_filled()) throw HscrfError("InsideNotComputed");
    Sampler smp(lattice, topology, inside, rng_state);
    return smp.run();
}

std::vector<LabeledSequence> sample_dataset(const Topology& topology, const FeatureModel& model,
                                            int n, Time T, std::uint64_t seed) {
    std::vector<FeatureId> raw_ids;
    for (size_t k = 0; k < model.index().size(); ++k) {
        const FeatureKey& key = model.index().key(static_cast<FeatureId>(k));
        if (key.kind == FeatureKind::Obs &&
            std::find(raw_ids.begin(), raw_ids.end(), key.raw_id) == raw_ids.end())
            raw_ids.push_back(key.raw_id);
    }
    std::sort(raw_ids.begin(), raw_ids.end());

    std::mt19937_64 gen(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uint64_t sample_state = seed ^ 0xabcdef1234567890ull;

    std::vector<LabeledSequence> out;
    out.reserve(n);
    for (int k = 0; k < n; ++k) {
        ObservationSequence obs(T);
        for (Time t = 1; t <= T; ++t)
            for (FeatureId rid : raw_ids) obs.set(t, rid, normal(gen));
        PotentialLattice lat = PotentialLattice::build(model, obs);
        InferenceOptions opts;
        opts.numerics = NumericsMode::Exact;
        MassLattice inside = compute_inside(lat, topology, opts);
        Configuration gold = sample_configuration(lat, topology, inside, sample_state);
        out.push_back(LabeledSequence{std::move(obs), std::move(gold)});
    }
    return out;
}

double chain_log_Z(int num_states, Time T, const std::function<double(Time, State)>& unary,
                   const std::function<double(Time, State, State)>& transition) {
    std::vector<double> fwd(num_states), next(num_states);
    for (State s = 1; s <= num_states; ++s) fwd[s - 1] = unary(1, s);
    double log_scale = 0.0;
    for (Time t = 2; t <= T; ++t) {
        for (State s = 1; s <= num_states; ++s) {
            double acc = 0.0;
            for (State sp = 1; sp <= num_states; ++sp)
                acc += fwd[sp - 1] * transition(t - 1, sp, s);
            next[s - 1] = acc * unary(t, s);
        }
        double col = 0.0;
        for (double v : next) col += v;
        log_scale += std::log(col);
        for (State s = 1; s <= num_states; ++s) fwd[s - 1] = next[s - 1] / col;
    }
    double z = 0.0;
    for (double v : fwd) z += v;
    return std::log(z) + log_scale;
}

}  // namespace oracle
}  // namespace hscrf
