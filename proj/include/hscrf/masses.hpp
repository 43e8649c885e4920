#ifndef HSCRF_MASSES_HPP
#define HSCRF_MASSES_HPP

#include <cassert>
#include <cmath>
#include <vector>

#include "hscrf/topology.hpp"
#include "hscrf/types.hpp"

namespace hscrf {

// Storage footprint of one level's (i, j) plane. The top level pins i = 1,
// the bottom level pins i = j; everything in between is triangular.
struct LevelIndex {
    enum class Shape { FirstRow, Triangular, Diagonal };
    Shape shape = Shape::Triangular;
    Time T = 0;

    size_t count() const {
        return shape == Shape::Triangular ? static_cast<size_t>(T) * (T + 1) / 2
                                          : static_cast<size_t>(T);
    }
    bool valid(Time i, Time j) const {
        if (i < 1 || j < i || j > T) return false;
        if (shape == Shape::FirstRow) return i == 1;
        if (shape == Shape::Diagonal) return i == j;
        return true;
    }
    size_t at(Time i, Time j) const {
        assert(valid(i, j));
        switch (shape) {
            case Shape::FirstRow: return static_cast<size_t>(j - 1);
            case Shape::Diagonal: return static_cast<size_t>(i - 1);
            default: return static_cast<size_t>(j - 1) * j / 2 + (i - 1);
        }
    }
};

// Per-column scaling factors kappa_j and their cumulative logs. Exact mode
// keeps every kappa at 1 so the same accessors serve both modes.
struct ScaleVector {
    std::vector<double> kappa;       // [t-1]
    std::vector<double> inv_kappa;   // [t-1]
    std::vector<double> log_prefix;  // [t]: sum of log kappa_1..t; [0] = 0

    void init(Time T) {
        kappa.assign(T, 1.0);
        inv_kappa.assign(T, 1.0);
        log_prefix.assign(T + 1, 0.0);
    }
    void set(Time j, double k) {
        kappa[j - 1] = k;
        inv_kappa[j - 1] = 1.0 / k;
        log_prefix[j] = log_prefix[j - 1] + std::log(k);
    }
    double log_total() const { return log_prefix.empty() ? 0.0 : log_prefix.back(); }
    bool scaled() const {
        for (double k : kappa)
            if (k != 1.0) return true;
        return false;
    }
};

// Inside family (delta-hat, alpha) and outside family (lambda, lambda-hat,
// asymmetric lambda) for one sequence. Inside entries are stored partially
// scaled: entry (i, j) is the exact mass divided by prod_{k in [i, j-1]}
// kappa_k, and readers resolve the final 1/kappa_j on access. Outside entries
// are stored at their final scale (exact / prod_{k outside [i, j]} kappa_k).
// Single writer during fill, immutable afterwards.
class MassLattice {
public:
    MassLattice(const Topology& topology, Time T);

    int depth() const { return D_; }
    Time length() const { return T_; }
    int states_at(Level d) const { return sizes_[d - 1]; }
    int top_states() const { return sizes_.front(); }
    int bottom_states() const { return sizes_.back(); }
    const ScaleVector& scale() const { return scale_; }
    ScaleVector& scale() { return scale_; }
    bool inside_filled() const { return inside_filled_; }
    bool outside_filled() const { return outside_filled_; }
    void mark_inside_filled() { inside_filled_ = true; }
    void mark_outside_filled() { outside_filled_ = true; }

    const LevelIndex& sym_index(Level d) const { return sym_[d - 1]; }

    // Raw (partially scaled) inside accessors, fill-time only.
    double& delta_hat_raw(Level d, State s, Time i, Time j) {
        return delta_hat_[d - 1][static_cast<size_t>(s - 1) * sym_[d - 1].count() +
                                 sym_[d - 1].at(i, j)];
    }
    double& alpha_raw(Level d, State s, Time i, Time j, State u) {
        return alpha_[d - 1][(static_cast<size_t>(s - 1) * sym_[d - 1].count() +
                              sym_[d - 1].at(i, j)) *
                                 child_width_[d - 1] +
                             (u - 1)];
    }
    double delta_hat_raw(Level d, State s, Time i, Time j) const {
        return delta_hat_[d - 1][static_cast<size_t>(s - 1) * sym_[d - 1].count() +
                                 sym_[d - 1].at(i, j)];
    }
    double alpha_raw(Level d, State s, Time i, Time j, State u) const {
        return alpha_[d - 1][(static_cast<size_t>(s - 1) * sym_[d - 1].count() +
                              sym_[d - 1].at(i, j)) *
                                 child_width_[d - 1] +
                             (u - 1)];
    }

    // Fully scaled inside values: exact / prod_{k in [i, j]} kappa_k.
    double delta_hat(Level d, State s, Time i, Time j) const {
        return delta_hat_raw(d, s, i, j) * scale_.inv_kappa[j - 1];
    }
    double alpha(Level d, State s, Time i, Time j, State u) const {
        return alpha_raw(d, s, i, j, u) * scale_.inv_kappa[j - 1];
    }

    // Outside values, stored final.
    double& lambda_ref(Level d, State s, Time i, Time j) {
        return lambda_[d - 1][static_cast<size_t>(s - 1) * sym_[d - 1].count() +
                              sym_[d - 1].at(i, j)];
    }
    double& lambda_hat_ref(Level d, State s, Time i, Time j) {
        return lambda_hat_[d - 1][static_cast<size_t>(s - 1) * sym_[d - 1].count() +
                                  sym_[d - 1].at(i, j)];
    }
    double& lambda_asym_ref(Level d, State s, Time i, Time j, State u) {
        return lambda_asym_[d - 1][(static_cast<size_t>(s - 1) * sym_[d - 1].count() +
                                    sym_[d - 1].at(i, j)) *
                                       child_width_[d - 1] +
                                   (u - 1)];
    }
    double lambda(Level d, State s, Time i, Time j) const {
        return lambda_[d - 1][static_cast<size_t>(s - 1) * sym_[d - 1].count() +
                              sym_[d - 1].at(i, j)];
    }
    double lambda_hat(Level d, State s, Time i, Time j) const {
        return lambda_hat_[d - 1][static_cast<size_t>(s - 1) * sym_[d - 1].count() +
                                  sym_[d - 1].at(i, j)];
    }
    double lambda_asym(Level d, State s, Time i, Time j, State u) const {
        return lambda_asym_[d - 1][(static_cast<size_t>(s - 1) * sym_[d - 1].count() +
                                    sym_[d - 1].at(i, j)) *
                                       child_width_[d - 1] +
                                   (u - 1)];
    }

private:
    int D_;
    Time T_;
    std::vector<int> sizes_;            // per-level alphabet sizes
    std::vector<LevelIndex> sym_;       // per level
    std::vector<size_t> child_width_;   // |S^{d+1}| for d < D, 0 at D
    std::vector<std::vector<double>> delta_hat_;
    std::vector<std::vector<double>> alpha_;
    std::vector<std::vector<double>> lambda_;
    std::vector<std::vector<double>> lambda_hat_;
    std::vector<std::vector<double>> lambda_asym_;
    ScaleVector scale_;
    bool inside_filled_ = false;
    bool outside_filled_ = false;
};

}  // namespace hscrf

#endif
