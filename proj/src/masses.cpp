#include "hscrf/masses.hpp"

namespace hscrf {

MassLattice::MassLattice(const Topology& topology, Time T) : D_(topology.depth()), T_(T) {
    sizes_.resize(D_);
    for (Level d = 1; d <= D_; ++d) sizes_[d - 1] = topology.num_states(d);
    sym_.resize(D_);
    child_width_.assign(D_, 0);
    for (Level d = 1; d <= D_; ++d) {
        sym_[d - 1].T = T;
        if (d == 1)
            sym_[d - 1].shape = LevelIndex::Shape::FirstRow;
        else if (d == D_)
            sym_[d - 1].shape = LevelIndex::Shape::Diagonal;
        else
            sym_[d - 1].shape = LevelIndex::Shape::Triangular;
        if (d < D_) child_width_[d - 1] = static_cast<size_t>(topology.num_states(d + 1));
    }
    delta_hat_.resize(D_);
    alpha_.resize(D_);
    lambda_.resize(D_);
    lambda_hat_.resize(D_);
    lambda_asym_.resize(D_);
    for (Level d = 1; d <= D_; ++d) {
        const size_t sym_count = static_cast<size_t>(topology.num_states(d)) * sym_[d - 1].count();
        delta_hat_[d - 1].assign(sym_count, 0.0);
        lambda_[d - 1].assign(sym_count, 0.0);
        lambda_hat_[d - 1].assign(sym_count, 0.0);
        if (d < D_) {
            alpha_[d - 1].assign(sym_count * child_width_[d - 1], 0.0);
            lambda_asym_[d - 1].assign(sym_count * child_width_[d - 1], 0.0);
        }
    }
    scale_.init(T);
}

}  // namespace hscrf
