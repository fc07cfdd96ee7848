#include "debiaskf/askf.hpp"

#include <string>

namespace debiaskf {

AskfLayout AskfLayout::make(const std::vector<int>& target_ids, const std::vector<int>& state_dims,
                            int bias_dim) {
    if (target_ids.size() != state_dims.size()) throw DimensionMismatch("layout: ids vs dims");
    AskfLayout layout;
    int off = 0;
    for (size_t i = 0; i < target_ids.size(); ++i) {
        layout.targets.push_back({target_ids[i], off, state_dims[i]});
        off += state_dims[i];
    }
    layout.bias_offset = off;
    layout.bias_dim = bias_dim;
    return layout;
}

AskfState askf_predict(const AskfState& state, const Matrix& f, const Matrix& q) {
    if (f.rows() != state.layout.total_dim()) throw DimensionMismatch("askf_predict: F dim");
    return {state.layout, kf_predict(state.belief, f, q)};
}

AskfState askf_update_gain(const AskfState& state, const Vec& z, const Matrix& h, const Matrix& r,
                           const Vec* zhat) {
    return {state.layout, kf_update_gain(state.belief, z, h, r, zhat)};
}

AskfState askf_update_info(const AskfState& state, const Vec& z, const Matrix& h, const Matrix& r,
                           const Vec* zhat) {
    return {state.layout, kf_update_info(state.belief, z, h, r, zhat)};
}

CrossBlocks extract_cross_blocks(const AskfState& state) {
    const auto& lay = state.layout;
    const Matrix& p = state.belief.cov;
    CrossBlocks blocks;
    const int n = lay.n_targets();
    blocks.t.resize(static_cast<size_t>(n));
    for (int m = 0; m < n; ++m) {
        auto& row = blocks.t[static_cast<size_t>(m)];
        row.reserve(static_cast<size_t>(n));
        for (int k = 0; k < n; ++k)
            row.push_back(p.block(lay.slot(m).offset, lay.slot(k).offset, lay.slot(m).s_dim,
                                  lay.slot(k).s_dim));
        blocks.tb.push_back(p.block(lay.slot(m).offset, lay.bias_offset, lay.slot(m).s_dim, lay.bias_dim));
    }
    blocks.b = p.block(lay.bias_offset, lay.bias_offset, lay.bias_dim, lay.bias_dim);
    return blocks;
}

Matrix assemble_cross_blocks(const CrossBlocks& blocks) {
    const int n = static_cast<int>(blocks.t.size());
    int dim = blocks.b.rows();
    std::vector<int> offsets(static_cast<size_t>(n));
    int off = 0;
    for (int m = 0; m < n; ++m) {
        offsets[static_cast<size_t>(m)] = off;
        off += blocks.t[static_cast<size_t>(m)][static_cast<size_t>(m)].rows();
    }
    dim += off;
    Matrix p(dim, dim);
    for (int m = 0; m < n; ++m) {
        for (int k = 0; k < n; ++k)
            p.set_block(offsets[static_cast<size_t>(m)], offsets[static_cast<size_t>(k)],
                        blocks.t[static_cast<size_t>(m)][static_cast<size_t>(k)]);
        p.set_block(offsets[static_cast<size_t>(m)], off, blocks.tb[static_cast<size_t>(m)]);
        p.set_block(off, offsets[static_cast<size_t>(m)], blocks.tb[static_cast<size_t>(m)].transpose());
    }
    p.set_block(off, off, blocks.b);
    return p;
}

Vec askf_target_mean(const AskfState& state, int idx) {
    const auto& slot = state.layout.slot(idx);
    return state.belief.mean.segment(slot.offset, slot.s_dim);
}

Vec askf_bias_mean(const AskfState& state) {
    return state.belief.mean.segment(state.layout.bias_offset, state.layout.bias_dim);
}

}  // namespace debiaskf
