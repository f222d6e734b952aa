#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "gfb/vector.hpp"

namespace gfb {

/// One non-overlapping block structure over a vector of fixed dimension:
/// a list of pairwise-disjoint index sets with a positive weight each.
/// Indices not covered by any block are left untouched by the block prox.
class BlockLayer {
public:
    BlockLayer() = default;

    /// Throws ConfigError if two blocks share an index, an index is out of
    /// range, or a weight is negative.
    BlockLayer(std::size_t dimension, std::vector<std::vector<std::size_t>> blocks,
               std::vector<double> weights);

    std::size_t dimension() const { return dimension_; }
    std::size_t num_blocks() const { return weights_.size(); }
    std::span<const std::size_t> block(std::size_t b) const {
        return {indices_.data() + offsets_[b], offsets_[b + 1] - offsets_[b]};
    }
    double weight(std::size_t b) const { return weights_[b]; }

    /// Same blocks over a larger concatenated vector, shifted by `offset`.
    BlockLayer embedded(std::size_t offset, std::size_t dimension) const;

private:
    std::size_t dimension_ = 0;
    std::vector<std::size_t> offsets_{0};
    std::vector<std::size_t> indices_;
    std::vector<double> weights_;
};

/// A possibly overlapping block structure, given as a union of
/// non-overlapping layers.
struct BlockStructure {
    std::vector<BlockLayer> layers;

    std::size_t num_blocks() const;
};

/// All S x S spatial blocks (periodic wrap) within every channel of an
/// N x N x J coefficient stack, split into S^2 layers indexed by the tile
/// offset (a, b). Block weights are `channel_weights[c]`; when empty, the
/// wavelet-scale rule 2^-j is used with j = c/3 + 1 and j = (J-1)/3 for the
/// last channel, which requires J = 3*levels + 1.
BlockStructure build_square_blocks(std::size_t n, std::size_t j, std::size_t s,
                                   std::vector<double> channel_weights = {});

/// Pixelwise pairs (v_p, h_p) of an N x N x 2 gradient field, weight 1.
BlockLayer tv_blocks(std::size_t n);

/// Every coordinate on its own with weight 1.
BlockLayer singleton_blocks(std::size_t dimension);

/// sum_b w_b ||x_b||.
double block_norm(const Vector& x, const BlockLayer& layer);

}  // namespace gfb
