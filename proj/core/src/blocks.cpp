#include "gfb/blocks.hpp"

#include <cmath>

namespace gfb {

BlockLayer::BlockLayer(std::size_t dimension, std::vector<std::vector<std::size_t>> blocks,
                       std::vector<double> weights)
    : dimension_(dimension), weights_(std::move(weights)) {
    if (blocks.size() != weights_.size()) {
        throw ConfigError("BlockLayer: one weight per block is required");
    }
    std::vector<bool> seen(dimension, false);
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        if (!(weights_[b] >= 0.0)) throw ConfigError("BlockLayer: block weights must be >= 0");
        for (std::size_t i : blocks[b]) {
            if (i >= dimension) throw ConfigError("BlockLayer: block index out of range");
            if (seen[i]) {
                throw ConfigError("BlockLayer: blocks overlap at index " + std::to_string(i) +
                                  " within one layer");
            }
            seen[i] = true;
            indices_.push_back(i);
        }
        offsets_.push_back(indices_.size());
    }
}

BlockLayer BlockLayer::embedded(std::size_t offset, std::size_t dimension) const {
    if (offset + dimension_ > dimension) throw DimensionError("BlockLayer::embedded: too small");
    BlockLayer out = *this;
    out.dimension_ = dimension;
    for (auto& i : out.indices_) i += offset;
    return out;
}

std::size_t BlockStructure::num_blocks() const {
    std::size_t n = 0;
    for (const auto& l : layers) n += l.num_blocks();
    return n;
}

BlockStructure build_square_blocks(std::size_t n, std::size_t j, std::size_t s,
                                   std::vector<double> channel_weights) {
    if (s < 1) throw ConfigError("build_square_blocks: S must be >= 1");
    if (s > n) throw ConfigError("build_square_blocks: S exceeds the image size");
    if (n % s != 0) {
        throw ConfigError("build_square_blocks: S must divide N for periodic tilings");
    }
    if (channel_weights.empty()) {
        if (j == 0 || (j - 1) % 3 != 0) {
            throw ConfigError("build_square_blocks: J must equal 3*levels+1 for scale weights");
        }
        const std::size_t levels = (j - 1) / 3;
        for (std::size_t c = 0; c < j; ++c) {
            const std::size_t scale = c + 1 == j ? levels : c / 3 + 1;
            channel_weights.push_back(std::ldexp(1.0, -static_cast<int>(scale)));
        }
    }
    if (channel_weights.size() != j) {
        throw ConfigError("build_square_blocks: need one weight per channel");
    }

    const std::size_t plane = n * n;
    const std::size_t tiles = n / s;
    BlockStructure out;
    for (std::size_t a = 0; a < s; ++a) {
        for (std::size_t b = 0; b < s; ++b) {
            std::vector<std::vector<std::size_t>> blocks;
            std::vector<double> weights;
            for (std::size_t c = 0; c < j; ++c) {
                for (std::size_t ti = 0; ti < tiles; ++ti) {
                    for (std::size_t tj = 0; tj < tiles; ++tj) {
                        std::vector<std::size_t> blk;
                        blk.reserve(s * s);
                        for (std::size_t di = 0; di < s; ++di) {
                            for (std::size_t dj = 0; dj < s; ++dj) {
                                const std::size_t r = (a + ti * s + di) % n;
                                const std::size_t col = (b + tj * s + dj) % n;
                                blk.push_back(c * plane + r * n + col);
                            }
                        }
                        blocks.push_back(std::move(blk));
                        weights.push_back(channel_weights[c]);
                    }
                }
            }
            out.layers.emplace_back(plane * j, std::move(blocks), std::move(weights));
        }
    }
    return out;
}

BlockLayer tv_blocks(std::size_t n) {
    const std::size_t plane = n * n;
    std::vector<std::vector<std::size_t>> blocks(plane);
    for (std::size_t p = 0; p < plane; ++p) blocks[p] = {p, plane + p};
    return BlockLayer(2 * plane, std::move(blocks), std::vector<double>(plane, 1.0));
}

BlockLayer singleton_blocks(std::size_t dimension) {
    std::vector<std::vector<std::size_t>> blocks(dimension);
    for (std::size_t p = 0; p < dimension; ++p) blocks[p] = {p};
    return BlockLayer(dimension, std::move(blocks), std::vector<double>(dimension, 1.0));
}

double block_norm(const Vector& x, const BlockLayer& layer) {
    if (x.size() != layer.dimension()) throw DimensionError("block_norm: dimension mismatch");
    double total = 0.0;
    for (std::size_t b = 0; b < layer.num_blocks(); ++b) {
        double sq = 0.0;
        for (std::size_t i : layer.block(b)) sq += x[i] * x[i];
        total += layer.weight(b) * std::sqrt(sq);
    }
    return total;
}

}  // namespace gfb
