#pragma once

#include <filesystem>

#include "gfb/vector.hpp"

namespace gfb {

/// Reads a binary (P5) 8-bit PGM; values are mapped linearly to [0, 1].
/// Only square images are accepted.
Vector read_pgm(const std::filesystem::path& path);

/// Writes a binary (P5) 8-bit PGM. Values are clipped to [0, 1] and
/// rounded to the nearest of 256 levels.
void write_pgm(const std::filesystem::path& path, const Vector& image);

}  // namespace gfb
