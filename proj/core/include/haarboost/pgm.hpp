#pragma once

#include <filesystem>
#include <string_view>

#include "haarboost/imaging.hpp"

namespace haarboost {

/// Reads a binary (P5) PGM with maxval <= 255. Throws LoadError naming the file on any defect.
Image read_pgm(const std::filesystem::path& path);

/// Parses P5 bytes already in memory; `name` is only used in error messages.
Image parse_pgm(std::string_view bytes, std::string_view name);

void write_pgm(const std::filesystem::path& path, const Image& image);

}  // namespace haarboost
