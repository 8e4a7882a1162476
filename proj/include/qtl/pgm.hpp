#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string_view>
#include <vector>

#include "qtl/embeddings.hpp"

namespace qtl {

/// Raw grayscale raster as read from a PGM file, scaled to 0..255.
struct PgmRaster {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<std::uint8_t> pixels;  // row-major
};

/// Parses plain (P2) or binary (P5) PGM, including '#' comments. Samples with
/// maxval != 255 are rescaled to 0..255. Throws DataError on malformed input.
PgmRaster parse_pgm(std::string_view bytes);
PgmRaster read_pgm(const std::filesystem::path& path);

/// Center-crops to the largest power-of-two square that fits. Throws DataError
/// when that square would be smaller than 2x2.
GrayImage center_crop_pow2(const PgmRaster& raster);

/// Convenience: read_pgm followed by center_crop_pow2.
GrayImage load_pgm_image(const std::filesystem::path& path);

/// Writes a binary (P5) PGM with maxval 255.
void write_pgm(const std::filesystem::path& path, const GrayImage& image);

}  // namespace qtl
