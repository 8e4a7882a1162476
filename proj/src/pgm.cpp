#include "qtl/pgm.hpp"

#include <bit>
#include <cctype>
#include <charconv>
#include <fstream>
#include <iterator>
#include <string>

#include "qtl/errors.hpp"

namespace qtl {

namespace {

class Cursor {
  public:
    explicit Cursor(std::string_view s) : s_(s) {}

    void skip_space_and_comments() {
        while (pos_ < s_.size()) {
            const char c = s_[pos_];
            if (c == '#') {
                while (pos_ < s_.size() && s_[pos_] != '\n') ++pos_;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos_;
            } else {
                break;
            }
        }
    }

    std::size_t read_uint(const char* what) {
        skip_space_and_comments();
        std::size_t v = 0;
        const char* first = s_.data() + pos_;
        const char* last = s_.data() + s_.size();
        auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec != std::errc{} || ptr == first) {
            throw DataError(std::string("PGM: expected ") + what);
        }
        pos_ += static_cast<std::size_t>(ptr - first);
        return v;
    }

    std::size_t pos() const { return pos_; }
    void advance(std::size_t n) { pos_ += n; }

  private:
    std::string_view s_;
    std::size_t pos_ = 0;
};

std::uint8_t rescale(std::size_t v, std::size_t maxval) {
    if (v > maxval) throw DataError("PGM: sample exceeds maxval");
    if (maxval == 255) return static_cast<std::uint8_t>(v);
    return static_cast<std::uint8_t>((v * 255 + maxval / 2) / maxval);
}

}  // namespace

PgmRaster parse_pgm(std::string_view bytes) {
    if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '2' && bytes[1] != '5')) {
        throw DataError("PGM: missing P2/P5 magic");
    }
    const bool binary = bytes[1] == '5';
    Cursor cur(bytes);
    cur.advance(2);
    PgmRaster r;
    r.width = cur.read_uint("width");
    r.height = cur.read_uint("height");
    const std::size_t maxval = cur.read_uint("maxval");
    if (r.width == 0 || r.height == 0) throw DataError("PGM: zero dimension");
    if (maxval == 0 || maxval > 65535) throw DataError("PGM: maxval out of range");
    const std::size_t count = r.width * r.height;
    r.pixels.reserve(count);
    if (binary) {
        // Exactly one whitespace byte separates the header from the raster.
        std::size_t p = cur.pos() + 1;
        const std::size_t bps = maxval < 256 ? 1 : 2;
        if (p + count * bps > bytes.size()) throw DataError("PGM: truncated raster");
        for (std::size_t i = 0; i < count; ++i) {
            std::size_t v = static_cast<unsigned char>(bytes[p]);
            if (bps == 2) v = (v << 8) | static_cast<unsigned char>(bytes[p + 1]);
            p += bps;
            r.pixels.push_back(rescale(v, maxval));
        }
    } else {
        for (std::size_t i = 0; i < count; ++i) r.pixels.push_back(rescale(cur.read_uint("sample"), maxval));
    }
    return r;
}

PgmRaster read_pgm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    try {
        return parse_pgm(bytes);
    } catch (const DataError& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

GrayImage center_crop_pow2(const PgmRaster& raster) {
    const std::size_t side = std::bit_floor(std::min(raster.width, raster.height));
    if (side < 2) {
        throw DataError("PGM: image " + std::to_string(raster.width) + "x" +
                        std::to_string(raster.height) + " too small for a power-of-two crop");
    }
    const std::size_t x0 = (raster.width - side) / 2;
    const std::size_t y0 = (raster.height - side) / 2;
    std::vector<std::uint8_t> px;
    px.reserve(side * side);
    for (std::size_t y = 0; y < side; ++y) {
        for (std::size_t x = 0; x < side; ++x) px.push_back(raster.pixels[(y0 + y) * raster.width + x0 + x]);
    }
    return GrayImage(side, std::move(px));
}

GrayImage load_pgm_image(const std::filesystem::path& path) {
    return center_crop_pow2(read_pgm(path));
}

void write_pgm(const std::filesystem::path& path, const GrayImage& image) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    out << "P5\n" << image.side() << ' ' << image.side() << "\n255\n";
    out.write(reinterpret_cast<const char*>(image.pixels().data()),
              static_cast<std::streamsize>(image.size()));
}

}  // namespace qtl
