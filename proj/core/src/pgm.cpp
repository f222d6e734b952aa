#include "gfb/pgm.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <vector>

namespace gfb {

namespace {

// Next header token, skipping whitespace and '#' comments.
std::string next_token(std::istream& in) {
    std::string tok;
    int ch;
    while ((ch = in.get()) != EOF) {
        if (ch == '#') {
            while ((ch = in.get()) != EOF && ch != '\n') {
            }
            continue;
        }
        if (std::isspace(ch)) {
            if (!tok.empty()) break;
            continue;
        }
        tok.push_back(static_cast<char>(ch));
    }
    return tok;
}

std::size_t parse_size(const std::string& tok, const std::filesystem::path& path) {
    try {
        std::size_t pos = 0;
        const long v = std::stol(tok, &pos);
        if (pos != tok.size() || v <= 0) throw std::invalid_argument(tok);
        return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
        throw Error("read_pgm: malformed header in " + path.string());
    }
}

}  // namespace

Vector read_pgm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("read_pgm: cannot open " + path.string());
    if (next_token(in) != "P5") throw Error("read_pgm: " + path.string() + " is not a P5 PGM");
    const std::size_t w = parse_size(next_token(in), path);
    const std::size_t h = parse_size(next_token(in), path);
    const std::size_t maxval = parse_size(next_token(in), path);
    if (maxval > 255) throw Error("read_pgm: only 8-bit PGM is supported");
    if (w != h) throw DimensionError("read_pgm: image must be square, got " +
                                     std::to_string(w) + "x" + std::to_string(h));
    std::vector<unsigned char> raw(w * h);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (in.gcount() != static_cast<std::streamsize>(raw.size())) {
        throw Error("read_pgm: truncated pixel data in " + path.string());
    }
    Vector img(Shape::image(w));
    for (std::size_t p = 0; p < raw.size(); ++p) {
        img[p] = static_cast<double>(raw[p]) / static_cast<double>(maxval);
    }
    return img;
}

void write_pgm(const std::filesystem::path& path, const Vector& image) {
    const Shape& s = image.shape();
    if (s.channels != 1) throw DimensionError("write_pgm: expected a single-channel image");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("write_pgm: cannot open " + path.string());
    out << "P5\n" << s.cols << ' ' << s.rows << "\n255\n";
    std::vector<unsigned char> raw(s.size());
    for (std::size_t p = 0; p < raw.size(); ++p) {
        const double v = std::clamp(std::isfinite(image[p]) ? image[p] : 0.0, 0.0, 1.0);
        raw[p] = static_cast<unsigned char>(std::lround(v * 255.0));
    }
    out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (!out) throw Error("write_pgm: write failed for " + path.string());
}

}  // namespace gfb
