#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "image.hpp"

namespace pesc::io {

namespace detail {

inline std::string read_all(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open '" + path.string() + "'");
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Next whitespace-delimited header token, skipping '#' comments.
inline std::string header_token(const std::string& buf, std::size_t& pos) {
    while (pos < buf.size()) {
        if (buf[pos] == '#') {
            while (pos < buf.size() && buf[pos] != '\n') ++pos;
        } else if (std::isspace(static_cast<unsigned char>(buf[pos]))) {
            ++pos;
        } else {
            break;
        }
    }
    const std::size_t start = pos;
    while (pos < buf.size() && !std::isspace(static_cast<unsigned char>(buf[pos]))) ++pos;
    if (start == pos) throw FormatError("truncated PGM header");
    return buf.substr(start, pos - start);
}

inline std::size_t header_number(const std::string& buf, std::size_t& pos) {
    const std::string tok = header_token(buf, pos);
    if (!std::all_of(tok.begin(), tok.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
        throw FormatError("bad PGM header field '" + tok + "'");
    return std::stoul(tok);
}

}  // namespace detail

/// Binary 8-bit PGM (P5, maxval <= 255).
inline Image read_pgm(const std::filesystem::path& path) {
    const std::string buf = detail::read_all(path);
    std::size_t pos = 0;
    if (detail::header_token(buf, pos) != "P5")
        throw FormatError("'" + path.string() + "' is not a binary PGM (P5)");
    const std::size_t w = detail::header_number(buf, pos);
    const std::size_t h = detail::header_number(buf, pos);
    const std::size_t maxval = detail::header_number(buf, pos);
    if (w == 0 || h == 0) throw FormatError("PGM dimensions must be positive");
    if (maxval == 0 || maxval > 255) throw FormatError("only 8-bit PGM (maxval <= 255) is supported");
    ++pos;  // single whitespace after maxval
    if (buf.size() < pos + w * h) throw FormatError("PGM pixel data truncated");
    std::vector<double> data(w * h);
    for (std::size_t i = 0; i < w * h; ++i)
        data[i] = static_cast<double>(static_cast<unsigned char>(buf[pos + i]));
    return Image(w, h, std::move(data));
}

/// Quantizes to 8 bits: clamp to [0, 255], round half away from zero.
inline unsigned char quantize(double v) {
    return static_cast<unsigned char>(std::lround(std::clamp(v, 0.0, 255.0)));
}

inline Image quantized(const Image& img) {
    Image out = img;
    for (double& v : out.data()) v = quantize(v);
    return out;
}

inline void write_pgm(const std::filesystem::path& path, const Image& img) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("cannot write '" + path.string() + "'");
    out << "P5\n" << img.width() << ' ' << img.height() << "\n255\n";
    std::string bytes(img.size(), '\0');
    std::transform(img.begin(), img.end(), bytes.begin(),
                   [](double v) { return static_cast<char>(quantize(v)); });
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw FormatError("failed writing '" + path.string() + "'");
}

/// Text kernel: first line N_h, then N_h rows of N_h reals. Taps are used verbatim.
inline Kernel parse_kernel(const std::string& text) {
    std::istringstream in(text);
    long long n = 0;
    if (!(in >> n) || n <= 0) throw FormatError("kernel file must start with a positive size");
    std::vector<double> taps;
    double t = 0.0;
    while (in >> t) taps.push_back(t);
    if (!in.eof()) throw FormatError("kernel file contains a non-numeric tap");
    const auto size = static_cast<std::size_t>(n);
    if (taps.size() != size * size)
        throw FormatError("kernel of size " + std::to_string(size) + " needs " +
                          std::to_string(size * size) + " taps, found " +
                          std::to_string(taps.size()));
    return Kernel(size, std::move(taps));
}

inline Kernel read_kernel(const std::filesystem::path& path) {
    return parse_kernel(detail::read_all(path));
}

inline void write_kernel(const std::filesystem::path& path, const Kernel& k) {
    std::ofstream out(path);
    if (!out) throw FormatError("cannot write '" + path.string() + "'");
    out.precision(17);
    out << k.size() << '\n';
    for (std::size_t r = 0; r < k.size(); ++r) {
        for (std::size_t c = 0; c < k.size(); ++c) out << (c ? " " : "") << k.taps()[r * k.size() + c];
        out << '\n';
    }
}

inline void write_lines(const std::filesystem::path& path, const std::vector<std::string>& lines) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("cannot write '" + path.string() + "'");
    for (const auto& l : lines) out << l << '\n';
}

inline std::vector<std::string> read_lines(const std::filesystem::path& path) {
    std::istringstream in(detail::read_all(path));
    std::vector<std::string> lines;
    for (std::string l; std::getline(in, l);) lines.push_back(l);
    return lines;
}

}  // namespace pesc::io
