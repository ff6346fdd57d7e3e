#ifndef DTCWTMARK_Y4M_HPP
#define DTCWTMARK_Y4M_HPP

// YUV4MPEG2 reader/writer and raw planar YUV reader.
//
// Supported: 8-bit progressive 4:2:0 (C420, C420jpeg, C420paldv, C420mpeg2)
// and 4:4:4 (C444). An optional "XLENGTH=<n>" extension declares the frame
// count; a stream ending before that many frames is reported as truncated.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"
#include "video.hpp"

namespace dtcwtmark::y4m {

struct Header {
    int width = 0;
    int height = 0;
    std::int64_t fps_num = 0;
    std::int64_t fps_den = 1;
    ChromaFormat format = ChromaFormat::k420;
    std::optional<std::size_t> declared_frames;
};

namespace detail {

inline std::vector<std::string> split_tokens(const std::string& line)
{
    std::vector<std::string> out;
    std::istringstream in(line);
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

template <typename T>
T parse_number(std::string_view text, const std::string& token)
{
    T value{};
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end) throw ParseError("y4m: malformed header token '" + token + "'");
    return value;
}

inline std::pair<std::int64_t, std::int64_t> parse_ratio(std::string_view text, const std::string& token)
{
    const auto colon = text.find(':');
    if (colon == std::string_view::npos) throw ParseError("y4m: malformed header token '" + token + "'");
    const auto num = parse_number<std::int64_t>(text.substr(0, colon), token);
    const auto den = parse_number<std::int64_t>(text.substr(colon + 1), token);
    return {num, den};
}

inline bool read_line(std::istream& in, std::string& line)
{
    line.clear();
    char ch;
    while (in.get(ch)) {
        if (ch == '\n') return true;
        line.push_back(ch);
        if (line.size() > 4096) throw ParseError("y4m: header line too long");
    }
    return !line.empty();
}

inline std::size_t plane_bytes(const Header& h)
{
    const auto c = chroma_size(h.width, h.height, h.format);
    return static_cast<std::size_t>(h.width) * h.height +
           2 * static_cast<std::size_t>(c.width) * c.height;
}

inline Frame unpack_frame(const Header& h, const std::vector<unsigned char>& buf)
{
    Frame f(h.width, h.height, h.format);
    std::size_t pos = 0;
    for (Plane* p : {&f.y, &f.u, &f.v}) {
        for (double& s : p->values()) s = static_cast<double>(buf[pos++]);
    }
    return f;
}

inline void pack_frame(const Frame& f, std::vector<unsigned char>& buf)
{
    buf.clear();
    for (const Plane* p : {&f.y, &f.u, &f.v}) {
        for (double s : p->values()) buf.push_back(static_cast<unsigned char>(quantize_sample(s)));
    }
}

/// Exact rational for a frame rate, preferring small denominators.
inline std::pair<std::int64_t, std::int64_t> rational_fps(double fps)
{
    for (std::int64_t den : {1LL, 1001LL, 1000LL, 1000000LL}) {
        const double num = fps * static_cast<double>(den);
        if (std::abs(num - std::round(num)) < 1e-6 * den) {
            auto n = static_cast<std::int64_t>(std::llround(num));
            const auto g = std::gcd(n, den);
            return {n / g, den / g};
        }
    }
    return {static_cast<std::int64_t>(std::llround(fps * 1e6)), 1000000};
}

}  // namespace detail

inline Header parse_header(const std::string& line)
{
    const auto tokens = detail::split_tokens(line);
    if (tokens.empty() || tokens.front() != "YUV4MPEG2") {
        throw ParseError("y4m: stream does not begin with 'YUV4MPEG2' (got '" +
                         (tokens.empty() ? std::string() : tokens.front()) + "')");
    }
    Header h;
    bool have_w = false, have_h = false, have_f = false;
    for (std::size_t i = 1; i < tokens.size(); ++i) {
        const std::string& tok = tokens[i];
        const std::string_view body = std::string_view(tok).substr(1);
        switch (tok[0]) {
        case 'W':
            h.width = detail::parse_number<int>(body, tok);
            have_w = true;
            break;
        case 'H':
            h.height = detail::parse_number<int>(body, tok);
            have_h = true;
            break;
        case 'F': {
            auto [n, d] = detail::parse_ratio(body, tok);
            if (n <= 0 || d <= 0) throw ParseError("y4m: malformed header token '" + tok + "'");
            h.fps_num = n;
            h.fps_den = d;
            have_f = true;
            break;
        }
        case 'I':
            if (body != "p" && body != "?") {
                throw ParseError("y4m: unsupported interlacing in header token '" + tok + "'");
            }
            break;
        case 'A':
            detail::parse_ratio(body, tok);
            break;
        case 'C':
            if (body == "420" || body == "420jpeg" || body == "420paldv" || body == "420mpeg2") {
                h.format = ChromaFormat::k420;
            } else if (body == "444") {
                h.format = ChromaFormat::k444;
            } else {
                throw ParseError("y4m: unsupported colour space in header token '" + tok + "'");
            }
            break;
        case 'X':
            if (body.starts_with("LENGTH=")) {
                h.declared_frames = detail::parse_number<std::size_t>(body.substr(7), tok);
            }
            break;
        default:
            throw ParseError("y4m: unknown header token '" + tok + "'");
        }
    }
    if (!have_w || !have_h || !have_f) {
        throw ParseError(std::string("y4m: header missing required tag ") +
                         (!have_w ? "'W'" : !have_h ? "'H'" : "'F'"));
    }
    if (h.width <= 0 || h.height <= 0) throw ParseError("y4m: non-positive frame dimensions");
    return h;
}

inline Video read_y4m(std::istream& in)
{
    std::string line;
    if (!detail::read_line(in, line)) throw ParseError("y4m: empty stream");
    const Header h = parse_header(line);

    Video video;
    video.fps = static_cast<double>(h.fps_num) / static_cast<double>(h.fps_den);
    const std::size_t frame_bytes = detail::plane_bytes(h);
    std::vector<unsigned char> buf(frame_bytes);

    while (true) {
        const std::size_t index = video.frames.size();
        if (!detail::read_line(in, line)) break;
        if (!line.starts_with("FRAME")) {
            throw ParseError("y4m: expected 'FRAME' marker before frame " + std::to_string(index) +
                             ", got '" + line.substr(0, 16) + "'");
        }
        in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(frame_bytes));
        if (static_cast<std::size_t>(in.gcount()) != frame_bytes) {
            throw TruncationError(index, "y4m: truncated payload in frame " + std::to_string(index) +
                                             " (" + std::to_string(in.gcount()) + " of " +
                                             std::to_string(frame_bytes) + " bytes)");
        }
        video.frames.push_back(detail::unpack_frame(h, buf));
    }
    if (h.declared_frames && video.frames.size() < *h.declared_frames) {
        throw TruncationError(video.frames.size(),
                              "y4m: stream ends at frame " + std::to_string(video.frames.size()) +
                                  " but header declares " + std::to_string(*h.declared_frames));
    }
    return video;
}

inline Video read_y4m_bytes(const std::string& bytes)
{
    std::istringstream in(bytes, std::ios::binary);
    return read_y4m(in);
}

/// Samples are rounded and clamped to [0, 255] on output.
inline void write_y4m(std::ostream& out, const Video& video)
{
    if (video.empty()) throw std::invalid_argument("y4m: cannot write an empty video");
    const auto [num, den] = detail::rational_fps(video.fps);
    out << "YUV4MPEG2 W" << video.width() << " H" << video.height() << " F" << num << ':' << den
        << " Ip A1:1 C" << (video.format() == ChromaFormat::k444 ? "444" : "420") << '\n';
    std::vector<unsigned char> buf;
    for (const Frame& f : video.frames) {
        out << "FRAME\n";
        detail::pack_frame(f, buf);
        out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    }
}

inline std::string write_y4m_bytes(const Video& video)
{
    std::ostringstream out(std::ios::binary);
    write_y4m(out, video);
    return std::move(out).str();
}

/// Headerless planar 8-bit YUV; geometry comes from the caller.
struct RawDescriptor {
    int width = 0;
    int height = 0;
    double fps = 30.0;
    ChromaFormat format = ChromaFormat::k420;
};

inline Video read_raw_yuv(std::istream& in, const RawDescriptor& d)
{
    if (d.width <= 0 || d.height <= 0) throw std::invalid_argument("raw yuv: width and height must be > 0");
    if (!(d.fps > 0.0)) throw std::invalid_argument("raw yuv: fps must be > 0");
    Header h;
    h.width = d.width;
    h.height = d.height;
    h.format = d.format;
    const std::size_t frame_bytes = detail::plane_bytes(h);
    std::vector<unsigned char> buf(frame_bytes);

    Video video;
    video.fps = d.fps;
    while (true) {
        in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(frame_bytes));
        const auto got = static_cast<std::size_t>(in.gcount());
        if (got == 0) break;
        if (got != frame_bytes) {
            throw TruncationError(video.frames.size(), "raw yuv: truncated payload in frame " +
                                                           std::to_string(video.frames.size()));
        }
        video.frames.push_back(detail::unpack_frame(h, buf));
    }
    return video;
}

inline void write_raw_yuv(std::ostream& out, const Video& video)
{
    std::vector<unsigned char> buf;
    for (const Frame& f : video.frames) {
        detail::pack_frame(f, buf);
        out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    }
}

}  // namespace dtcwtmark::y4m

#endif  // DTCWTMARK_Y4M_HPP
