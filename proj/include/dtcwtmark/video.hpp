#ifndef DTCWTMARK_VIDEO_HPP
#define DTCWTMARK_VIDEO_HPP

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "plane.hpp"

namespace dtcwtmark {

enum class ChromaFormat { k420, k444 };

/// Chroma plane size for a luma size: ceil(w/2) x ceil(h/2) under 4:2:0.
struct PlaneSize {
    int width = 0;
    int height = 0;
};

inline PlaneSize chroma_size(int width, int height, ChromaFormat format) noexcept
{
    if (format == ChromaFormat::k444) return {width, height};
    return {(width + 1) / 2, (height + 1) / 2};
}

/// One frame as three planar channels; samples nominally in [0, 255].
struct Frame {
    Plane y;
    Plane u;
    Plane v;
    ChromaFormat format = ChromaFormat::k420;

    Frame() = default;
    Frame(int width, int height, ChromaFormat fmt, double luma = 0.0, double chroma = 128.0)
        : y(height, width, luma), format(fmt)
    {
        const auto c = chroma_size(width, height, fmt);
        u = Plane(c.height, c.width, chroma);
        v = Plane(c.height, c.width, chroma);
    }

    int width() const noexcept { return y.width(); }
    int height() const noexcept { return y.height(); }

    friend bool operator==(const Frame&, const Frame&) = default;
};

/// Throws std::invalid_argument when the plane sizes disagree with the
/// declared subsampling or a sample is not finite.
inline void validate(const Frame& f)
{
    const auto c = chroma_size(f.width(), f.height(), f.format);
    for (const Plane* p : {&f.u, &f.v}) {
        if (p->width() != c.width || p->height() != c.height) {
            throw std::invalid_argument("Frame: chroma plane " + std::to_string(p->width()) + "x" +
                                        std::to_string(p->height()) + " does not match expected " +
                                        std::to_string(c.width) + "x" + std::to_string(c.height));
        }
    }
    for (const Plane* p : {&f.y, &f.u, &f.v}) {
        for (double s : p->values()) {
            if (!std::isfinite(s)) throw std::invalid_argument("Frame: non-finite sample");
        }
    }
}

struct Video {
    std::vector<Frame> frames;
    double fps = 30.0;
    // Optional analysis metadata: original timestamp (seconds) of each frame
    // after a temporal attack. Empty when not tracked; never used by the
    // extractor.
    std::vector<double> source_times;

    std::size_t frame_count() const noexcept { return frames.size(); }
    bool empty() const noexcept { return frames.empty(); }
    double duration_seconds() const noexcept { return static_cast<double>(frames.size()) / fps; }
    int width() const noexcept { return frames.empty() ? 0 : frames.front().width(); }
    int height() const noexcept { return frames.empty() ? 0 : frames.front().height(); }
    ChromaFormat format() const noexcept
    {
        return frames.empty() ? ChromaFormat::k420 : frames.front().format;
    }
};

inline void validate(const Video& v)
{
    if (!(v.fps > 0.0) || !std::isfinite(v.fps)) {
        throw std::invalid_argument("Video: fps must be finite and > 0");
    }
    for (std::size_t i = 0; i < v.frames.size(); ++i) {
        const Frame& f = v.frames[i];
        if (f.width() != v.width() || f.height() != v.height() || f.format != v.format()) {
            throw std::invalid_argument("Video: frame " + std::to_string(i) +
                                        " differs in size or subsampling from frame 0");
        }
        validate(f);
    }
}

/// Nearest-neighbour upsampling of a chroma plane to luma resolution.
inline Plane upsample_chroma(const Plane& c, int width, int height, ChromaFormat format)
{
    if (format == ChromaFormat::k444) return c;
    Plane out(height, width);
    for (int r = 0; r < height; ++r) {
        for (int col = 0; col < width; ++col) out(r, col) = c(r / 2, col / 2);
    }
    return out;
}

/// 2x2 mean downsampling back to chroma resolution (partial blocks at odd
/// edges average the samples that exist).
inline Plane downsample_chroma(const Plane& full, ChromaFormat format)
{
    if (format == ChromaFormat::k444) return full;
    const auto c = chroma_size(full.width(), full.height(), format);
    Plane out(c.height, c.width);
    for (int r = 0; r < c.height; ++r) {
        for (int col = 0; col < c.width; ++col) {
            double s = 0.0;
            int n = 0;
            for (int dr = 0; dr < 2; ++dr) {
                for (int dc = 0; dc < 2; ++dc) {
                    const int rr = 2 * r + dr;
                    const int cc = 2 * col + dc;
                    if (rr < full.height() && cc < full.width()) {
                        s += full(rr, cc);
                        ++n;
                    }
                }
            }
            out(r, col) = s / n;
        }
    }
    return out;
}

/// Round to the nearest integer and clamp to [0, 255], as a file write would.
inline double quantize_sample(double s) noexcept
{
    if (!(s > 0.0)) return 0.0;
    if (s >= 255.0) return 255.0;
    return std::floor(s + 0.5);
}

inline Frame quantized(Frame f)
{
    for (Plane* p : {&f.y, &f.u, &f.v}) {
        for (double& s : p->values()) s = quantize_sample(s);
    }
    return f;
}

inline Video quantized(Video v)
{
    for (Frame& f : v.frames) f = quantized(std::move(f));
    return v;
}

}  // namespace dtcwtmark

#endif  // DTCWTMARK_VIDEO_HPP
