#ifndef DTCWTMARK_ATTACKS_HPP
#define DTCWTMARK_ATTACKS_HPP

// Deterministic temporal, geometric and signal attacks.
//
// Temporal attacks fill Video::source_times with the original timestamp of
// every output frame; the receiver never reads it.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "random.hpp"
#include "video.hpp"

namespace dtcwtmark::attacks {

enum class FrameRateMode { kNearest, kBlend };

namespace detail {

inline std::vector<double> source_times_of(const Video& v)
{
    if (v.source_times.size() == v.frames.size()) return v.source_times;
    std::vector<double> t(v.frames.size());
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = static_cast<double>(i) / v.fps;
    return t;
}

inline Frame blend(const Frame& a, const Frame& b, double w)
{
    Frame out = a;
    for (auto [dst, src] : {std::pair{&out.y, &b.y}, std::pair{&out.u, &b.u}, std::pair{&out.v, &b.v}}) {
        auto d = dst->values();
        auto s = src->values();
        for (std::size_t i = 0; i < d.size(); ++i) d[i] = (1.0 - w) * d[i] + w * s[i];
    }
    return out;
}

inline void require_fraction(double fraction, const char* who)
{
    if (!(fraction >= 0.0) || fraction > 0.5) {
        throw std::invalid_argument(std::string(who) + ": fraction must be in [0, 0.5], got " +
                                    std::to_string(fraction));
    }
}

/// `count` distinct indices from [0, n), ascending.
inline std::vector<std::size_t> pick_indices(std::size_t n, std::size_t count, Rng& rng)
{
    std::vector<std::size_t> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = i;
    for (std::size_t i = 0; i < count && i < n; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
        std::swap(all[i], all[j]);
    }
    all.resize(std::min(count, n));
    std::sort(all.begin(), all.end());
    return all;
}

/// Bilinear sample at pixel-centre coordinates, clamped to the edge.
inline double sample(const Plane& p, double x, double y) noexcept
{
    x = std::clamp(x, 0.0, static_cast<double>(p.width() - 1));
    y = std::clamp(y, 0.0, static_cast<double>(p.height() - 1));
    const int x0 = static_cast<int>(x);
    const int y0 = static_cast<int>(y);
    const int x1 = std::min(x0 + 1, p.width() - 1);
    const int y1 = std::min(y0 + 1, p.height() - 1);
    const double fx = x - x0, fy = y - y0;
    return (1 - fy) * ((1 - fx) * p(y0, x0) + fx * p(y0, x1)) + fy * ((1 - fx) * p(y1, x0) + fx * p(y1, x1));
}

/// Resample every plane of every frame through `map`, which takes output
/// pixel coordinates plus plane size and returns the source position.
template <typename Map>
Video warp(const Video& video, Map map)
{
    Video out = video;
    for (Frame& f : out.frames) {
        for (Plane* p : {&f.y, &f.u, &f.v}) {
            const Plane src = *p;
            const int w = src.width(), h = src.height();
            for (int r = 0; r < h; ++r) {
                for (int c = 0; c < w; ++c) {
                    const auto [sx, sy] = map(c, r, w, h);
                    (*p)(r, c) = sample(src, sx, sy);
                }
            }
        }
    }
    return out;
}

inline Plane resize_bilinear(const Plane& src, int width, int height)
{
    Plane out(height, width);
    const double sx = static_cast<double>(src.width()) / width;
    const double sy = static_cast<double>(src.height()) / height;
    for (int r = 0; r < height; ++r) {
        for (int c = 0; c < width; ++c) out(r, c) = sample(src, (c + 0.5) * sx - 0.5, (r + 0.5) * sy - 0.5);
    }
    return out;
}

}  // namespace detail

// ---- temporal -----------------------------------------------------------

/// Resample the timeline to `target_fps`, keeping the duration.
inline Video convert_frame_rate(const Video& video, double target_fps, FrameRateMode mode = FrameRateMode::kNearest)
{
    if (!(target_fps > 0.0) || !std::isfinite(target_fps)) {
        throw std::invalid_argument("convert_frame_rate: target fps must be > 0, got " + std::to_string(target_fps));
    }
    if (video.empty()) return video;
    const auto times = detail::source_times_of(video);
    const std::size_t n = video.frames.size();
    const double exact = static_cast<double>(n) * target_fps / video.fps;
    const auto n_out = static_cast<std::size_t>(std::max(1.0, std::floor(exact + 0.5)));

    Video out;
    out.fps = target_fps;
    out.frames.reserve(n_out);
    out.source_times.reserve(n_out);
    for (std::size_t i = 0; i < n_out; ++i) {
        const double pos = static_cast<double>(i) * video.fps / target_fps;
        if (mode == FrameRateMode::kNearest) {
            const auto src = std::min(n - 1, static_cast<std::size_t>(std::floor(pos + 0.5 + 1e-9)));
            out.frames.push_back(video.frames[src]);
            out.source_times.push_back(times[src]);
        } else {
            const auto lo = std::min(n - 1, static_cast<std::size_t>(std::floor(pos + 1e-9)));
            const auto hi = std::min(n - 1, lo + 1);
            const double w = std::clamp(pos - static_cast<double>(lo), 0.0, 1.0);
            out.frames.push_back(w < 1e-9 || hi == lo ? video.frames[lo] : detail::blend(video.frames[lo], video.frames[hi], w));
            out.source_times.push_back((1.0 - w) * times[lo] + w * times[hi]);
        }
    }
    return out;
}

/// Remove round(fraction * n) frames; fps metadata is unchanged.
inline Video drop_frames(const Video& video, double fraction, std::uint64_t seed)
{
    detail::require_fraction(fraction, "drop_frames");
    Rng rng(seed);
    const auto times = detail::source_times_of(video);
    const auto count = static_cast<std::size_t>(std::floor(fraction * video.frames.size() + 0.5));
    const auto dropped = detail::pick_indices(video.frames.size(), count, rng);

    Video out;
    out.fps = video.fps;
    std::size_t k = 0;
    for (std::size_t i = 0; i < video.frames.size(); ++i) {
        if (k < dropped.size() && dropped[k] == i) {
            ++k;
            continue;
        }
        out.frames.push_back(video.frames[i]);
        out.source_times.push_back(times[i]);
    }
    return out;
}

/// Duplicate round(fraction * n) frames in place (each copy follows its source).
inline Video insert_frames(const Video& video, double fraction, std::uint64_t seed)
{
    detail::require_fraction(fraction, "insert_frames");
    Rng rng(seed);
    const auto times = detail::source_times_of(video);
    const auto count = static_cast<std::size_t>(std::floor(fraction * video.frames.size() + 0.5));
    const auto chosen = detail::pick_indices(video.frames.size(), count, rng);

    Video out;
    out.fps = video.fps;
    std::size_t k = 0;
    for (std::size_t i = 0; i < video.frames.size(); ++i) {
        out.frames.push_back(video.frames[i]);
        out.source_times.push_back(times[i]);
        if (k < chosen.size() && chosen[k] == i) {
            out.frames.push_back(video.frames[i]);
            out.source_times.push_back(times[i]);
            ++k;
        }
    }
    return out;
}

/// Exchange `pair_count` pairs of frames at most 3 positions apart.
inline Video swap_frames(const Video& video, std::size_t pair_count, std::uint64_t seed)
{
    Video out = video;
    out.source_times = detail::source_times_of(video);
    const std::size_t n = out.frames.size();
    if (n < 2) return out;
    Rng rng(seed);
    for (std::size_t p = 0; p < pair_count; ++p) {
        const std::size_t i = static_cast<std::size_t>(rng.below(n - 1));
        const std::size_t distance = 1 + static_cast<std::size_t>(rng.below(3));
        const std::size_t j = std::min(n - 1, i + distance);
        std::swap(out.frames[i], out.frames[j]);
        std::swap(out.source_times[i], out.source_times[j]);
    }
    return out;
}

/// Replace round(fraction * n) interior frames with the mean of their neighbours.
inline Video average_frames(const Video& video, double fraction, std::uint64_t seed)
{
    detail::require_fraction(fraction, "average_frames");
    Video out = video;
    out.source_times = detail::source_times_of(video);
    if (video.frames.size() < 3) return out;
    Rng rng(seed);
    const std::size_t interior = video.frames.size() - 2;
    const auto count = static_cast<std::size_t>(std::floor(fraction * video.frames.size() + 0.5));
    for (std::size_t i : detail::pick_indices(interior, count, rng)) {
        out.frames[i + 1] = detail::blend(video.frames[i], video.frames[i + 2], 0.5);
    }
    return out;
}

// ---- geometric ----------------------------------------------------------

/// Rotate about the centre, crop the largest same-aspect rectangle inside
/// the rotated content and scale it back to the original size. The three
/// steps are composed into one bilinear resampling.
inline Video rotate_crop(const Video& video, double angle_degrees)
{
    if (!(std::abs(angle_degrees) <= 45.0)) {
        throw std::invalid_argument("rotate_crop: |angle| must be <= 45 degrees, got " + std::to_string(angle_degrees));
    }
    const double theta = angle_degrees * std::numbers::pi / 180.0;
    const double cs = std::cos(theta), sn = std::sin(theta);
    return detail::warp(video, [&](int c, int r, int w, int h) {
        const double ac = std::abs(cs), as = std::abs(sn);
        const double scale = std::min(w / (w * ac + h * as), h / (w * as + h * ac));
        const double u = (c + 0.5 - w / 2.0) * scale;
        const double v = (r + 0.5 - h / 2.0) * scale;
        return std::pair{cs * u + sn * v + w / 2.0 - 0.5, -sn * u + cs * v + h / 2.0 - 0.5};
    });
}

/// Upscale by percent/100 and centre-crop back to the original size.
inline Video upscale_crop(const Video& video, double percent)
{
    if (!(percent >= 100.0) || percent > 200.0) {
        throw std::invalid_argument("upscale_crop: percent must be in [100, 200], got " + std::to_string(percent));
    }
    const double scale = percent / 100.0;
    return detail::warp(video, [&](int c, int r, int w, int h) {
        return std::pair{(c + 0.5 - w / 2.0) / scale + w / 2.0 - 0.5, (r + 0.5 - h / 2.0) / scale + h / 2.0 - 0.5};
    });
}

/// Downscale by `factor` and scale back up to the original size.
inline Video downscale(const Video& video, double factor)
{
    if (!(factor > 0.0) || factor > 1.0) {
        throw std::invalid_argument("downscale: factor must be in (0, 1], got " + std::to_string(factor));
    }
    Video out = video;
    for (Frame& f : out.frames) {
        for (Plane* p : {&f.y, &f.u, &f.v}) {
            const int w = p->width(), h = p->height();
            const int dw = std::max(1, static_cast<int>(std::lround(w * factor)));
            const int dh = std::max(1, static_cast<int>(std::lround(h * factor)));
            *p = detail::resize_bilinear(detail::resize_bilinear(*p, dw, dh), w, h);
        }
    }
    return out;
}

// ---- signal -------------------------------------------------------------

/// I.i.d. zero-mean Gaussian noise, clamped to [0, 255].
inline Video add_noise(const Video& video, double sigma, std::uint64_t seed)
{
    if (!(sigma >= 0.0)) throw std::invalid_argument("add_noise: sigma must be >= 0");
    Video out = video;
    if (sigma == 0.0) return out;
    Rng rng(seed);
    for (Frame& f : out.frames) {
        for (Plane* p : {&f.y, &f.u, &f.v}) {
            for (double& s : p->values()) s = std::clamp(s + sigma * rng.gaussian(), 0.0, 255.0);
        }
    }
    return out;
}

namespace detail {

struct Dct8 {
    std::array<std::array<double, 8>, 8> basis{};  // basis[u][x]

    Dct8()
    {
        for (int u = 0; u < 8; ++u) {
            const double cu = u == 0 ? std::sqrt(1.0 / 8.0) : std::sqrt(2.0 / 8.0);
            for (int x = 0; x < 8; ++x) basis[u][x] = cu * std::cos((2 * x + 1) * u * std::numbers::pi / 16.0);
        }
    }
};

inline const Dct8& dct8()
{
    static const Dct8 table;
    return table;
}

inline void quantize_plane(Plane& p, double step)
{
    const auto& b = dct8().basis;
    const int w = p.width(), h = p.height();
    std::array<std::array<double, 8>, 8> blk{}, tmp{}, coef{};
    for (int by = 0; by < h; by += 8) {
        for (int bx = 0; bx < w; bx += 8) {
            for (int y = 0; y < 8; ++y) {
                for (int x = 0; x < 8; ++x) blk[y][x] = p(std::min(by + y, h - 1), std::min(bx + x, w - 1)) - 128.0;
            }
            // rows, then columns
            for (int y = 0; y < 8; ++y) {
                for (int u = 0; u < 8; ++u) {
                    double s = 0.0;
                    for (int x = 0; x < 8; ++x) s += b[u][x] * blk[y][x];
                    tmp[y][u] = s;
                }
            }
            for (int v = 0; v < 8; ++v) {
                for (int u = 0; u < 8; ++u) {
                    double s = 0.0;
                    for (int y = 0; y < 8; ++y) s += b[v][y] * tmp[y][u];
                    coef[v][u] = std::round(s / step) * step;
                }
            }
            for (int y = 0; y < 8; ++y) {
                for (int u = 0; u < 8; ++u) {
                    double s = 0.0;
                    for (int v = 0; v < 8; ++v) s += b[v][y] * coef[v][u];
                    tmp[y][u] = s;
                }
            }
            for (int y = 0; y < 8 && by + y < h; ++y) {
                for (int x = 0; x < 8 && bx + x < w; ++x) {
                    double s = 0.0;
                    for (int u = 0; u < 8; ++u) s += b[u][x] * tmp[y][u];
                    p(by + y, bx + x) = std::clamp(s + 128.0, 0.0, 255.0);
                }
            }
        }
    }
}

}  // namespace detail

/// JPEG-like degradation: 8x8 block DCT, uniform quantisation with `step`,
/// inverse DCT. Partial edge blocks are padded by edge replication.
inline Video quantize(const Video& video, int step)
{
    if (step < 1 || step > 64) throw std::invalid_argument("quantize: step must be in 1..64, got " + std::to_string(step));
    Video out = video;
    for (Frame& f : out.frames) {
        for (Plane* p : {&f.y, &f.u, &f.v}) detail::quantize_plane(*p, step);
    }
    return out;
}

}  // namespace dtcwtmark::attacks

#endif  // DTCWTMARK_ATTACKS_HPP
