#ifndef DTCWTMARK_SYNTH_HPP
#define DTCWTMARK_SYNTH_HPP

// Deterministic synthetic test videos. Output samples are integral so the
// result survives a Y4M round trip unchanged.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "random.hpp"
#include "video.hpp"

namespace dtcwtmark {

enum class Pattern { kMovingGradient, kTexturedNoise, kBlocks };

inline Pattern parse_pattern(std::string_view name)
{
    if (name == "moving-gradient") return Pattern::kMovingGradient;
    if (name == "textured-noise") return Pattern::kTexturedNoise;
    if (name == "blocks") return Pattern::kBlocks;
    throw std::invalid_argument("unknown pattern '" + std::string(name) +
                                "' (expected moving-gradient, textured-noise or blocks)");
}

inline std::string_view pattern_name(Pattern p)
{
    switch (p) {
    case Pattern::kMovingGradient: return "moving-gradient";
    case Pattern::kTexturedNoise: return "textured-noise";
    case Pattern::kBlocks: return "blocks";
    }
    return "?";
}

namespace detail {

/// Multi-octave value noise in roughly [-1, 1], sampled at real coordinates.
class ValueNoise {
public:
    ValueNoise(Rng& rng, std::vector<int> cells, int extent) : cells_(std::move(cells))
    {
        for (int cell : cells_) {
            const int n = extent / cell + 3;
            Plane grid(n, n);
            for (double& g : grid.values()) g = rng.uniform(-1.0, 1.0);
            grids_.push_back(std::move(grid));
        }
    }

    double operator()(double x, double y) const
    {
        double s = 0.0;
        double wsum = 0.0;
        for (std::size_t o = 0; o < cells_.size(); ++o) {
            const double cell = cells_[o];
            const Plane& g = grids_[o];
            const double gx = std::clamp(x / cell + 1.0, 0.0, g.cols() - 1.001);
            const double gy = std::clamp(y / cell + 1.0, 0.0, g.rows() - 1.001);
            const int ix = static_cast<int>(gx);
            const int iy = static_cast<int>(gy);
            const double fx = gx - ix, fy = gy - iy;
            const double v = (1 - fy) * ((1 - fx) * g(iy, ix) + fx * g(iy, ix + 1)) +
                             fy * ((1 - fx) * g(iy + 1, ix) + fx * g(iy + 1, ix + 1));
            const double w = 1.0 / std::sqrt(static_cast<double>(o + 1));
            s += w * v;
            wsum += w;
        }
        return s / wsum;
    }

private:
    std::vector<int> cells_;
    std::vector<Plane> grids_;
};

struct Grating {
    double amplitude;
    double fx;  // cycles per pixel
    double fy;
    double phase;
    double speed;  // radians per frame
};

inline Grating random_grating(Rng& rng, double amplitude, double min_period, double max_period)
{
    const double angle = rng.uniform(0.0, std::numbers::pi);
    const double period = rng.uniform(min_period, max_period);
    return {amplitude * rng.uniform(0.5, 1.0), std::cos(angle) / period, std::sin(angle) / period,
            rng.uniform(0.0, 2.0 * std::numbers::pi), rng.uniform(-0.25, 0.25)};
}

inline double eval(const std::vector<Grating>& gs, double x, double y, int t)
{
    double s = 0.0;
    for (const Grating& g : gs) {
        s += g.amplitude *
             std::sin(2.0 * std::numbers::pi * (g.fx * x + g.fy * y) + g.phase + g.speed * t);
    }
    return s;
}

inline double clamp_level(double v) { return std::clamp(std::round(v), 0.0, 255.0); }

}  // namespace detail

/// Pure function of its arguments. Produces 4:2:0 or 4:4:4 frames.
inline Video synth_video(int width, int height, int frame_count, double fps, std::uint64_t seed,
                         Pattern pattern, ChromaFormat format = ChromaFormat::k420)
{
    if (width <= 0 || height <= 0) throw std::invalid_argument("synth_video: dimensions must be > 0");
    if (frame_count <= 0) throw std::invalid_argument("synth_video: frame_count must be > 0");
    if (!(fps > 0.0)) throw std::invalid_argument("synth_video: fps must be > 0");

    Rng rng(seed ^ (0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(pattern) + 1)));
    Video video;
    video.fps = fps;
    video.frames.reserve(static_cast<std::size_t>(frame_count));
    const auto csz = chroma_size(width, height, format);
    const double cscale_x = static_cast<double>(width) / csz.width;
    const double cscale_y = static_cast<double>(height) / csz.height;

    switch (pattern) {
    case Pattern::kTexturedNoise: {
        const int extent = std::max(width, height) + 4 * frame_count / 3 + 64;
        const detail::ValueNoise ny(rng, {3, 6, 12, 24}, extent);
        const detail::ValueNoise nu(rng, {4, 8, 16}, extent);
        const detail::ValueNoise nv(rng, {4, 8, 16}, extent);
        const double vx = rng.uniform(0.2, 0.6);
        const double vy = rng.uniform(0.1, 0.4);
        for (int t = 0; t < frame_count; ++t) {
            Frame f(width, height, format);
            const double ox = vx * t, oy = vy * t;
            for (int r = 0; r < height; ++r) {
                for (int c = 0; c < width; ++c) f.y(r, c) = detail::clamp_level(128.0 + 90.0 * ny(c + ox, r + oy));
            }
            for (int r = 0; r < csz.height; ++r) {
                for (int c = 0; c < csz.width; ++c) {
                    const double x = c * cscale_x + ox, y = r * cscale_y + oy;
                    f.u(r, c) = detail::clamp_level(128.0 + 60.0 * nu(x, y));
                    f.v(r, c) = detail::clamp_level(128.0 + 60.0 * nv(x, y));
                }
            }
            video.frames.push_back(std::move(f));
        }
        break;
    }
    case Pattern::kMovingGradient: {
        std::vector<detail::Grating> gy, gu, gv;
        for (int i = 0; i < 3; ++i) gy.push_back(detail::random_grating(rng, 20.0, 6.0, 18.0));
        for (int i = 0; i < 4; ++i) gu.push_back(detail::random_grating(rng, 8.0, 10.0, 24.0));
        for (int i = 0; i < 4; ++i) gv.push_back(detail::random_grating(rng, 8.0, 10.0, 24.0));
        const double angle0 = rng.uniform(0.0, 2.0 * std::numbers::pi);
        const double spin = rng.uniform(0.005, 0.02);
        for (int t = 0; t < frame_count; ++t) {
            Frame f(width, height, format);
            const double a = angle0 + spin * t;
            const double dx = std::cos(a) / std::max(width, height);
            const double dy = std::sin(a) / std::max(width, height);
            for (int r = 0; r < height; ++r) {
                for (int c = 0; c < width; ++c) {
                    const double ramp = 60.0 * ((c - width / 2.0) * dx + (r - height / 2.0) * dy);
                    f.y(r, c) = detail::clamp_level(128.0 + ramp + detail::eval(gy, c, r, t));
                }
            }
            for (int r = 0; r < csz.height; ++r) {
                for (int c = 0; c < csz.width; ++c) {
                    const double x = c * cscale_x, y = r * cscale_y;
                    const double ramp = 25.0 * ((x - width / 2.0) * dy - (y - height / 2.0) * dx);
                    f.u(r, c) = detail::clamp_level(128.0 + ramp + detail::eval(gu, x, y, t));
                    f.v(r, c) = detail::clamp_level(128.0 - ramp + detail::eval(gv, x, y, t));
                }
            }
            video.frames.push_back(std::move(f));
        }
        break;
    }
    case Pattern::kBlocks: {
        constexpr int kBlock = 8;
        const int step_every = 3;  // one pixel of pan every few frames
        const int span_x = width + frame_count / step_every + kBlock;
        const int span_y = height + frame_count / step_every + kBlock;
        const int nbx = span_x / kBlock + 1;
        const int nby = span_y / kBlock + 1;
        Plane by(nby, nbx), bu(nby, nbx), bv(nby, nbx);
        for (double& s : by.values()) s = std::round(rng.uniform(30.0, 225.0));
        for (double& s : bu.values()) s = std::round(rng.uniform(96.0, 160.0));
        for (double& s : bv.values()) s = std::round(rng.uniform(96.0, 160.0));
        for (int t = 0; t < frame_count; ++t) {
            Frame f(width, height, format);
            const int ox = t / step_every;
            const int oy = t / (2 * step_every);
            for (int r = 0; r < height; ++r) {
                for (int c = 0; c < width; ++c) f.y(r, c) = by((r + oy) / kBlock, (c + ox) / kBlock);
            }
            for (int r = 0; r < csz.height; ++r) {
                for (int c = 0; c < csz.width; ++c) {
                    const int x = static_cast<int>(c * cscale_x) + ox;
                    const int y = static_cast<int>(r * cscale_y) + oy;
                    f.u(r, c) = bu(y / kBlock, x / kBlock);
                    f.v(r, c) = bv(y / kBlock, x / kBlock);
                }
            }
            video.frames.push_back(std::move(f));
        }
        break;
    }
    }
    return video;
}

}  // namespace dtcwtmark

#endif  // DTCWTMARK_SYNTH_HPP
