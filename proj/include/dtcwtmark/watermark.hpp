#ifndef DTCWTMARK_WATERMARK_HPP
#define DTCWTMARK_WATERMARK_HPP

// Blind per-frame watermarking in the DTCWT-SVD domain with time-anchored
// group voting.
//
// Each frame carries one bit in the shape of its candidate curve: the six
// leading singular values of the deepest-level sub-band magnitudes of the
// U plane, one per direction. Embedding reshapes the curve into a straight
// line through (3.5, mean) whose relative slope is +k or -k; extraction
// reads the sign of the least-squares slope. Frames are grouped by
// timestamp so the grouping survives frame-rate conversion, and each group
// bit is decided by a sum-of-votes.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dtcwt.hpp"
#include "errors.hpp"
#include "random.hpp"
#include "svd.hpp"
#include "video.hpp"

namespace dtcwtmark::watermark {

inline constexpr int kCurvePoints = dtcwt::kDirections;

/// Curve means at or below this are treated as blank (no high-pass energy).
inline constexpr double kFlatEpsilon = 1e-6;

inline constexpr double kMinRatio = 0.05;
inline constexpr double kMaxRatio = 20.0;

enum class Symbol : int { kMinus = -1, kErasure = 0, kPlus = 1 };

inline char symbol_char(Symbol s) noexcept
{
    return s == Symbol::kPlus ? '1' : s == Symbol::kMinus ? '0' : '?';
}

enum class DetectorMode {
    kSlope,       // sign of the least-squares slope over d = 1..6
    kComparator,  // +1 iff y2 < y4 and y3 < y5, else -1
};

struct EmbedParams {
    double strength_k = 0.8;
    int depth = 3;
    DetectorMode detector = DetectorMode::kSlope;
    // Upper bound on reshaping passes per frame. The transform is redundant,
    // so one pass lands only part of the way to the target curve; later
    // passes run only while the frame does not yet read back its bit with
    // at least `confidence_goal` times the confidence of the exact target.
    int max_passes = 4;
    double confidence_goal = 0.5;
};

inline void validate(const EmbedParams& p)
{
    if (!(p.strength_k > 0.0) || p.strength_k > 1.0) {
        throw std::invalid_argument("strength k must be in (0, 1], got " + std::to_string(p.strength_k));
    }
    if (p.depth < 1 || p.depth > dtcwt::kMaxLevels) {
        throw std::invalid_argument("depth must be in 1.." + std::to_string(dtcwt::kMaxLevels));
    }
    if (p.max_passes < 1) throw std::invalid_argument("max_passes must be >= 1");
    if (!(p.confidence_goal >= 0.0)) throw std::invalid_argument("confidence_goal must be >= 0");
}

struct CandidateCurve {
    std::array<double, kCurvePoints> values{};

    double mean() const noexcept
    {
        return std::accumulate(values.begin(), values.end(), 0.0) / kCurvePoints;
    }
};

/// Full-resolution U plane of a frame (4:2:0 chroma is upsampled).
inline Plane embedding_plane(const Frame& frame)
{
    return upsample_chroma(frame.u, frame.width(), frame.height(), frame.format);
}

inline CandidateCurve curve_from_pyramid(const dtcwt::Pyramid& pyr)
{
    CandidateCurve curve;
    const int level = pyr.depth();
    for (int d = 1; d <= kCurvePoints; ++d) {
        curve.values[static_cast<std::size_t>(d - 1)] =
            svd::leading_singular_value_robust(dtcwt::subband_magnitude(pyr, level, d));
    }
    return curve;
}

inline CandidateCurve candidate_curve_of_plane(const Plane& plane, int depth)
{
    return curve_from_pyramid(dtcwt::forward(plane, depth));
}

inline CandidateCurve candidate_curve(const Frame& frame, int depth)
{
    return candidate_curve_of_plane(embedding_plane(frame), depth);
}

inline void require_bit(int bit)
{
    if (bit != 1 && bit != -1) throw std::invalid_argument("watermark bit must be +1 or -1, got " + std::to_string(bit));
}

/// Straight line through (3.5, mean) with relative slope `bit * k`: the
/// endpoints are mean * (1 -+ k) and the mean is preserved.
inline CandidateCurve target_curve(const CandidateCurve& curve, int bit, double k)
{
    require_bit(bit);
    if (!(k > 0.0) || k > 1.0) throw std::invalid_argument("target_curve: k must be in (0, 1]");
    const double y0 = curve.mean();
    if (!(y0 > kFlatEpsilon)) {
        throw UnembeddableFrame("frame has no high-pass energy (curve mean " + std::to_string(y0) + ")");
    }
    CandidateCurve target;
    for (int d = 1; d <= kCurvePoints; ++d) {
        target.values[static_cast<std::size_t>(d - 1)] = y0 * (1.0 + bit * k * (d - 3.5) / 2.5);
    }
    return target;
}

inline double curve_slope(const CandidateCurve& curve);

/// Reshape the U plane's candidate curve to carry `bit`. Y and V are
/// returned untouched. Throws UnembeddableFrame for blank U planes.
inline Frame embed_bit(const Frame& frame, int bit, const EmbedParams& params)
{
    validate(params);
    require_bit(bit);
    const Plane u = embedding_plane(frame);
    dtcwt::Pyramid pyr = dtcwt::forward(u, params.depth);
    CandidateCurve curve = curve_from_pyramid(pyr);
    const CandidateCurve target = target_curve(curve, bit, params.strength_k);

    std::array<bool, kCurvePoints> active{};
    for (int d = 0; d < kCurvePoints; ++d) active[static_cast<std::size_t>(d)] = curve.values[static_cast<std::size_t>(d)] > kFlatEpsilon;
    // Confidence of the exact target line is 6k/2.5.
    const double wanted_confidence = params.confidence_goal * kCurvePoints * params.strength_k / 2.5;

    Frame out = frame;
    for (int pass = 1;; ++pass) {
        for (int d = 1; d <= kCurvePoints; ++d) {
            const auto i = static_cast<std::size_t>(d - 1);
            if (!active[i]) continue;
            const double ratio = curve.values[i] > kFlatEpsilon
                                     ? std::clamp(target.values[i] / curve.values[i], kMinRatio, kMaxRatio)
                                     : kMaxRatio;
            pyr = dtcwt::scale_subband(std::move(pyr), params.depth, d, ratio);
        }
        out.u = downsample_chroma(dtcwt::inverse(pyr), frame.format);
        if (pass >= params.max_passes) break;

        pyr = dtcwt::forward(embedding_plane(out), params.depth);
        curve = curve_from_pyramid(pyr);
        const double slope = curve_slope(curve);
        const double confidence = std::abs(slope) * kCurvePoints / (curve.mean() + kFlatEpsilon);
        if (slope * bit > 0.0 && confidence >= wanted_confidence) break;
    }
    return out;
}

struct BitReading {
    Symbol symbol = Symbol::kErasure;
    double confidence = 0.0;
    double slope = 0.0;
};

/// Least-squares slope of (d, y_d) over the points with y_d above the flat
/// threshold. Returns 0 when fewer than two points remain.
inline double curve_slope(const CandidateCurve& curve)
{
    double sx = 0.0, sy = 0.0;
    int n = 0;
    for (int d = 1; d <= kCurvePoints; ++d) {
        const double y = curve.values[static_cast<std::size_t>(d - 1)];
        if (!(y > kFlatEpsilon)) continue;
        sx += d;
        sy += y;
        ++n;
    }
    if (n < 2) return 0.0;
    const double mx = sx / n, my = sy / n;
    double sxy = 0.0, sxx = 0.0;
    for (int d = 1; d <= kCurvePoints; ++d) {
        const double y = curve.values[static_cast<std::size_t>(d - 1)];
        if (!(y > kFlatEpsilon)) continue;
        sxy += (d - mx) * (y - my);
        sxx += (d - mx) * (d - mx);
    }
    return sxy / sxx;
}

inline BitReading read_curve(const CandidateCurve& curve, DetectorMode mode = DetectorMode::kSlope)
{
    BitReading out;
    out.slope = curve_slope(curve);
    out.confidence = std::abs(out.slope) * kCurvePoints / (curve.mean() + kFlatEpsilon);
    if (mode == DetectorMode::kComparator) {
        const auto& y = curve.values;
        out.symbol = (y[1] < y[3] && y[2] < y[4]) ? Symbol::kPlus : Symbol::kMinus;
        return out;
    }
    out.symbol = out.slope > 0.0 ? Symbol::kPlus : out.slope < 0.0 ? Symbol::kMinus : Symbol::kErasure;
    return out;
}

inline BitReading extract_bit(const Frame& frame, const EmbedParams& params)
{
    return read_curve(candidate_curve(frame, params.depth), params.detector);
}

/// Partition of a video's timeline into equal-duration groups.
struct GroupPlan {
    double group_duration_seconds = 0.0;
    int group_count = 1;
    double clip_ratio = 1.0 / 6.0;

    int group_of_time(double seconds) const noexcept
    {
        // The small bias keeps exact boundaries (e.g. frame 50 of 300 at
        // 30 fps, c = 1/6) from falling into the previous group through
        // rounding.
        const double g = std::floor(seconds / group_duration_seconds + 1e-9);
        if (g <= 0.0) return 0;
        return static_cast<int>(std::min<double>(g, group_count - 1));
    }

    int group_of_frame(std::size_t index, double fps) const noexcept
    {
        return group_of_time(static_cast<double>(index) / fps);
    }
};

inline GroupPlan plan_groups(double duration_seconds, double clip_ratio)
{
    if (!(clip_ratio > 0.0) || clip_ratio > 1.0) {
        throw std::invalid_argument("clip ratio c must be in (0, 1], got " + std::to_string(clip_ratio));
    }
    if (!(duration_seconds > 0.0)) throw std::invalid_argument("plan_groups: empty video");
    GroupPlan plan;
    plan.clip_ratio = clip_ratio;
    plan.group_count = std::max(1, static_cast<int>(std::lround(1.0 / clip_ratio)));
    plan.group_duration_seconds = duration_seconds * clip_ratio;
    return plan;
}

inline GroupPlan plan_groups(const Video& video, double clip_ratio)
{
    if (video.empty()) throw std::invalid_argument("plan_groups: empty video");
    return plan_groups(video.duration_seconds(), clip_ratio);
}

struct EmbedResult {
    Video video;
    GroupPlan plan;
    std::vector<std::size_t> skipped_frames;  // unembeddable, left unchanged
};

inline EmbedResult embed_sequence(const Video& video, std::span<const int> bits, const EmbedParams& params,
                                  double clip_ratio)
{
    validate(params);
    const GroupPlan plan = plan_groups(video, clip_ratio);
    if (bits.size() != static_cast<std::size_t>(plan.group_count)) {
        throw std::invalid_argument("payload has " + std::to_string(bits.size()) +
                                    " bits but the video needs exactly " +
                                    std::to_string(plan.group_count) + " (one per group)");
    }
    for (int b : bits) require_bit(b);

    EmbedResult result{video, plan, {}};
    for (std::size_t i = 0; i < video.frames.size(); ++i) {
        const int g = plan.group_of_frame(i, video.fps);
        try {
            result.video.frames[i] = embed_bit(video.frames[i], bits[static_cast<std::size_t>(g)], params);
        } catch (const UnembeddableFrame&) {
            result.skipped_frames.push_back(i);
        }
    }
    return result;
}

/// Per-group verdicts. symbol is +1 / -1 / erasure as flag is > 0 / < 0 / 0.
struct GroupVerdicts {
    std::vector<Symbol> symbols;
    std::vector<int> flags;
    std::vector<int> frames_per_group;
    std::vector<double> mean_confidence;
};

inline Symbol verdict_of_flag(int flag) noexcept
{
    return flag > 0 ? Symbol::kPlus : flag < 0 ? Symbol::kMinus : Symbol::kErasure;
}

/// Sum per-frame readings into group votes. `readings[i]` belongs to frame i
/// of a video with the given fps.
inline GroupVerdicts vote(std::span<const BitReading> readings, const GroupPlan& plan, double fps)
{
    const auto n = static_cast<std::size_t>(plan.group_count);
    GroupVerdicts out{std::vector<Symbol>(n, Symbol::kErasure), std::vector<int>(n, 0),
                      std::vector<int>(n, 0), std::vector<double>(n, 0.0)};
    for (std::size_t i = 0; i < readings.size(); ++i) {
        const auto g = static_cast<std::size_t>(plan.group_of_frame(i, fps));
        out.flags[g] += static_cast<int>(readings[i].symbol);
        out.frames_per_group[g] += 1;
        out.mean_confidence[g] += readings[i].confidence;
    }
    for (std::size_t g = 0; g < n; ++g) {
        out.symbols[g] = verdict_of_flag(out.flags[g]);
        if (out.frames_per_group[g] > 0) out.mean_confidence[g] /= out.frames_per_group[g];
    }
    return out;
}

inline std::vector<BitReading> extract_frames(const Video& video, const EmbedParams& params)
{
    std::vector<BitReading> readings;
    readings.reserve(video.frames.size());
    for (const Frame& f : video.frames) readings.push_back(extract_bit(f, params));
    return readings;
}

inline GroupVerdicts extract_sequence(const Video& video, const EmbedParams& params, double clip_ratio)
{
    validate(params);
    const GroupPlan plan = plan_groups(video, clip_ratio);
    const auto readings = extract_frames(video, params);
    return vote(readings, plan, video.fps);
}

// Payload helpers. Bitstrings use '1' -> +1 and '0' -> -1.

inline std::vector<int> bits_from_string(std::string_view text)
{
    std::vector<int> bits;
    for (char ch : text) {
        if (ch == '1') {
            bits.push_back(1);
        } else if (ch == '0') {
            bits.push_back(-1);
        } else {
            throw std::invalid_argument(std::string("payload may only contain '0' and '1', found '") + ch + "'");
        }
    }
    return bits;
}

/// Deterministic pseudo-random +-1 sequence.
inline std::vector<int> bits_from_seed(std::uint64_t seed, std::size_t count)
{
    Rng rng(seed);
    std::vector<int> bits(count);
    for (int& b : bits) b = (rng.next_u64() >> 63) ? 1 : -1;
    return bits;
}

inline std::string bits_to_string(std::span<const int> bits)
{
    std::string s;
    for (int b : bits) s.push_back(b > 0 ? '1' : '0');
    return s;
}

inline std::string symbols_to_string(std::span<const Symbol> symbols)
{
    std::string s;
    for (Symbol sym : symbols) s.push_back(symbol_char(sym));
    return s;
}

inline std::vector<Symbol> symbols_from_string(std::string_view text)
{
    std::vector<Symbol> out;
    for (char ch : text) {
        if (ch == '1') {
            out.push_back(Symbol::kPlus);
        } else if (ch == '0') {
            out.push_back(Symbol::kMinus);
        } else if (ch == '?') {
            out.push_back(Symbol::kErasure);
        } else {
            throw std::invalid_argument(std::string("detected sequence may only contain '0', '1' and '?', found '") +
                                        ch + "'");
        }
    }
    return out;
}

}  // namespace dtcwtmark::watermark

#endif  // DTCWTMARK_WATERMARK_HPP
