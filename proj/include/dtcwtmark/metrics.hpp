#ifndef DTCWTMARK_METRICS_HPP
#define DTCWTMARK_METRICS_HPP

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "video.hpp"
#include "watermark.hpp"

namespace dtcwtmark::metrics {

inline constexpr double kPeak = 255.0;

struct PsnrBreakdown {
    double pooled = 0.0;
    double y = 0.0;
    double u = 0.0;
    double v = 0.0;
};

namespace detail {

inline void require_comparable(const Video& a, const Video& b)
{
    if (a.frames.size() != b.frames.size()) {
        throw std::invalid_argument("psnr: frame count mismatch (" + std::to_string(a.frames.size()) + " vs " +
                                    std::to_string(b.frames.size()) + ")");
    }
    for (std::size_t i = 0; i < a.frames.size(); ++i) {
        const Frame& fa = a.frames[i];
        const Frame& fb = b.frames[i];
        if (!fa.y.same_shape(fb.y) || !fa.u.same_shape(fb.u) || !fa.v.same_shape(fb.v)) {
            throw std::invalid_argument("psnr: plane dimensions differ in frame " + std::to_string(i));
        }
    }
}

inline double psnr_of(double squared_error, double samples)
{
    if (samples == 0.0 || squared_error == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(kPeak * kPeak / (squared_error / samples));
}

}  // namespace detail

/// PSNR pooled over all planes and frames with sample-count weights, plus
/// one value per channel. Identical inputs give +inf.
inline PsnrBreakdown psnr_breakdown(const Video& a, const Video& b)
{
    detail::require_comparable(a, b);
    double se[3] = {0.0, 0.0, 0.0};
    double n[3] = {0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < a.frames.size(); ++i) {
        const Plane* pa[3] = {&a.frames[i].y, &a.frames[i].u, &a.frames[i].v};
        const Plane* pb[3] = {&b.frames[i].y, &b.frames[i].u, &b.frames[i].v};
        for (int c = 0; c < 3; ++c) {
            const auto va = pa[c]->values();
            const auto vb = pb[c]->values();
            for (std::size_t k = 0; k < va.size(); ++k) {
                const double d = va[k] - vb[k];
                se[c] += d * d;
            }
            n[c] += static_cast<double>(va.size());
        }
    }
    return {detail::psnr_of(se[0] + se[1] + se[2], n[0] + n[1] + n[2]), detail::psnr_of(se[0], n[0]),
            detail::psnr_of(se[1], n[1]), detail::psnr_of(se[2], n[2])};
}

inline double psnr(const Video& a, const Video& b) { return psnr_breakdown(a, b).pooled; }

/// Fixed two-decimal rendering; infinity renders as "inf".
inline std::string format_db(double db)
{
    if (std::isinf(db)) return db > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", db);
    return buf;
}

using watermark::Symbol;

inline void require_same_length(std::size_t a, std::size_t b, const char* who)
{
    if (a != b) {
        throw std::invalid_argument(std::string(who) + ": length mismatch (" + std::to_string(a) + " vs " +
                                    std::to_string(b) + ")");
    }
}

/// Normalised correlation of a +-1 reference with detected symbols; an
/// erasure contributes zero.
inline double nc(std::span<const int> reference, std::span<const Symbol> detected)
{
    require_same_length(reference.size(), detected.size(), "nc");
    if (reference.empty()) throw std::invalid_argument("nc: empty sequences");
    double s = 0.0;
    for (std::size_t i = 0; i < reference.size(); ++i) s += reference[i] * static_cast<int>(detected[i]);
    return s / static_cast<double>(reference.size());
}

/// Fraction of positions that differ; erasures count as errors.
inline double ber(std::span<const int> reference, std::span<const Symbol> detected)
{
    require_same_length(reference.size(), detected.size(), "ber");
    if (reference.empty()) throw std::invalid_argument("ber: empty sequences");
    std::size_t wrong = 0;
    for (std::size_t i = 0; i < reference.size(); ++i) {
        if (static_cast<int>(detected[i]) != reference[i]) ++wrong;
    }
    return static_cast<double>(wrong) / static_cast<double>(reference.size());
}

inline std::size_t erasures(std::span<const Symbol> detected)
{
    std::size_t n = 0;
    for (Symbol s : detected) n += s == Symbol::kErasure ? 1 : 0;
    return n;
}

struct RobustnessReport {
    std::string video;
    std::string attack;
    double nc = 0.0;
    double ber = 0.0;
    double psnr_embed = 0.0;
    std::size_t erasure_count = 0;
    int min_group_frames = 0;
    std::vector<Symbol> verdicts;
};

inline RobustnessReport make_report(std::string video, std::string attack, std::span<const int> reference,
                                    const watermark::GroupVerdicts& verdicts, double psnr_embed)
{
    RobustnessReport r;
    r.video = std::move(video);
    r.attack = std::move(attack);
    r.nc = nc(reference, verdicts.symbols);
    r.ber = ber(reference, verdicts.symbols);
    r.psnr_embed = psnr_embed;
    r.erasure_count = erasures(verdicts.symbols);
    r.min_group_frames = verdicts.frames_per_group.empty() ? 0 : verdicts.frames_per_group.front();
    for (int f : verdicts.frames_per_group) r.min_group_frames = std::min(r.min_group_frames, f);
    r.verdicts = verdicts.symbols;
    return r;
}

inline constexpr const char* kCsvHeader = "video,attack,nc,ber,psnr_embed,erasures,min_group_frames,detected";

inline std::string csv_row(const RobustnessReport& r)
{
    char buf[128];
    std::snprintf(buf, sizeof buf, "%.4f,%.4f,", r.nc, r.ber);
    return r.video + ",\"" + r.attack + "\"," + buf + format_db(r.psnr_embed) + "," +
           std::to_string(r.erasure_count) + "," + std::to_string(r.min_group_frames) + "," +
           watermark::symbols_to_string(r.verdicts);
}

inline void write_csv(std::ostream& out, std::span<const RobustnessReport> rows)
{
    out << kCsvHeader << '\n';
    for (const auto& r : rows) out << csv_row(r) << '\n';
}

/// Fixed-width table for terminals.
inline void write_table(std::ostream& out, std::span<const RobustnessReport> rows)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, "%-22s %-40s %7s %7s %9s %4s %6s  %s\n", "video", "attack", "nc", "ber",
                  "psnr", "era", "minfr", "detected");
    out << buf;
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%-22s %-40s %7.4f %7.4f %9s %4zu %6d  %s\n", r.video.c_str(),
                      r.attack.c_str(), r.nc, r.ber, format_db(r.psnr_embed).c_str(), r.erasure_count,
                      r.min_group_frames, watermark::symbols_to_string(r.verdicts).c_str());
        out << buf;
    }
}

}  // namespace dtcwtmark::metrics

#endif  // DTCWTMARK_METRICS_HPP
