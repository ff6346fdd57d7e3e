#ifndef DTCWTMARK_BENCH_HPP
#define DTCWTMARK_BENCH_HPP

// Robustness benchmark over a seeded synthetic corpus.

#include <cstdint>
#include <future>
#include <string>
#include <vector>

#include "attack_spec.hpp"
#include "metrics.hpp"
#include "synth.hpp"
#include "video.hpp"
#include "watermark.hpp"

namespace dtcwtmark::bench {

inline const std::vector<std::string>& default_attacks()
{
    static const std::vector<std::string> list = {
        "none",
        "quantize:step=8",
        "quantize:step=16",
        "downscale:factor=0.5",
        "upscale_crop:percent=110",
        "upscale_crop:percent=120",
        "upscale_crop:percent=130",
        "rotate_crop:angle=5",
        "rotate_crop:angle=10",
        "framerate:fps=50",
        "framerate:fps=40",
        "framerate:fps=15",
        "framerate:fps=5",
        "framerate:fps=15,mode=blend",
        "rotate_crop:angle=10+framerate:fps=15",
        "drop:fraction=0.1,seed=3",
        "insert:fraction=0.1,seed=3",
        "swap:pairs=20,seed=3",
        "average:fraction=0.1,seed=3",
        "noise:sigma=2,seed=3",
    };
    return list;
}

struct CorpusEntry {
    std::string name;
    Video video;
    std::vector<int> payload;
};

struct Config {
    std::uint64_t corpus_seed = 1;
    int videos = 5;
    int width = 64;
    int height = 64;
    int frames = 300;
    double fps = 30.0;
    double clip_ratio = 1.0 / 6.0;
    watermark::EmbedParams params;
    std::vector<std::string> attacks = default_attacks();
    bool parallel = true;
};

/// Patterns cycle through the three synthetic kinds; seeds and payloads
/// derive from the corpus seed.
inline std::vector<CorpusEntry> make_corpus(const Config& cfg)
{
    static constexpr Pattern kCycle[] = {Pattern::kTexturedNoise, Pattern::kMovingGradient, Pattern::kBlocks};
    const auto plan = watermark::plan_groups(cfg.frames / cfg.fps, cfg.clip_ratio);
    std::vector<CorpusEntry> out;
    for (int i = 0; i < cfg.videos; ++i) {
        const Pattern pattern = kCycle[i % 3];
        const std::uint64_t seed = cfg.corpus_seed * 1000 + static_cast<std::uint64_t>(i);
        CorpusEntry e;
        e.name = "v" + std::to_string(i) + "-" + std::string(pattern_name(pattern));
        e.video = synth_video(cfg.width, cfg.height, cfg.frames, cfg.fps, seed, pattern);
        e.payload = watermark::bits_from_seed(seed ^ 0xA5A5A5A5ULL, static_cast<std::size_t>(plan.group_count));
        out.push_back(std::move(e));
    }
    return out;
}

struct VideoResult {
    std::string name;
    double psnr_embed = 0.0;
    std::size_t skipped_frames = 0;
    std::vector<metrics::RobustnessReport> rows;
};

/// Embed, store as 8-bit, then run every attack (each result is stored as
/// 8-bit again before extraction).
inline VideoResult run_video(const CorpusEntry& entry, const Config& cfg,
                             const std::vector<std::vector<attacks::AttackSpec>>& chains)
{
    const auto embedded = watermark::embed_sequence(entry.video, entry.payload, cfg.params, cfg.clip_ratio);
    const Video marked = quantized(embedded.video);
    VideoResult out;
    out.name = entry.name;
    out.psnr_embed = metrics::psnr(entry.video, marked);
    out.skipped_frames = embedded.skipped_frames.size();
    for (std::size_t a = 0; a < chains.size(); ++a) {
        const Video attacked = quantized(attacks::apply_chain(marked, chains[a]));
        const auto verdicts = watermark::extract_sequence(attacked, cfg.params, cfg.clip_ratio);
        out.rows.push_back(
            metrics::make_report(entry.name, cfg.attacks[a], entry.payload, verdicts, out.psnr_embed));
    }
    return out;
}

/// Rows come back in corpus order, then attack order, whatever the
/// scheduling.
inline std::vector<VideoResult> run(const Config& cfg)
{
    std::vector<std::vector<attacks::AttackSpec>> chains;
    for (const auto& text : cfg.attacks) chains.push_back(attacks::parse_chain(text));
    const auto corpus = make_corpus(cfg);

    std::vector<VideoResult> results;
    if (cfg.parallel) {
        std::vector<std::future<VideoResult>> jobs;
        for (const auto& entry : corpus) {
            jobs.push_back(std::async(std::launch::async, [&entry, &cfg, &chains] { return run_video(entry, cfg, chains); }));
        }
        for (auto& j : jobs) results.push_back(j.get());
    } else {
        for (const auto& entry : corpus) results.push_back(run_video(entry, cfg, chains));
    }
    return results;
}

inline std::vector<metrics::RobustnessReport> all_rows(const std::vector<VideoResult>& results)
{
    std::vector<metrics::RobustnessReport> rows;
    for (const auto& r : results) rows.insert(rows.end(), r.rows.begin(), r.rows.end());
    return rows;
}

}  // namespace dtcwtmark::bench

#endif  // DTCWTMARK_BENCH_HPP
