// dtcwtmark: embed, extract, attack and score group-level video watermarks.
//
// Exit codes: 0 success, 1 usage error, 2 I/O error, 3 processing error.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dtcwtmark/dtcwtmark.hpp"

namespace {

using namespace dtcwtmark;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitIo = 2;
constexpr int kExitProcessing = 3;

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RawFlags {
    int width = 0;
    int height = 0;
    double fps = 30.0;
    std::string chroma = "420";
};

void add_raw_flags(CLI::App* cmd, RawFlags& raw)
{
    cmd->add_option("--width", raw.width, "Frame width (raw .yuv input only)");
    cmd->add_option("--height", raw.height, "Frame height (raw .yuv input only)");
    cmd->add_option("--fps", raw.fps, "Frame rate (raw .yuv input only)")->capture_default_str();
    cmd->add_option("--chroma", raw.chroma, "Chroma subsampling of raw input")
        ->check(CLI::IsMember({"420", "444"}))
        ->capture_default_str();
}

bool is_y4m(const std::string& path)
{
    return path.size() >= 4 && path.compare(path.size() - 4, 4, ".y4m") == 0;
}

Video load_video(const std::string& path, const RawFlags& raw)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    if (is_y4m(path)) return y4m::read_y4m(in);
    if (raw.width <= 0 || raw.height <= 0) {
        throw UsageError("raw input '" + path + "' needs --width and --height (or use a .y4m file)");
    }
    const y4m::RawDescriptor d{raw.width, raw.height, raw.fps,
                               raw.chroma == "444" ? ChromaFormat::k444 : ChromaFormat::k420};
    return y4m::read_raw_yuv(in, d);
}

void save_video(const std::string& path, const Video& video)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    if (is_y4m(path)) {
        y4m::write_y4m(out, video);
    } else {
        y4m::write_raw_yuv(out, video);
    }
    if (!out) throw IoError("write to '" + path + "' failed");
}

void save_text(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << text;
    if (!out) throw IoError("write to '" + path + "' failed");
}

struct WatermarkFlags {
    double strength = 0.8;
    double clip_ratio = 1.0 / 6.0;
    int depth = 3;
    std::string mode = "slope";
    int passes = 4;

    watermark::EmbedParams params() const
    {
        watermark::EmbedParams p;
        p.strength_k = strength;
        p.depth = depth;
        p.detector = mode == "comparator" ? watermark::DetectorMode::kComparator : watermark::DetectorMode::kSlope;
        p.max_passes = passes;
        return p;
    }
};

void add_watermark_flags(CLI::App* cmd, WatermarkFlags& wm)
{
    cmd->add_option("--strength", wm.strength, "Embedding strength k in (0, 1]")->capture_default_str();
    cmd->add_option("--clip-ratio", wm.clip_ratio, "Group length as a fraction c of the video")->capture_default_str();
    cmd->add_option("--depth", wm.depth, "Transform depth carrying the curve")->capture_default_str();
    cmd->add_option("--mode", wm.mode, "Bit detector")
        ->check(CLI::IsMember({"slope", "comparator"}))
        ->capture_default_str();
}

std::string format_fixed(double v, int decimals)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

std::vector<int> resolve_payload(const std::string& payload, const std::optional<std::uint64_t>& seed,
                                 std::size_t group_count)
{
    if (!payload.empty()) {
        auto bits = watermark::bits_from_string(payload);
        if (bits.size() != group_count) {
            throw UsageError("payload has " + std::to_string(bits.size()) + " bits but this video needs exactly " +
                             std::to_string(group_count) + " (one per group)");
        }
        return bits;
    }
    if (seed) return watermark::bits_from_seed(*seed, group_count);
    throw UsageError("embed needs --payload <bits> or --seed <n>");
}

// ---- subcommands --------------------------------------------------------

struct EmbedCmd {
    std::string input, output, payload, report;
    std::optional<std::uint64_t> seed;
    RawFlags raw;
    WatermarkFlags wm;

    int run() const
    {
        const auto params = wm.params();
        watermark::validate(params);
        const Video video = load_video(input, raw);
        const auto plan = watermark::plan_groups(video, wm.clip_ratio);
        const auto bits = resolve_payload(payload, seed, static_cast<std::size_t>(plan.group_count));
        const auto result = watermark::embed_sequence(video, bits, params, wm.clip_ratio);
        const Video marked = quantized(result.video);
        save_video(output, marked);

        const auto q = metrics::psnr_breakdown(video, marked);
        std::vector<int> frames(static_cast<std::size_t>(plan.group_count), 0);
        for (std::size_t i = 0; i < video.frames.size(); ++i) {
            frames[static_cast<std::size_t>(plan.group_of_frame(i, video.fps))] += 1;
        }
        std::cout << "payload  " << watermark::bits_to_string(bits) << '\n';
        std::cout << "groups   " << plan.group_count << " x " << format_fixed(plan.group_duration_seconds, 3) << " s\n";
        for (int g = 0; g < plan.group_count; ++g) {
            std::cout << "  group " << g << ": bit " << (bits[static_cast<std::size_t>(g)] > 0 ? '1' : '0') << ", "
                      << frames[static_cast<std::size_t>(g)] << " frames\n";
        }
        std::cout << "skipped  " << result.skipped_frames.size() << " unembeddable frames\n";
        std::cout << "psnr     " << metrics::format_db(q.pooled) << " dB (y " << metrics::format_db(q.y) << ", u "
                  << metrics::format_db(q.u) << ", v " << metrics::format_db(q.v) << ")\n";

        if (!report.empty()) {
            nlohmann::json j;
            j["payload"] = watermark::bits_to_string(bits);
            j["group_count"] = plan.group_count;
            j["group_seconds"] = plan.group_duration_seconds;
            j["frames_per_group"] = frames;
            j["skipped_frames"] = result.skipped_frames;
            j["psnr"] = metrics::format_db(q.pooled);
            save_text(report, j.dump(2) + "\n");
        }
        return kExitOk;
    }
};

struct ExtractCmd {
    std::string input, payload, report;
    RawFlags raw;
    WatermarkFlags wm;

    int run() const
    {
        const auto params = wm.params();
        watermark::validate(params);
        const Video video = load_video(input, raw);
        const auto verdicts = watermark::extract_sequence(video, params, wm.clip_ratio);
        const std::string detected = watermark::symbols_to_string(verdicts.symbols);

        std::cout << "detected " << detected << '\n';
        for (std::size_t g = 0; g < verdicts.symbols.size(); ++g) {
            std::cout << "  group " << g << ": flag " << (verdicts.flags[g] > 0 ? "+" : "") << verdicts.flags[g]
                      << " over " << verdicts.frames_per_group[g] << " frames, confidence "
                      << format_fixed(verdicts.mean_confidence[g], 3) << '\n';
        }
        nlohmann::json j;
        j["detected"] = detected;
        j["flags"] = verdicts.flags;
        j["frames_per_group"] = verdicts.frames_per_group;
        if (!payload.empty()) {
            const auto reference = watermark::bits_from_string(payload);
            const double nc = metrics::nc(reference, verdicts.symbols);
            const double ber = metrics::ber(reference, verdicts.symbols);
            std::cout << "nc       " << format_fixed(nc, 4) << "\nber      " << format_fixed(ber, 4) << '\n';
            j["nc"] = nc;
            j["ber"] = ber;
        }
        if (!report.empty()) save_text(report, j.dump(2) + "\n");
        return kExitOk;
    }
};

struct AttackCmd {
    std::string input, output, attack;
    RawFlags raw;

    int run() const
    {
        const auto chain = attacks::parse_chain(attack);
        const Video video = load_video(input, raw);
        const Video out = quantized(attacks::apply_chain(video, chain));
        save_video(output, out);
        std::cout << "applied  " << attacks::to_string(chain) << '\n'
                  << "frames   " << video.frame_count() << " -> " << out.frame_count() << '\n'
                  << "fps      " << format_fixed(video.fps, 3) << " -> " << format_fixed(out.fps, 3) << '\n';
        return kExitOk;
    }
};

struct BenchCmd {
    std::uint64_t seed = 1;
    std::string report;
    int videos = 5;
    int frames = 300;
    int width = 64;
    int height = 64;
    std::vector<std::string> attacks;
    bool serial = false;
    WatermarkFlags wm;

    int run() const
    {
        bench::Config cfg;
        cfg.corpus_seed = seed;
        cfg.videos = videos;
        cfg.frames = frames;
        cfg.width = width;
        cfg.height = height;
        cfg.clip_ratio = wm.clip_ratio;
        cfg.params = wm.params();
        cfg.parallel = !serial;
        if (!attacks.empty()) cfg.attacks = attacks;
        watermark::validate(cfg.params);
        for (const auto& a : cfg.attacks) attacks::parse_chain(a);

        const auto results = bench::run(cfg);
        const auto rows = bench::all_rows(results);
        metrics::write_table(std::cout, rows);
        if (!report.empty()) {
            std::ostringstream csv;
            metrics::write_csv(csv, rows);
            save_text(report, csv.str());
        }
        return kExitOk;
    }
};

struct PsnrCmd {
    std::string reference, input;
    RawFlags raw;

    int run() const
    {
        const Video a = load_video(reference, raw);
        const Video b = load_video(input, raw);
        const auto q = metrics::psnr_breakdown(a, b);
        std::cout << "psnr " << metrics::format_db(q.pooled) << " y " << metrics::format_db(q.y) << " u "
                  << metrics::format_db(q.u) << " v " << metrics::format_db(q.v) << '\n';
        return kExitOk;
    }
};

struct NcCmd {
    std::string reference, detected;

    int run() const
    {
        const auto ref = watermark::bits_from_string(reference);
        const auto det = watermark::symbols_from_string(detected);
        std::cout << "nc " << format_fixed(metrics::nc(ref, det), 4) << " ber "
                  << format_fixed(metrics::ber(ref, det), 4) << " erasures " << metrics::erasures(det) << '\n';
        return kExitOk;
    }
};

struct SynthCmd {
    std::string output, pattern = "textured-noise";
    std::uint64_t seed = 1;
    int width = 64;
    int height = 64;
    int frames = 300;
    double fps = 30.0;
    std::string chroma = "420";

    int run() const
    {
        const Video v = synth_video(width, height, frames, fps, seed, parse_pattern(pattern),
                                    chroma == "444" ? ChromaFormat::k444 : ChromaFormat::k420);
        save_video(output, v);
        return kExitOk;
    }
};

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Group-level blind video watermarking on DTCWT candidate curves"};
    app.require_subcommand(1);

    EmbedCmd embed;
    auto* c_embed = app.add_subcommand("embed", "Embed one bit per time group");
    c_embed->add_option("--input,-i", embed.input, "Input .y4m or raw .yuv")->required();
    c_embed->add_option("--output,-o", embed.output, "Output .y4m or raw .yuv")->required();
    auto* payload_opt = c_embed->add_option("--payload", embed.payload, "Bitstring, one bit per group");
    c_embed->add_option("--seed", embed.seed, "Derive the payload from this seed")->excludes(payload_opt);
    c_embed->add_option("--report", embed.report, "Write a JSON embed log");
    c_embed->add_option("--passes", embed.wm.passes, "Upper bound on reshaping passes per frame")->capture_default_str();
    add_raw_flags(c_embed, embed.raw);
    add_watermark_flags(c_embed, embed.wm);

    ExtractCmd extract;
    auto* c_extract = app.add_subcommand("extract", "Recover the group bits");
    c_extract->add_option("--input,-i", extract.input, "Input .y4m or raw .yuv")->required();
    c_extract->add_option("--payload", extract.payload, "Reference bitstring; prints NC and BER");
    c_extract->add_option("--report", extract.report, "Write a JSON extraction report");
    add_raw_flags(c_extract, extract.raw);
    add_watermark_flags(c_extract, extract.wm);

    AttackCmd attack;
    auto* c_attack = app.add_subcommand("attack", "Apply an attack chain");
    c_attack->add_option("--input,-i", attack.input, "Input .y4m or raw .yuv")->required();
    c_attack->add_option("--output,-o", attack.output, "Output .y4m or raw .yuv")->required();
    c_attack->add_option("--attack,-a", attack.attack, "e.g. rotate_crop:angle=10+framerate:fps=15")->required();
    add_raw_flags(c_attack, attack.raw);

    BenchCmd bench_cmd;
    auto* c_bench = app.add_subcommand("bench", "Run the attack matrix on the synthetic corpus");
    c_bench->add_option("--seed", bench_cmd.seed, "Corpus seed")->capture_default_str();
    c_bench->add_option("--report", bench_cmd.report, "Write the CSV report here");
    c_bench->add_option("--videos", bench_cmd.videos, "Corpus size")->capture_default_str()->check(CLI::PositiveNumber);
    c_bench->add_option("--frames", bench_cmd.frames, "Frames per video")->capture_default_str()->check(CLI::PositiveNumber);
    c_bench->add_option("--width", bench_cmd.width, "Frame width")->capture_default_str()->check(CLI::PositiveNumber);
    c_bench->add_option("--height", bench_cmd.height, "Frame height")->capture_default_str()->check(CLI::PositiveNumber);
    c_bench->add_option("--attack,-a", bench_cmd.attacks, "Replace the default attack list (repeatable)");
    c_bench->add_flag("--serial", bench_cmd.serial, "Process videos one at a time");
    add_watermark_flags(c_bench, bench_cmd.wm);

    PsnrCmd psnr;
    auto* c_psnr = app.add_subcommand("psnr", "PSNR between two videos");
    c_psnr->add_option("--reference,-r", psnr.reference, "Original video")->required();
    c_psnr->add_option("--input,-i", psnr.input, "Processed video")->required();
    add_raw_flags(c_psnr, psnr.raw);

    NcCmd nc;
    auto* c_nc = app.add_subcommand("nc", "NC and BER between bitstrings");
    c_nc->add_option("--reference,-r", nc.reference, "Embedded bits, e.g. 101100")->required();
    c_nc->add_option("--detected,-d", nc.detected, "Detected symbols, '?' for erasure")->required();

    SynthCmd synth;
    auto* c_synth = app.add_subcommand("synth", "Write a synthetic test video");
    c_synth->add_option("--output,-o", synth.output, "Output .y4m or raw .yuv")->required();
    c_synth->add_option("--pattern", synth.pattern, "moving-gradient, textured-noise or blocks")->capture_default_str();
    c_synth->add_option("--seed", synth.seed, "Generator seed")->capture_default_str();
    c_synth->add_option("--width", synth.width)->capture_default_str();
    c_synth->add_option("--height", synth.height)->capture_default_str();
    c_synth->add_option("--frames", synth.frames)->capture_default_str();
    c_synth->add_option("--fps", synth.fps)->capture_default_str();
    c_synth->add_option("--chroma", synth.chroma)->check(CLI::IsMember({"420", "444"}))->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (c_embed->parsed()) return embed.run();
        if (c_extract->parsed()) return extract.run();
        if (c_attack->parsed()) return attack.run();
        if (c_bench->parsed()) return bench_cmd.run();
        if (c_psnr->parsed()) return psnr.run();
        if (c_nc->parsed()) return nc.run();
        if (c_synth->parsed()) return synth.run();
    } catch (const attacks::AttackSyntaxError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const TruncationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitProcessing;
    }
    return kExitUsage;
}
