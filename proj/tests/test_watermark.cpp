#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "dtcwtmark/attacks.hpp"
#include "dtcwtmark/bench.hpp"
#include "dtcwtmark/errors.hpp"
#include "dtcwtmark/metrics.hpp"
#include "dtcwtmark/synth.hpp"
#include "dtcwtmark/watermark.hpp"

using namespace dtcwtmark;
using namespace dtcwtmark::watermark;

namespace {

CandidateCurve curve_of(std::array<double, 6> v)
{
    CandidateCurve c;
    c.values = v;
    return c;
}

Video one_frame(const Frame& f)
{
    Video v;
    v.frames.push_back(f);
    return v;
}

// A shorter corpus than the bench default: same generator, fewer frames.
struct Corpus {
    std::vector<bench::CorpusEntry> entries;
    std::vector<EmbedResult> embedded;
};

const Corpus& corpus()
{
    static const Corpus c = [] {
        bench::Config cfg;
        cfg.videos = 3;
        cfg.frames = 60;
        Corpus out;
        out.entries = bench::make_corpus(cfg);
        for (const auto& e : out.entries) out.embedded.push_back(embed_sequence(e.video, e.payload, cfg.params, cfg.clip_ratio));
        return out;
    }();
    return c;
}

}  // namespace

TEST(Curve, ConstantUPlaneIsFlatZero)
{
    const Frame f(64, 64, ChromaFormat::k420, 90.0, 140.0);
    for (double y : candidate_curve(f, 3).values) EXPECT_LE(y, 1e-6);
}

TEST(Curve, DoublingUDoublesEveryValue)
{
    const Video v = synth_video(64, 64, 1, 30, 11, Pattern::kTexturedNoise, ChromaFormat::k444);
    Frame f = v.frames[0];
    const auto base = candidate_curve(f, 3);
    f.u = f.u * 2.0;
    const auto twice = candidate_curve(f, 3);
    for (int d = 0; d < 6; ++d) EXPECT_NEAR(twice.values[d], 2.0 * base.values[d], 1e-9 * 2.0 * base.values[d]);
}

TEST(Curve, ValuesAreFiniteAndNonNegative)
{
    for (const auto& e : corpus().entries) {
        for (std::size_t i = 0; i < e.video.frames.size(); i += 7) {
            for (double y : candidate_curve(e.video.frames[i], 3).values) {
                EXPECT_TRUE(std::isfinite(y));
                EXPECT_GE(y, 0.0);
            }
        }
    }
}

TEST(Curve, TexturedFramesTendToBeWShaped)
{
    // Smoke test on the textured videos: averaged over frames, the two
    // diagonal sub-bands sit below their neighbours. On this transform the
    // minima land at d = 2 and d = 5.
    std::array<double, 6> mean{};
    int n = 0;
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
        const Video v = synth_video(64, 64, 20, 30, seed, Pattern::kTexturedNoise);
        for (const Frame& f : v.frames) {
            const auto c = candidate_curve(f, 3);
            for (int d = 0; d < 6; ++d) mean[d] += c.values[d] / c.mean();
            ++n;
        }
    }
    for (double& m : mean) m /= n;
    EXPECT_LT(mean[1], mean[0]);
    EXPECT_LT(mean[1], mean[2]);
    EXPECT_LT(mean[4], mean[3]);
    EXPECT_LT(mean[4], mean[5]);
}

TEST(Target, WorkedExample)
{
    const auto c = curve_of({10, 8, 9, 7, 9, 10});
    EXPECT_NEAR(c.mean(), 8.833333333333334, 1e-12);
    const auto up = target_curve(c, +1, 0.8);
    const double expected[] = {1.7667, 4.5933, 7.42, 10.2467, 13.0733, 15.9};
    for (int d = 0; d < 6; ++d) EXPECT_NEAR(up.values[d], expected[d], 5e-5);
    EXPECT_NEAR(up.mean(), c.mean(), 1e-12);
    const auto down = target_curve(c, -1, 0.8);
    for (int d = 0; d < 6; ++d) EXPECT_NEAR(down.values[d], up.values[5 - d], 1e-12);
}

TEST(Target, SmallStrengthApproachesTheMean)
{
    const auto c = curve_of({3, 1, 4, 1, 5, 9});
    const auto t = target_curve(c, +1, 1e-9);
    for (double y : t.values) EXPECT_NEAR(y, c.mean(), 1e-8);
}

TEST(Target, PreservesMeanAndStaysNonNegative)
{
    Rng rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        CandidateCurve c;
        for (double& y : c.values) y = rng.uniform(0.0, 100.0);
        const double k = rng.uniform(0.01, 1.0);
        const int bit = rng.below(2) ? 1 : -1;
        const auto t = target_curve(c, bit, k);
        EXPECT_NEAR(t.mean(), c.mean(), 1e-9 * c.mean());
        for (int d = 0; d < 6; ++d) {
            EXPECT_GE(t.values[d], -1e-12);
            if (d > 0) {
                EXPECT_GT(bit * (t.values[d] - t.values[d - 1]), 0.0);
            }
        }
    }
}

TEST(Target, RejectsBadInputs)
{
    const auto c = curve_of({1, 2, 3, 4, 5, 6});
    EXPECT_THROW(target_curve(c, 0, 0.8), std::invalid_argument);
    EXPECT_THROW(target_curve(c, 1, 0.0), std::invalid_argument);
    EXPECT_THROW(target_curve(c, 1, 1.5), std::invalid_argument);
    EXPECT_THROW(target_curve(curve_of({0, 0, 0, 0, 0, 0}), 1, 0.8), UnembeddableFrame);
}

TEST(Detector, SlopeSigns)
{
    EXPECT_EQ(read_curve(curve_of({1, 2, 3, 4, 5, 6})).symbol, Symbol::kPlus);
    EXPECT_EQ(read_curve(curve_of({6, 5, 4, 3, 2, 1})).symbol, Symbol::kMinus);
    const auto flat = read_curve(curve_of({5, 5, 5, 5, 5, 5}));
    EXPECT_EQ(flat.symbol, Symbol::kErasure);
    EXPECT_EQ(flat.confidence, 0.0);
}

TEST(Detector, ConfidenceIsScaleFree)
{
    const auto a = read_curve(curve_of({1, 2, 3, 4, 5, 6}));
    const auto b = read_curve(curve_of({10, 20, 30, 40, 50, 60}));
    EXPECT_NEAR(a.confidence, b.confidence, 1e-6);
    EXPECT_NEAR(a.confidence, 6.0 / 3.5, 1e-6);
}

TEST(Detector, ComparatorMode)
{
    EXPECT_EQ(read_curve(curve_of({9, 1, 2, 3, 4, 0}), DetectorMode::kComparator).symbol, Symbol::kPlus);
    EXPECT_EQ(read_curve(curve_of({0, 4, 3, 2, 1, 9}), DetectorMode::kComparator).symbol, Symbol::kMinus);
    EXPECT_EQ(read_curve(curve_of({5, 5, 5, 5, 5, 5}), DetectorMode::kComparator).symbol, Symbol::kMinus);
}

TEST(Plan, ThirtyFpsTenSeconds)
{
    Video v;
    v.fps = 30;
    v.frames.assign(300, Frame(16, 16, ChromaFormat::k420));
    const auto plan = plan_groups(v, 1.0 / 6.0);
    EXPECT_EQ(plan.group_count, 6);
    EXPECT_NEAR(plan.group_duration_seconds, 5.0 / 3.0, 1e-12);
    std::array<int, 6> counts{};
    for (std::size_t i = 0; i < 300; ++i) counts[plan.group_of_frame(i, 30.0)]++;
    for (int c : counts) EXPECT_EQ(c, 50);
    EXPECT_EQ(plan.group_of_frame(49, 30.0), 0);
    EXPECT_EQ(plan.group_of_frame(50, 30.0), 1);
}

TEST(Plan, FifteenFpsKeepsBoundaries)
{
    const auto plan = plan_groups(10.0, 1.0 / 6.0);
    std::array<int, 6> counts{};
    for (std::size_t i = 0; i < 150; ++i) counts[plan.group_of_frame(i, 15.0)]++;
    for (int c : counts) EXPECT_EQ(c, 25);
}

TEST(Plan, WholeVideoIsOneGroupAtRatioOne)
{
    const auto plan = plan_groups(7.3, 1.0);
    EXPECT_EQ(plan.group_count, 1);
    EXPECT_EQ(plan.group_of_time(0.0), 0);
    EXPECT_EQ(plan.group_of_time(7.29), 0);
    EXPECT_EQ(plan.group_of_time(100.0), 0);
}

TEST(Plan, RejectsBadArguments)
{
    EXPECT_THROW(plan_groups(10.0, 0.0), std::invalid_argument);
    EXPECT_THROW(plan_groups(10.0, 1.5), std::invalid_argument);
    EXPECT_THROW(plan_groups(Video{}, 0.5), std::invalid_argument);
}

TEST(Plan, GroupOfSourceTimeSurvivesFrameRateConversion)
{
    Rng rng(77);
    for (int trial = 0; trial < 40; ++trial) {
        const double fps = 5.0 + static_cast<double>(rng.below(56));
        const double target = 5.0 + static_cast<double>(rng.below(56));
        const auto n = static_cast<std::size_t>(30 + rng.below(300));
        Video v;
        v.fps = fps;
        v.frames.assign(n, Frame(2, 2, ChromaFormat::k444));
        const auto plan = plan_groups(v, 1.0 / 6.0);
        const Video out = attacks::convert_frame_rate(v, target);
        ASSERT_EQ(out.source_times.size(), out.frames.size());
        for (std::size_t i = 0; i < out.frames.size(); ++i) {
            const double t = out.source_times[i];
            const auto src = static_cast<std::size_t>(std::llround(t * fps));
            EXPECT_EQ(plan.group_of_time(t), plan.group_of_frame(src, fps));
            // Away from a boundary the extractor's own timeline agrees too.
            const double shown = static_cast<double>(i) / target;
            const double edge = std::fmod(shown, plan.group_duration_seconds);
            const double margin = 1.0 / fps + 1.0 / target;
            if (edge > margin && plan.group_duration_seconds - edge > margin &&
                shown < plan.group_duration_seconds * (plan.group_count - 1)) {
                EXPECT_EQ(plan.group_of_time(shown), plan.group_of_time(t)) << fps << "->" << target << " frame " << i;
            }
        }
    }
}

TEST(Vote, UnanimousGroup)
{
    const auto plan = plan_groups(10.0, 1.0 / 6.0);
    std::vector<BitReading> r(300);
    for (auto& x : r) x.symbol = Symbol::kPlus;
    const auto v = vote(r, plan, 30.0);
    for (int g = 0; g < 6; ++g) {
        EXPECT_EQ(v.flags[g], 50);
        EXPECT_EQ(v.symbols[g], Symbol::kPlus);
        EXPECT_EQ(v.frames_per_group[g], 50);
    }
}

TEST(Vote, TieIsAnErasure)
{
    const auto plan = plan_groups(10.0, 1.0 / 6.0);
    std::vector<BitReading> r(300);
    for (std::size_t i = 0; i < 300; ++i) r[i].symbol = Symbol::kMinus;
    for (std::size_t i = 0; i < 20; ++i) r[i].symbol = Symbol::kPlus;
    for (std::size_t i = 40; i < 50; ++i) r[i].symbol = Symbol::kErasure;
    const auto v = vote(r, plan, 30.0);
    EXPECT_EQ(v.flags[0], 0);
    EXPECT_EQ(v.symbols[0], Symbol::kErasure);
    EXPECT_EQ(v.symbols[1], Symbol::kMinus);
    EXPECT_EQ(v.flags[1], -50);
}

TEST(Payload, StringHelpers)
{
    const auto bits = bits_from_string("101100");
    EXPECT_EQ(bits, (std::vector<int>{1, -1, 1, 1, -1, -1}));
    EXPECT_EQ(bits_to_string(bits), "101100");
    EXPECT_THROW(bits_from_string("10x"), std::invalid_argument);
    const auto syms = symbols_from_string("1?0");
    EXPECT_EQ(syms, (std::vector<Symbol>{Symbol::kPlus, Symbol::kErasure, Symbol::kMinus}));
    EXPECT_EQ(symbols_to_string(syms), "1?0");
    EXPECT_EQ(bits_from_seed(42, 6), bits_from_seed(42, 6));
    EXPECT_EQ(bits_from_seed(42, 64).size(), 64u);
}

TEST(Params, Validation)
{
    EmbedParams p;
    EXPECT_NO_THROW(validate(p));
    p.strength_k = 0.0;
    EXPECT_THROW(validate(p), std::invalid_argument);
    p = {};
    p.strength_k = 1.01;
    EXPECT_THROW(validate(p), std::invalid_argument);
    p = {};
    p.depth = 0;
    EXPECT_THROW(validate(p), std::invalid_argument);
    p = {};
    p.max_passes = 0;
    EXPECT_THROW(validate(p), std::invalid_argument);
}

TEST(Embed, OnlyTouchesU)
{
    const Video v = synth_video(64, 64, 3, 30, 5, Pattern::kTexturedNoise);
    for (const Frame& f : v.frames) {
        const Frame out = embed_bit(f, -1, {});
        EXPECT_EQ(out.y, f.y);
        EXPECT_EQ(out.v, f.v);
        EXPECT_NE(out.u, f.u);
    }
}

TEST(Embed, BlankFrameIsUnembeddable)
{
    const Frame blank(64, 64, ChromaFormat::k420, 100.0, 128.0);
    EXPECT_THROW(embed_bit(blank, 1, {}), UnembeddableFrame);

    Video v = synth_video(64, 64, 12, 30, 6, Pattern::kTexturedNoise);
    v.frames[3] = blank;
    const auto r = embed_sequence(v, bits_from_string("10"), {}, 0.5);
    ASSERT_EQ(r.skipped_frames, (std::vector<std::size_t>{3}));
    EXPECT_EQ(r.video.frames[3], blank);
}

TEST(Embed, BitCountMismatchNamesTheGroupCount)
{
    const Video v = synth_video(64, 64, 30, 30, 6, Pattern::kBlocks);
    try {
        embed_sequence(v, bits_from_string("10101"), {}, 1.0 / 6.0);
        FAIL();
    } catch (const std::invalid_argument& e) {
        EXPECT_NE(std::string(e.what()).find("6"), std::string::npos) << e.what();
    }
}

TEST(Embed, ReembeddingKeepsTheBit)
{
    const Video v = synth_video(64, 64, 10, 30, 8, Pattern::kMovingGradient);
    for (const Frame& f : v.frames) {
        for (int bit : {1, -1}) {
            const Frame once = embed_bit(f, bit, {});
            const Frame twice = embed_bit(once, bit, {});
            EXPECT_EQ(static_cast<int>(extract_bit(twice, {}).symbol), bit);
        }
    }
}

TEST(Embed, ExtractionIsScaleInvariant)
{
    const Video v = synth_video(64, 64, 5, 30, 9, Pattern::kTexturedNoise, ChromaFormat::k444);
    for (const Frame& f : v.frames) {
        const Frame marked = embed_bit(f, 1, {});
        const Symbol base = extract_bit(marked, {}).symbol;
        for (double c : {0.1, 0.5, 3.0, 17.0}) {
            Frame scaled = marked;
            scaled.u = scaled.u * c;
            EXPECT_EQ(extract_bit(scaled, {}).symbol, base) << c;
        }
    }
}

TEST(Corpus, FrameLevelAccuracyAtLeast99Percent)
{
    const auto& c = corpus();
    std::size_t total = 0, right = 0;
    for (std::size_t k = 0; k < c.entries.size(); ++k) {
        const auto quant = quantized(c.embedded[k].video);
        const auto readings = extract_frames(quant, {});
        for (std::size_t i = 0; i < readings.size(); ++i) {
            const int g = c.embedded[k].plan.group_of_frame(i, quant.fps);
            right += static_cast<int>(readings[i].symbol) == c.entries[k].payload[g];
            ++total;
        }
    }
    EXPECT_GE(static_cast<double>(right) / total, 0.99) << right << "/" << total;
}

TEST(Corpus, PerFramePsnrAtLeast36)
{
    const auto& c = corpus();
    for (std::size_t k = 0; k < c.entries.size(); ++k) {
        const auto quant = quantized(c.embedded[k].video);
        for (std::size_t i = 0; i < quant.frames.size(); ++i) {
            const double db = metrics::psnr(one_frame(c.entries[k].video.frames[i]), one_frame(quant.frames[i]));
            EXPECT_GE(db, 36.0) << c.entries[k].name << " frame " << i;
        }
    }
}

TEST(Corpus, SequenceRoundTripIsExact)
{
    const auto& c = corpus();
    for (std::size_t k = 0; k < c.entries.size(); ++k) {
        const auto verdicts = extract_sequence(quantized(c.embedded[k].video), {}, 1.0 / 6.0);
        EXPECT_EQ(metrics::nc(c.entries[k].payload, verdicts.symbols), 1.0) << c.entries[k].name;
        EXPECT_TRUE(c.embedded[k].skipped_frames.empty());
    }
}

TEST(Corpus, HalfFrameRateKeepsTheBits)
{
    const auto& c = corpus();
    for (std::size_t k = 0; k < c.entries.size(); ++k) {
        const Video half = quantized(attacks::convert_frame_rate(quantized(c.embedded[k].video), 15.0));
        const auto verdicts = extract_sequence(half, {}, 1.0 / 6.0);
        EXPECT_GE(metrics::nc(c.entries[k].payload, verdicts.symbols), 0.95) << c.entries[k].name;
    }
}
