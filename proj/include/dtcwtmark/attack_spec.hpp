#ifndef DTCWTMARK_ATTACK_SPEC_HPP
#define DTCWTMARK_ATTACK_SPEC_HPP

// Textual attack descriptions: "kind:key=value,key=value", chained with '+'
// and applied left to right, e.g. "rotate_crop:angle=10+framerate:fps=15".

#include <charconv>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "attacks.hpp"
#include "video.hpp"

namespace dtcwtmark::attacks {

struct NoAttack {};
struct FrameRate {
    double fps = 0.0;
    FrameRateMode mode = FrameRateMode::kNearest;
};
struct Drop {
    double fraction = 0.1;
    std::uint64_t seed = 1;
};
struct Insert {
    double fraction = 0.1;
    std::uint64_t seed = 1;
};
struct Swap {
    std::size_t pairs = 10;
    std::uint64_t seed = 1;
};
struct Average {
    double fraction = 0.1;
    std::uint64_t seed = 1;
};
struct RotateCrop {
    double angle = 0.0;
};
struct UpscaleCrop {
    double percent = 100.0;
};
struct Downscale {
    double factor = 1.0;
};
struct Noise {
    double sigma = 0.0;
    std::uint64_t seed = 1;
};
struct Quantize {
    int step = 1;
};

using AttackSpec = std::variant<NoAttack, FrameRate, Drop, Insert, Swap, Average, RotateCrop, UpscaleCrop,
                                Downscale, Noise, Quantize>;

inline constexpr const char* kAttackGrammar =
    "attack chain grammar: KIND[:KEY=VALUE[,KEY=VALUE...]][+KIND...]\n"
    "  none\n"
    "  framerate:fps=<f>0>[,mode=nearest|blend]\n"
    "  drop:fraction=<0..0.5>[,seed=<n>]\n"
    "  insert:fraction=<0..0.5>[,seed=<n>]\n"
    "  swap:pairs=<n>[,seed=<n>]\n"
    "  average:fraction=<0..0.5>[,seed=<n>]\n"
    "  rotate_crop:angle=<-45..45>\n"
    "  upscale_crop:percent=<100..200>\n"
    "  downscale:factor=<(0,1]>\n"
    "  noise:sigma=<>=0>[,seed=<n>]\n"
    "  quantize:step=<1..64>";

class AttackSyntaxError : public std::invalid_argument {
public:
    explicit AttackSyntaxError(const std::string& what)
        : std::invalid_argument(what + "\n" + kAttackGrammar)
    {
    }
};

namespace detail {

inline std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t");
    return std::string(s.substr(b, e - b + 1));
}

class Params {
public:
    Params(std::string kind, std::map<std::string, std::string> values)
        : kind_(std::move(kind)), values_(std::move(values))
    {
    }

    double real(const std::string& key, std::optional<double> fallback = std::nullopt)
    {
        const auto text = take(key, fallback.has_value());
        if (!text) return *fallback;
        double v = 0.0;
        const auto* end = text->data() + text->size();
        auto [ptr, ec] = std::from_chars(text->data(), end, v);
        if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
            throw AttackSyntaxError("attack '" + kind_ + "': parameter '" + key + "' is not a number: '" + *text + "'");
        }
        return v;
    }

    std::uint64_t integer(const std::string& key, std::optional<std::uint64_t> fallback = std::nullopt)
    {
        const auto text = take(key, fallback.has_value());
        if (!text) return *fallback;
        std::uint64_t v = 0;
        const auto* end = text->data() + text->size();
        auto [ptr, ec] = std::from_chars(text->data(), end, v);
        if (ec != std::errc() || ptr != end) {
            throw AttackSyntaxError("attack '" + kind_ + "': parameter '" + key + "' is not a non-negative integer: '" +
                                    *text + "'");
        }
        return v;
    }

    std::string word(const std::string& key, const std::string& fallback)
    {
        const auto text = take(key, true);
        return text ? *text : fallback;
    }

    /// Reject anything not consumed.
    void finish() const
    {
        if (!values_.empty()) {
            throw AttackSyntaxError("attack '" + kind_ + "': unknown parameter '" + values_.begin()->first + "'");
        }
    }

private:
    std::optional<std::string> take(const std::string& key, bool optional)
    {
        const auto it = values_.find(key);
        if (it == values_.end()) {
            if (optional) return std::nullopt;
            throw AttackSyntaxError("attack '" + kind_ + "': missing required parameter '" + key + "'");
        }
        std::string v = it->second;
        values_.erase(it);
        return v;
    }

    std::string kind_;
    std::map<std::string, std::string> values_;
};

inline void check(bool ok, const std::string& what)
{
    if (!ok) throw AttackSyntaxError(what);
}

inline std::string number(double v)
{
    std::ostringstream s;
    s << v;
    return s.str();
}

}  // namespace detail

/// Parse one "kind:key=value,..." item. Parameters are range-checked here
/// so a bad chain fails before any work is done.
inline AttackSpec parse_attack(std::string_view text)
{
    const std::string item = detail::trim(text);
    if (item.empty()) throw AttackSyntaxError("empty attack description");
    const auto colon = item.find(':');
    const std::string kind = detail::trim(std::string_view(item).substr(0, colon));
    std::map<std::string, std::string> values;
    if (colon != std::string::npos) {
        std::istringstream in(item.substr(colon + 1));
        std::string pair;
        while (std::getline(in, pair, ',')) {
            const auto eq = pair.find('=');
            if (eq == std::string::npos) {
                throw AttackSyntaxError("attack '" + kind + "': expected key=value, got '" + pair + "'");
            }
            const std::string key = detail::trim(std::string_view(pair).substr(0, eq));
            if (!values.emplace(key, detail::trim(std::string_view(pair).substr(eq + 1))).second) {
                throw AttackSyntaxError("attack '" + kind + "': duplicate parameter '" + key + "'");
            }
        }
    }
    detail::Params p(kind, std::move(values));

    AttackSpec spec;
    if (kind == "none") {
        spec = NoAttack{};
    } else if (kind == "framerate") {
        FrameRate a;
        a.fps = p.real("fps");
        const std::string mode = p.word("mode", "nearest");
        detail::check(a.fps > 0.0, "framerate: fps must be > 0");
        detail::check(mode == "nearest" || mode == "blend", "framerate: mode must be nearest or blend, got '" + mode + "'");
        a.mode = mode == "blend" ? FrameRateMode::kBlend : FrameRateMode::kNearest;
        spec = a;
    } else if (kind == "drop" || kind == "insert" || kind == "average") {
        const double fraction = p.real("fraction", 0.1);
        const std::uint64_t seed = p.integer("seed", 1);
        detail::check(fraction >= 0.0 && fraction <= 0.5, kind + ": fraction must be in [0, 0.5]");
        if (kind == "drop") spec = Drop{fraction, seed};
        if (kind == "insert") spec = Insert{fraction, seed};
        if (kind == "average") spec = Average{fraction, seed};
    } else if (kind == "swap") {
        spec = Swap{static_cast<std::size_t>(p.integer("pairs", 10)), p.integer("seed", 1)};
    } else if (kind == "rotate_crop") {
        const double angle = p.real("angle");
        detail::check(std::abs(angle) <= 45.0, "rotate_crop: |angle| must be <= 45");
        spec = RotateCrop{angle};
    } else if (kind == "upscale_crop") {
        const double percent = p.real("percent");
        detail::check(percent >= 100.0 && percent <= 200.0, "upscale_crop: percent must be in [100, 200]");
        spec = UpscaleCrop{percent};
    } else if (kind == "downscale") {
        const double factor = p.real("factor");
        detail::check(factor > 0.0 && factor <= 1.0, "downscale: factor must be in (0, 1]");
        spec = Downscale{factor};
    } else if (kind == "noise") {
        const double sigma = p.real("sigma");
        detail::check(sigma >= 0.0, "noise: sigma must be >= 0");
        spec = Noise{sigma, p.integer("seed", 1)};
    } else if (kind == "quantize") {
        const std::uint64_t step = p.integer("step");
        detail::check(step >= 1 && step <= 64, "quantize: step must be in 1..64");
        spec = Quantize{static_cast<int>(step)};
    } else {
        throw AttackSyntaxError("unknown attack kind '" + kind + "'");
    }
    p.finish();
    return spec;
}

inline std::vector<AttackSpec> parse_chain(std::string_view text)
{
    std::vector<AttackSpec> chain;
    std::size_t start = 0;
    while (true) {
        const auto plus = text.find('+', start);
        chain.push_back(parse_attack(text.substr(start, plus == std::string_view::npos ? plus : plus - start)));
        if (plus == std::string_view::npos) break;
        start = plus + 1;
    }
    return chain;
}

/// Canonical text for a spec; parse_attack(to_string(s)) reproduces s.
inline std::string to_string(const AttackSpec& spec)
{
    using detail::number;
    struct Visitor {
        std::string operator()(const NoAttack&) const { return "none"; }
        std::string operator()(const FrameRate& a) const
        {
            return "framerate:fps=" + number(a.fps) + (a.mode == FrameRateMode::kBlend ? ",mode=blend" : "");
        }
        std::string operator()(const Drop& a) const { return "drop:fraction=" + number(a.fraction) + ",seed=" + std::to_string(a.seed); }
        std::string operator()(const Insert& a) const { return "insert:fraction=" + number(a.fraction) + ",seed=" + std::to_string(a.seed); }
        std::string operator()(const Swap& a) const { return "swap:pairs=" + std::to_string(a.pairs) + ",seed=" + std::to_string(a.seed); }
        std::string operator()(const Average& a) const { return "average:fraction=" + number(a.fraction) + ",seed=" + std::to_string(a.seed); }
        std::string operator()(const RotateCrop& a) const { return "rotate_crop:angle=" + number(a.angle); }
        std::string operator()(const UpscaleCrop& a) const { return "upscale_crop:percent=" + number(a.percent); }
        std::string operator()(const Downscale& a) const { return "downscale:factor=" + number(a.factor); }
        std::string operator()(const Noise& a) const { return "noise:sigma=" + number(a.sigma) + ",seed=" + std::to_string(a.seed); }
        std::string operator()(const Quantize& a) const { return "quantize:step=" + std::to_string(a.step); }
    };
    return std::visit(Visitor{}, spec);
}

inline std::string to_string(const std::vector<AttackSpec>& chain)
{
    std::string out;
    for (const auto& s : chain) {
        if (!out.empty()) out += '+';
        out += to_string(s);
    }
    return out;
}

inline Video apply_attack(const Video& video, const AttackSpec& spec)
{
    struct Visitor {
        const Video& v;
        Video operator()(const NoAttack&) const { return v; }
        Video operator()(const FrameRate& a) const { return convert_frame_rate(v, a.fps, a.mode); }
        Video operator()(const Drop& a) const { return drop_frames(v, a.fraction, a.seed); }
        Video operator()(const Insert& a) const { return insert_frames(v, a.fraction, a.seed); }
        Video operator()(const Swap& a) const { return swap_frames(v, a.pairs, a.seed); }
        Video operator()(const Average& a) const { return average_frames(v, a.fraction, a.seed); }
        Video operator()(const RotateCrop& a) const { return rotate_crop(v, a.angle); }
        Video operator()(const UpscaleCrop& a) const { return upscale_crop(v, a.percent); }
        Video operator()(const Downscale& a) const { return downscale(v, a.factor); }
        Video operator()(const Noise& a) const { return add_noise(v, a.sigma, a.seed); }
        Video operator()(const Quantize& a) const { return quantize(v, a.step); }
    };
    return std::visit(Visitor{video}, spec);
}

inline Video apply_chain(const Video& video, const std::vector<AttackSpec>& chain)
{
    Video out = video;
    for (const auto& spec : chain) out = apply_attack(out, spec);
    return out;
}

}  // namespace dtcwtmark::attacks

#endif  // DTCWTMARK_ATTACK_SPEC_HPP
