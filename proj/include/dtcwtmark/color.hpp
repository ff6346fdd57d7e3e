#ifndef DTCWTMARK_COLOR_HPP
#define DTCWTMARK_COLOR_HPP

// BT.601 full-range RGB <-> YCbCr. Chroma is centred on 128.

#include <stdexcept>

#include "video.hpp"

namespace dtcwtmark {

struct RgbFrame {
    Plane r;
    Plane g;
    Plane b;
};

/// Returns a 4:4:4 frame. Values are not clamped.
inline Frame rgb_to_yuv(const RgbFrame& rgb)
{
    if (!rgb.r.same_shape(rgb.g) || !rgb.r.same_shape(rgb.b)) {
        throw std::invalid_argument("rgb_to_yuv: channel shapes differ");
    }
    Frame f(rgb.r.width(), rgb.r.height(), ChromaFormat::k444);
    auto r = rgb.r.values(), g = rgb.g.values(), b = rgb.b.values();
    auto y = f.y.values(), u = f.u.values(), v = f.v.values();
    for (std::size_t i = 0; i < y.size(); ++i) {
        y[i] = 0.299 * r[i] + 0.587 * g[i] + 0.114 * b[i];
        u[i] = -0.168735891647856 * r[i] - 0.331264108352144 * g[i] + 0.5 * b[i] + 128.0;
        v[i] = 0.5 * r[i] - 0.418687589158345 * g[i] - 0.081312410841655 * b[i] + 128.0;
    }
    return f;
}

/// Accepts 4:2:0 input by upsampling chroma first.
inline RgbFrame yuv_to_rgb(const Frame& frame)
{
    const Plane u = upsample_chroma(frame.u, frame.width(), frame.height(), frame.format);
    const Plane v = upsample_chroma(frame.v, frame.width(), frame.height(), frame.format);
    RgbFrame out{Plane(frame.height(), frame.width()), Plane(frame.height(), frame.width()),
                 Plane(frame.height(), frame.width())};
    auto y = frame.y.values();
    auto uu = u.values(), vv = v.values();
    auto r = out.r.values(), g = out.g.values(), b = out.b.values();
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double cb = uu[i] - 128.0;
        const double cr = vv[i] - 128.0;
        r[i] = y[i] + 1.402 * cr;
        g[i] = y[i] - 0.344136286201022 * cb - 0.714136286201022 * cr;
        b[i] = y[i] + 1.772 * cb;
    }
    return out;
}

}  // namespace dtcwtmark

#endif  // DTCWTMARK_COLOR_HPP
