#ifndef DTCWTMARK_DTCWT_HPP
#define DTCWTMARK_DTCWT_HPP

// 2-D dual-tree complex wavelet transform.
//
// Level 1 uses the (13,19)-tap near-symmetric biorthogonal pair without
// decimation; levels >= 2 use the 14-tap quarter-shift pair with 2:1
// decimation. Each level yields six complex directional sub-bands, ordered
//
//   d = 1..6  <->  +15, +45, +75, -75, -45, -15 degrees
//
// All filtering uses half-sample symmetric extension. Odd input sizes are
// padded by duplicating the last row/column; at levels >= 2 the lowpass is
// padded by one row (column) on each side when its size is not a multiple
// of four. `inverse` undoes both and crops to the original extent.

#include <array>
#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "dtcwt_filters.hpp"
#include "errors.hpp"
#include "plane.hpp"

namespace dtcwtmark::dtcwt {

inline constexpr int kDirections = 6;
inline constexpr int kMaxLevels = 6;

/// One complex sub-band stored as separate real and imaginary planes.
struct ComplexBand {
    Plane re;
    Plane im;
};

using LevelBands = std::array<ComplexBand, kDirections>;

struct Pyramid {
    Plane lowpass;
    std::vector<LevelBands> levels;  // levels[0] is the finest
    int original_rows = 0;
    int original_cols = 0;

    int depth() const noexcept { return static_cast<int>(levels.size()); }

    /// 1-based level and direction.
    const ComplexBand& band(int level, int direction) const
    {
        check_index(level, direction);
        return levels[level - 1][direction - 1];
    }
    ComplexBand& band(int level, int direction)
    {
        check_index(level, direction);
        return levels[level - 1][direction - 1];
    }

private:
    void check_index(int level, int direction) const
    {
        if (level < 1 || level > depth()) {
            throw std::out_of_range("dtcwt: level " + std::to_string(level) + " outside 1.." +
                                    std::to_string(depth()));
        }
        if (direction < 1 || direction > kDirections) {
            throw std::out_of_range("dtcwt: direction " + std::to_string(direction) +
                                    " outside 1..6");
        }
    }
};

namespace detail {

/// Half-sample symmetric reflection of index `x` into [0, n).
inline int reflect(int x, int n) noexcept
{
    const int period = 2 * n;
    int p = x % period;
    if (p < 0) p += period;
    return p < n ? p : period - 1 - p;
}

/// Rows `idx[i + m - 1 - k]` of `x` convolved with `h` ('valid' part only),
/// written to every `stride`-th row of `out` starting at `first`.
inline void convolve_rows(const Plane& x, std::span<const int> idx, std::span<const double> h,
                          Plane& out, int first, int stride)
{
    const int m = static_cast<int>(h.size());
    const int n_out = static_cast<int>(idx.size()) - m + 1;
    const int cols = x.cols();
    for (int i = 0; i < n_out; ++i) {
        auto dst = out.row(first + i * stride);
        for (int k = 0; k < m; ++k) {
            const double hk = h[k];
            if (hk == 0.0) continue;
            auto src = x.row(idx[i + m - 1 - k]);
            for (int c = 0; c < cols; ++c) dst[c] += hk * src[c];
        }
    }
}

inline std::vector<int> reflected_range(int begin, int end, int n)
{
    std::vector<int> v;
    v.reserve(static_cast<std::size_t>(end - begin));
    for (int i = begin; i < end; ++i) v.push_back(reflect(i, n));
    return v;
}

/// Filter the columns of `x` with an odd-length filter, no decimation.
inline Plane colfilter(const Plane& x, std::span<const double> h)
{
    const int r = x.rows();
    const int m2 = static_cast<int>(h.size()) / 2;
    const auto xe = reflected_range(-m2, r + m2, r);
    Plane y(r, x.cols());
    convolve_rows(x, xe, h, y, 0, 1);
    return y;
}

inline double dot(std::span<const double> a, std::span<const double> b)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline void split_even_odd(std::span<const double> h, std::vector<double>& even_taps,
                           std::vector<double>& odd_taps)
{
    // "odd" in 1-based numbering, i.e. taps 0, 2, 4, ...
    even_taps.clear();
    odd_taps.clear();
    for (std::size_t i = 0; i < h.size(); ++i) (i % 2 == 0 ? odd_taps : even_taps).push_back(h[i]);
}

inline std::vector<int> gather(const std::vector<int>& xe, const std::vector<int>& t, int offset)
{
    std::vector<int> v;
    v.reserve(t.size());
    for (int ti : t) v.push_back(xe[static_cast<std::size_t>(ti + offset)]);
    return v;
}

/// Filter the columns of `x` with the quarter-shift pair and decimate by 2.
/// `x.rows()` must be a multiple of 4.
inline Plane coldfilt(const Plane& x, std::span<const double> ha, std::span<const double> hb)
{
    const int r = x.rows();
    if (r % 4 != 0) throw StructuralError("coldfilt: row count must be a multiple of 4");
    const int m = static_cast<int>(ha.size());
    const auto xe = reflected_range(-m, r + m, r);

    std::vector<double> hao, hae, hbo, hbe;
    split_even_odd(ha, hae, hao);
    split_even_odd(hb, hbe, hbo);

    std::vector<int> t;
    for (int v = 5; v < r + 2 * m - 2; v += 4) t.push_back(v);

    const int r2 = r / 2;
    Plane y(r2, x.cols());
    const bool positive = dot(ha, hb) > 0.0;
    const int s1 = positive ? 0 : 1;
    const int s2 = positive ? 1 : 0;

    convolve_rows(x, gather(xe, t, -1), hao, y, s1, 2);
    convolve_rows(x, gather(xe, t, -3), hae, y, s1, 2);
    convolve_rows(x, gather(xe, t, 0), hbo, y, s2, 2);
    convolve_rows(x, gather(xe, t, -2), hbe, y, s2, 2);
    return y;
}

/// Filter the columns of `x` with the quarter-shift pair and interpolate by 2.
inline Plane colifilt(const Plane& x, std::span<const double> ha, std::span<const double> hb)
{
    const int r = x.rows();
    if (r % 2 != 0) throw StructuralError("colifilt: row count must be even");
    const int m = static_cast<int>(ha.size());
    const int m2 = m / 2;
    const auto xe = reflected_range(-m2, r + m2, r);

    std::vector<double> hao, hae, hbo, hbe;
    split_even_odd(ha, hae, hao);
    split_even_odd(hb, hbe, hbo);

    const bool positive = dot(ha, hb) > 0.0;
    Plane y(2 * r, x.cols());

    std::vector<int> t;
    if (m2 % 2 == 0) {
        for (int v = 3; v < r + m; v += 2) t.push_back(v);
        const int ta = positive ? 0 : -1;
        const int tb = positive ? -1 : 0;
        convolve_rows(x, gather(xe, t, tb - 2), hae, y, 0, 4);
        convolve_rows(x, gather(xe, t, ta - 2), hbe, y, 1, 4);
        convolve_rows(x, gather(xe, t, tb), hao, y, 2, 4);
        convolve_rows(x, gather(xe, t, ta), hbo, y, 3, 4);
    } else {
        for (int v = 2; v < r + m - 1; v += 2) t.push_back(v);
        const int ta = positive ? 0 : -1;
        const int tb = positive ? -1 : 0;
        convolve_rows(x, gather(xe, t, tb), hao, y, 0, 4);
        convolve_rows(x, gather(xe, t, ta), hbo, y, 1, 4);
        convolve_rows(x, gather(xe, t, tb), hae, y, 2, 4);
        convolve_rows(x, gather(xe, t, ta), hbe, y, 3, 4);
    }
    return y;
}

/// Split a quad image into the two complex sub-bands (p - q, p + q).
inline std::array<ComplexBand, 2> quads_to_complex(const Plane& y)
{
    const double s = std::sqrt(0.5);
    const int rows = y.rows() / 2;
    const int cols = y.cols() / 2;
    std::array<ComplexBand, 2> z{ComplexBand{Plane(rows, cols), Plane(rows, cols)},
                                 ComplexBand{Plane(rows, cols), Plane(rows, cols)}};
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) {
            const double a = y(2 * i, 2 * j);
            const double b = y(2 * i, 2 * j + 1);
            const double c = y(2 * i + 1, 2 * j);
            const double d = y(2 * i + 1, 2 * j + 1);
            // p = (a + jb)/sqrt2, q = (d - jc)/sqrt2
            const double pr = a * s, pi = b * s;
            const double qr = d * s, qi = -c * s;
            z[0].re(i, j) = pr - qr;
            z[0].im(i, j) = pi - qi;
            z[1].re(i, j) = pr + qr;
            z[1].im(i, j) = pi + qi;
        }
    }
    return z;
}

inline Plane complex_to_quads(const ComplexBand& w0, const ComplexBand& w1)
{
    const double s = std::sqrt(0.5);
    const int rows = w0.re.rows();
    const int cols = w0.re.cols();
    Plane x(2 * rows, 2 * cols);
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) {
            const double p_re = (w0.re(i, j) + w1.re(i, j)) * s;
            const double p_im = (w0.im(i, j) + w1.im(i, j)) * s;
            const double q_re = (w0.re(i, j) - w1.re(i, j)) * s;
            const double q_im = (w0.im(i, j) - w1.im(i, j)) * s;
            x(2 * i, 2 * j) = p_re;
            x(2 * i, 2 * j + 1) = p_im;
            x(2 * i + 1, 2 * j) = q_im;
            x(2 * i + 1, 2 * j + 1) = -q_re;
        }
    }
    return x;
}

inline void assign_level(LevelBands& bands, const Plane& horizontal, const Plane& vertical,
                         const Plane& diagonal)
{
    auto h = quads_to_complex(horizontal);
    auto v = quads_to_complex(vertical);
    auto d = quads_to_complex(diagonal);
    bands[0] = std::move(h[0]);
    bands[5] = std::move(h[1]);
    bands[2] = std::move(v[0]);
    bands[3] = std::move(v[1]);
    bands[1] = std::move(d[0]);
    bands[4] = std::move(d[1]);
}

inline Plane pad_rows_symmetric(const Plane& x)
{
    Plane out(x.rows() + 2, x.cols());
    std::copy(x.row(0).begin(), x.row(0).end(), out.row(0).begin());
    for (int r = 0; r < x.rows(); ++r) std::copy(x.row(r).begin(), x.row(r).end(), out.row(r + 1).begin());
    std::copy(x.row(x.rows() - 1).begin(), x.row(x.rows() - 1).end(), out.row(x.rows() + 1).begin());
    return out;
}

inline Plane drop_border_rows(const Plane& x)
{
    Plane out(x.rows() - 2, x.cols());
    for (int r = 0; r < out.rows(); ++r) std::copy(x.row(r + 1).begin(), x.row(r + 1).end(), out.row(r).begin());
    return out;
}

template <std::size_t N>
std::span<const double> taps(const std::array<double, N>& a)
{
    return {a.data(), a.size()};
}

}  // namespace detail

/// Deepest decomposition the plane supports (at most kMaxLevels).
inline int max_depth(int rows, int cols) noexcept
{
    int depth = 0;
    const int n = std::min(rows, cols);
    while (depth < kMaxLevels && (1 << (depth + 1)) <= n) ++depth;
    return depth;
}

inline Pyramid forward(const Plane& plane, int levels)
{
    using namespace detail;
    using namespace filters;

    if (levels < 1 || levels > kMaxLevels) {
        throw std::invalid_argument("dtcwt::forward: levels must be in 1.." +
                                    std::to_string(kMaxLevels) + ", got " + std::to_string(levels));
    }
    const int feasible = max_depth(plane.rows(), plane.cols());
    if (levels > feasible) {
        throw std::invalid_argument("dtcwt::forward: " + std::to_string(plane.rows()) + "x" +
                                    std::to_string(plane.cols()) + " plane too small for " +
                                    std::to_string(levels) + " levels; max feasible depth is " +
                                    std::to_string(feasible));
    }

    Pyramid pyr;
    pyr.original_rows = plane.rows();
    pyr.original_cols = plane.cols();
    pyr.levels.resize(static_cast<std::size_t>(levels));

    Plane x = plane;
    if (x.rows() % 2 != 0) {
        Plane ext(x.rows() + 1, x.cols());
        for (int r = 0; r < x.rows(); ++r) std::copy(x.row(r).begin(), x.row(r).end(), ext.row(r).begin());
        std::copy(x.row(x.rows() - 1).begin(), x.row(x.rows() - 1).end(), ext.row(x.rows()).begin());
        x = std::move(ext);
    }
    if (x.cols() % 2 != 0) {
        x = x.transposed();
        Plane ext(x.rows() + 1, x.cols());
        for (int r = 0; r < x.rows(); ++r) std::copy(x.row(r).begin(), x.row(r).end(), ext.row(r).begin());
        std::copy(x.row(x.rows() - 1).begin(), x.row(x.rows() - 1).end(), ext.row(x.rows()).begin());
        x = ext.transposed();
    }

    // Level 1: odd-length filters, no decimation.
    {
        const Plane lo = colfilter(x, taps(kNearSymH0)).transposed();
        const Plane hi = colfilter(x, taps(kNearSymH1)).transposed();
        pyr.lowpass = colfilter(lo, taps(kNearSymH0)).transposed();
        assign_level(pyr.levels[0], colfilter(hi, taps(kNearSymH0)).transposed(),
                     colfilter(lo, taps(kNearSymH1)).transposed(),
                     colfilter(hi, taps(kNearSymH1)).transposed());
    }

    for (int level = 1; level < levels; ++level) {
        Plane lolo = std::move(pyr.lowpass);
        if (lolo.rows() % 4 != 0) lolo = pad_rows_symmetric(lolo);
        if (lolo.cols() % 4 != 0) lolo = pad_rows_symmetric(lolo.transposed()).transposed();

        const Plane lo = coldfilt(lolo, taps(kQshiftH0b), taps(kQshiftH0a)).transposed();
        const Plane hi = coldfilt(lolo, taps(kQshiftH1b), taps(kQshiftH1a)).transposed();
        pyr.lowpass = coldfilt(lo, taps(kQshiftH0b), taps(kQshiftH0a)).transposed();
        assign_level(pyr.levels[static_cast<std::size_t>(level)],
                     coldfilt(hi, taps(kQshiftH0b), taps(kQshiftH0a)).transposed(),
                     coldfilt(lo, taps(kQshiftH1b), taps(kQshiftH1a)).transposed(),
                     coldfilt(hi, taps(kQshiftH1b), taps(kQshiftH1a)).transposed());
    }
    return pyr;
}

namespace detail {

inline void validate(const Pyramid& pyr)
{
    if (pyr.levels.empty()) throw StructuralError("dtcwt::inverse: pyramid has no levels");
    for (std::size_t l = 0; l < pyr.levels.size(); ++l) {
        const auto& ref = pyr.levels[l][0].re;
        for (const auto& b : pyr.levels[l]) {
            if (!b.re.same_shape(ref) || !b.im.same_shape(ref)) {
                throw StructuralError("dtcwt::inverse: sub-bands of level " + std::to_string(l + 1) +
                                      " differ in size");
            }
        }
    }
    const auto& top = pyr.levels.back()[0].re;
    if (pyr.lowpass.rows() != 2 * top.rows() || pyr.lowpass.cols() != 2 * top.cols()) {
        throw StructuralError("dtcwt::inverse: lowpass size does not match coarsest level");
    }
    const auto& fine = pyr.levels.front()[0].re;
    if (2 * fine.rows() < pyr.original_rows || 2 * fine.rows() > pyr.original_rows + 1 ||
        2 * fine.cols() < pyr.original_cols || 2 * fine.cols() > pyr.original_cols + 1) {
        throw StructuralError("dtcwt::inverse: original extent inconsistent with level 1");
    }
}

}  // namespace detail

inline Plane inverse(const Pyramid& pyr)
{
    using namespace detail;
    using namespace filters;

    validate(pyr);
    Plane z = pyr.lowpass;

    for (int level = pyr.depth(); level >= 2; --level) {
        const auto& b = pyr.levels[static_cast<std::size_t>(level - 1)];
        const Plane lh = complex_to_quads(b[0], b[5]);
        const Plane hl = complex_to_quads(b[2], b[3]);
        const Plane hh = complex_to_quads(b[1], b[4]);

        const Plane y1 = colifilt(z, taps(kQshiftG0b), taps(kQshiftG0a)) +
                         colifilt(lh, taps(kQshiftG1b), taps(kQshiftG1a));
        const Plane y2 = colifilt(hl, taps(kQshiftG0b), taps(kQshiftG0a)) +
                         colifilt(hh, taps(kQshiftG1b), taps(kQshiftG1a));
        z = (colifilt(y1.transposed(), taps(kQshiftG0b), taps(kQshiftG0a)) +
             colifilt(y2.transposed(), taps(kQshiftG1b), taps(kQshiftG1a)))
                .transposed();

        const auto& below = pyr.levels[static_cast<std::size_t>(level - 2)][0].re;
        const int want_rows = 2 * below.rows();
        const int want_cols = 2 * below.cols();
        if (z.rows() == want_rows + 2) z = drop_border_rows(z);
        if (z.cols() == want_cols + 2) z = drop_border_rows(z.transposed()).transposed();
        if (z.rows() != want_rows || z.cols() != want_cols) {
            throw StructuralError("dtcwt::inverse: level " + std::to_string(level) +
                                  " reconstruction does not fit level " + std::to_string(level - 1));
        }
    }

    const auto& b = pyr.levels[0];
    const Plane lh = complex_to_quads(b[0], b[5]);
    const Plane hl = complex_to_quads(b[2], b[3]);
    const Plane hh = complex_to_quads(b[1], b[4]);
    const Plane y1 = colfilter(z, taps(kNearSymG0)) + colfilter(lh, taps(kNearSymG1));
    const Plane y2 = colfilter(hl, taps(kNearSymG0)) + colfilter(hh, taps(kNearSymG1));
    z = (colfilter(y1.transposed(), taps(kNearSymG0)) + colfilter(y2.transposed(), taps(kNearSymG1)))
            .transposed();

    if (z.rows() == pyr.original_rows && z.cols() == pyr.original_cols) return z;
    return crop(z, pyr.original_rows, pyr.original_cols);
}

/// Elementwise |F| of one sub-band (1-based level and direction).
inline Plane subband_magnitude(const Pyramid& pyr, int level, int direction)
{
    const ComplexBand& b = pyr.band(level, direction);
    Plane mag(b.re.rows(), b.re.cols());
    auto re = b.re.values();
    auto im = b.im.values();
    auto out = mag.values();
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::hypot(re[i], im[i]);
    return mag;
}

/// Multiply one sub-band by a positive real ratio; phase is preserved.
inline Pyramid scale_subband(Pyramid pyr, int level, int direction, double ratio)
{
    if (!(ratio > 0.0) || !std::isfinite(ratio)) {
        throw std::invalid_argument("dtcwt::scale_subband: ratio must be finite and > 0, got " +
                                    std::to_string(ratio));
    }
    ComplexBand& b = pyr.band(level, direction);
    b.re *= ratio;
    b.im *= ratio;
    return pyr;
}

}  // namespace dtcwtmark::dtcwt

#endif  // DTCWTMARK_DTCWT_HPP
