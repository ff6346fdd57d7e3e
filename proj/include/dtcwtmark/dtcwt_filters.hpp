#ifndef DTCWTMARK_DTCWT_FILTERS_HPP
#define DTCWTMARK_DTCWT_FILTERS_HPP

#include <array>

namespace dtcwtmark::dtcwt::filters {

// Level-1 near-symmetric biorthogonal pair, (13,19) taps.
inline constexpr std::array<double, 13> kNearSymH0 = {
    -0.0017578125, 0.0, 0.022265625, -0.046875, -0.0482421875, 0.296875, 0.55546875,
    0.296875, -0.0482421875, -0.046875, 0.022265625, 0.0, -0.0017578125};

inline constexpr std::array<double, 19> kNearSymH1 = {
    -7.062639508928571e-05, 0.0, 0.0013419015066964285, -0.0018833705357142855,
    -0.007156808035714285, 0.023856026785714284, 0.05564313616071428, -0.05168805803571428,
    -0.29975760323660716, 0.5594308035714286, -0.29975760323660716, -0.05168805803571428,
    0.05564313616071428, 0.023856026785714284, -0.007156808035714285, -0.0018833705357142855,
    0.0013419015066964285, 0.0, -7.062639508928571e-05};

inline constexpr std::array<double, 19> kNearSymG0 = {
    7.062639508928571e-05, 0.0, -0.0013419015066964285, -0.0018833705357142855,
    0.007156808035714285, 0.023856026785714284, -0.05564313616071428, -0.05168805803571428,
    0.29975760323660716, 0.5594308035714286, 0.29975760323660716, -0.05168805803571428,
    -0.05564313616071428, 0.023856026785714284, 0.007156808035714285, -0.0018833705357142855,
    -0.0013419015066964285, 0.0, 7.062639508928571e-05};

inline constexpr std::array<double, 13> kNearSymG1 = {
    -0.0017578125, -0.0, 0.022265625, 0.046875, -0.0482421875, -0.296875, 0.55546875,
    -0.296875, -0.0482421875, 0.046875, 0.022265625, -0.0, -0.0017578125};

// Quarter-shift pair for levels >= 2, 14 taps. Tree b filters are the
// time reverse of tree a; synthesis filters mirror analysis.
//
// The published 14-tap values leak about 1e-6 of DC into the high-pass
// branch, enough to leave a constant plane with visible high-pass energy.
// These coefficients are the published ones moved by at most 1.3e-7 so
// that h0a is exactly orthonormal under double shifts and vanishes at z = -1.
inline constexpr std::array<double, 14> kQshiftH0a = {
    0.0032531314539378485, -0.0038832003841907654, 0.03466023000825229, -0.03887268833066862,
    -0.11720401465701727, 0.27529548310269075, 0.7561455337234387, 0.568810532359082,
    0.01186597400431464, -0.10671169218758102, 0.023825382688208774, 0.017025223370035186,
    -0.0054394560345875365, -0.004556876742820043};

template <std::size_t N>
constexpr std::array<double, N> alternating_flip(const std::array<double, N>& h)
{
    std::array<double, N> r{};
    for (std::size_t i = 0; i < N; ++i) r[i] = (i % 2 == 0 ? 1.0 : -1.0) * h[N - 1 - i];
    return r;
}

inline constexpr auto kQshiftH1a = alternating_flip(kQshiftH0a);

template <std::size_t N>
constexpr std::array<double, N> reversed(const std::array<double, N>& h)
{
    std::array<double, N> r{};
    for (std::size_t i = 0; i < N; ++i) r[i] = h[N - 1 - i];
    return r;
}

inline constexpr auto kQshiftH0b = reversed(kQshiftH0a);
inline constexpr auto kQshiftH1b = reversed(kQshiftH1a);
inline constexpr auto kQshiftG0a = kQshiftH0b;
inline constexpr auto kQshiftG0b = kQshiftH0a;
inline constexpr auto kQshiftG1a = kQshiftH1b;
inline constexpr auto kQshiftG1b = kQshiftH1a;

}  // namespace dtcwtmark::dtcwt::filters

#endif  // DTCWTMARK_DTCWT_FILTERS_HPP
