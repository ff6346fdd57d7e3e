#ifndef DTCWTMARK_SVD_HPP
#define DTCWTMARK_SVD_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "errors.hpp"
#include "plane.hpp"

namespace dtcwtmark::svd {

/// Thin SVD: a = u * diag(s) * v^T with u (m x k), v (n x k), k = min(m, n).
struct SvdResult {
    Plane u;
    std::vector<double> s;  // descending, >= 0
    Plane v;
};

namespace detail {

inline void require_finite(const Plane& a, const char* who)
{
    for (double x : a.values()) {
        if (!std::isfinite(x)) throw std::invalid_argument(std::string(who) + ": non-finite input entry");
    }
}

/// Replace column `j` of `q` (columns `fixed` already orthonormal) with a
/// unit vector orthogonal to them.
inline void complete_column(Plane& q, int j, const std::vector<int>& fixed)
{
    const int m = q.rows();
    for (int e = 0; e < m; ++e) {
        std::vector<double> x(static_cast<std::size_t>(m), 0.0);
        x[static_cast<std::size_t>(e)] = 1.0;
        for (int pass = 0; pass < 2; ++pass) {
            for (int f : fixed) {
                double d = 0.0;
                for (int r = 0; r < m; ++r) d += q(r, f) * x[static_cast<std::size_t>(r)];
                for (int r = 0; r < m; ++r) x[static_cast<std::size_t>(r)] -= d * q(r, f);
            }
        }
        double norm = 0.0;
        for (double v : x) norm += v * v;
        norm = std::sqrt(norm);
        if (norm > 0.5) {
            for (int r = 0; r < m; ++r) q(r, j) = x[static_cast<std::size_t>(r)] / norm;
            return;
        }
    }
}

/// One-sided (Hestenes) Jacobi on a tall matrix (rows >= cols).
inline SvdResult jacobi_tall(const Plane& a)
{
    const int m = a.rows();
    const int n = a.cols();
    Plane w = a;
    Plane v(n, n);
    for (int i = 0; i < n; ++i) v(i, i) = 1.0;

    constexpr int kMaxSweeps = 80;
    const double tol = std::numeric_limits<double>::epsilon() * std::sqrt(static_cast<double>(m));

    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        bool rotated = false;
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                double alpha = 0.0, beta = 0.0, gamma = 0.0;
                for (int r = 0; r < m; ++r) {
                    const double wp = w(r, p);
                    const double wq = w(r, q);
                    alpha += wp * wp;
                    beta += wq * wq;
                    gamma += wp * wq;
                }
                if (gamma == 0.0 || std::abs(gamma) <= tol * std::sqrt(alpha * beta)) continue;
                rotated = true;

                const double zeta = (beta - alpha) / (2.0 * gamma);
                const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::hypot(1.0, zeta));
                const double c = 1.0 / std::hypot(1.0, t);
                const double s = c * t;
                for (int r = 0; r < m; ++r) {
                    const double wp = w(r, p);
                    const double wq = w(r, q);
                    w(r, p) = c * wp - s * wq;
                    w(r, q) = s * wp + c * wq;
                }
                for (int r = 0; r < n; ++r) {
                    const double vp = v(r, p);
                    const double vq = v(r, q);
                    v(r, p) = c * vp - s * vq;
                    v(r, q) = s * vp + c * vq;
                }
            }
        }
        if (!rotated) break;
    }

    std::vector<double> norms(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int r = 0; r < m; ++r) s += w(r, j) * w(r, j);
        norms[static_cast<std::size_t>(j)] = std::sqrt(s);
    }
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int x, int y) { return norms[static_cast<std::size_t>(x)] > norms[static_cast<std::size_t>(y)]; });

    SvdResult out{Plane(m, n), std::vector<double>(static_cast<std::size_t>(n)), Plane(n, n)};
    const double smax = norms.empty() ? 0.0 : norms[static_cast<std::size_t>(order[0])];
    const double negligible = smax * std::numeric_limits<double>::epsilon() * std::max(m, n);

    std::vector<int> done;
    std::vector<int> deficient;
    for (int k = 0; k < n; ++k) {
        const int j = order[static_cast<std::size_t>(k)];
        const double s = norms[static_cast<std::size_t>(j)];
        for (int r = 0; r < n; ++r) out.v(r, k) = v(r, j);
        if (s > negligible && s > 0.0) {
            out.s[static_cast<std::size_t>(k)] = s;
            for (int r = 0; r < m; ++r) out.u(r, k) = w(r, j) / s;
            done.push_back(k);
        } else {
            out.s[static_cast<std::size_t>(k)] = s;
            deficient.push_back(k);
        }
    }
    for (int k : deficient) {
        complete_column(out.u, k, done);
        done.push_back(k);
    }

    // Sign convention: largest-magnitude entry of each u column is positive.
    for (int k = 0; k < n; ++k) {
        int best = 0;
        for (int r = 1; r < m; ++r) {
            if (std::abs(out.u(r, k)) > std::abs(out.u(best, k))) best = r;
        }
        if (out.u(best, k) < 0.0) {
            for (int r = 0; r < m; ++r) out.u(r, k) = -out.u(r, k);
            for (int r = 0; r < n; ++r) out.v(r, k) = -out.v(r, k);
        }
    }
    return out;
}

}  // namespace detail

/// Full thin SVD by one-sided Jacobi rotations.
inline SvdResult decompose(const Plane& a)
{
    if (a.rows() < 1 || a.cols() < 1) throw std::invalid_argument("svd::decompose: empty matrix");
    detail::require_finite(a, "svd::decompose");
    if (a.rows() >= a.cols()) return detail::jacobi_tall(a);

    SvdResult t = detail::jacobi_tall(a.transposed());
    SvdResult out{std::move(t.v), std::move(t.s), std::move(t.u)};
    // Re-apply the sign convention to the new u.
    for (int k = 0; k < out.u.cols(); ++k) {
        int best = 0;
        for (int r = 1; r < out.u.rows(); ++r) {
            if (std::abs(out.u(r, k)) > std::abs(out.u(best, k))) best = r;
        }
        if (out.u(best, k) < 0.0) {
            for (int r = 0; r < out.u.rows(); ++r) out.u(r, k) = -out.u(r, k);
            for (int r = 0; r < out.v.rows(); ++r) out.v(r, k) = -out.v(r, k);
        }
    }
    return out;
}

struct PowerIterationOptions {
    double tolerance = 1e-10;
    int max_iterations = 10000;
};

/// Largest singular value by power iteration on a^T a.
inline double leading_singular_value(const Plane& a, PowerIterationOptions opts = {})
{
    detail::require_finite(a, "svd::leading_singular_value");
    const int m = a.rows();
    const int n = a.cols();
    if (m == 0 || n == 0) return 0.0;

    // Start from a^T times the largest column of a.
    int best_col = 0;
    double best_norm = -1.0;
    for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int r = 0; r < m; ++r) s += a(r, j) * a(r, j);
        if (s > best_norm) {
            best_norm = s;
            best_col = j;
        }
    }
    if (best_norm == 0.0) return 0.0;

    std::vector<double> x(static_cast<std::size_t>(n), 0.0);
    std::vector<double> ax(static_cast<std::size_t>(m), 0.0);
    for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int r = 0; r < m; ++r) s += a(r, j) * a(r, best_col);
        x[static_cast<std::size_t>(j)] = s;
    }

    auto normalize = [](std::vector<double>& vec) {
        double s = 0.0;
        for (double e : vec) s += e * e;
        s = std::sqrt(s);
        if (s > 0.0) {
            for (double& e : vec) e /= s;
        }
        return s;
    };
    if (normalize(x) == 0.0) return 0.0;

    double lambda = 0.0;
    for (int it = 0; it < opts.max_iterations; ++it) {
        double rayleigh = 0.0;  // x^T a^T a x, ||x|| = 1
        for (int r = 0; r < m; ++r) {
            double s = 0.0;
            auto row = a.row(r);
            for (int j = 0; j < n; ++j) s += row[static_cast<std::size_t>(j)] * x[static_cast<std::size_t>(j)];
            ax[static_cast<std::size_t>(r)] = s;
            rayleigh += s * s;
        }
        if (rayleigh == 0.0) return 0.0;
        if (it > 0 && std::abs(rayleigh - lambda) <= opts.tolerance * rayleigh) return std::sqrt(rayleigh);
        lambda = rayleigh;

        std::fill(x.begin(), x.end(), 0.0);
        for (int r = 0; r < m; ++r) {
            auto row = a.row(r);
            const double ar = ax[static_cast<std::size_t>(r)];
            for (int j = 0; j < n; ++j) x[static_cast<std::size_t>(j)] += row[static_cast<std::size_t>(j)] * ar;
        }
        if (normalize(x) == 0.0) return 0.0;
    }
    throw ConvergenceError("svd::leading_singular_value: no convergence after " +
                           std::to_string(opts.max_iterations) + " iterations");
}

/// Leading singular value, falling back to the full decomposition when
/// power iteration stalls (e.g. nearly equal top singular values).
inline double leading_singular_value_robust(const Plane& a)
{
    try {
        return leading_singular_value(a);
    } catch (const ConvergenceError&) {
        return decompose(a).s.front();
    }
}

}  // namespace dtcwtmark::svd

#endif  // DTCWTMARK_SVD_HPP
