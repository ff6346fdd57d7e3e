#ifndef DTCWTMARK_PLANE_HPP
#define DTCWTMARK_PLANE_HPP

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace dtcwtmark {

/// Dense row-major 2-D array of reals. Used for image planes, sub-band
/// components and the matrices handed to the SVD.
class Plane {
public:
    Plane() = default;

    Plane(int rows, int cols, double fill = 0.0) : rows_(rows), cols_(cols)
    {
        if (rows < 0 || cols < 0) {
            throw std::invalid_argument("Plane: negative dimensions " + std::to_string(rows) + "x" +
                                        std::to_string(cols));
        }
        data_.assign(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), fill);
    }

    int rows() const noexcept { return rows_; }
    int cols() const noexcept { return cols_; }
    int height() const noexcept { return rows_; }
    int width() const noexcept { return cols_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    double& operator()(int r, int c) noexcept
    {
        assert(r >= 0 && r < rows_ && c >= 0 && c < cols_);
        return data_[static_cast<std::size_t>(r) * cols_ + c];
    }
    double operator()(int r, int c) const noexcept
    {
        assert(r >= 0 && r < rows_ && c >= 0 && c < cols_);
        return data_[static_cast<std::size_t>(r) * cols_ + c];
    }

    std::span<double> row(int r) noexcept
    {
        return {data_.data() + static_cast<std::size_t>(r) * cols_, static_cast<std::size_t>(cols_)};
    }
    std::span<const double> row(int r) const noexcept
    {
        return {data_.data() + static_cast<std::size_t>(r) * cols_, static_cast<std::size_t>(cols_)};
    }

    std::span<double> values() noexcept { return data_; }
    std::span<const double> values() const noexcept { return data_; }

    Plane transposed() const
    {
        Plane t(cols_, rows_);
        for (int r = 0; r < rows_; ++r) {
            for (int c = 0; c < cols_; ++c) {
                t(c, r) = (*this)(r, c);
            }
        }
        return t;
    }

    Plane& operator+=(const Plane& other)
    {
        require_same_shape(other);
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
        return *this;
    }
    Plane& operator-=(const Plane& other)
    {
        require_same_shape(other);
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
        return *this;
    }
    Plane& operator*=(double s) noexcept
    {
        for (double& v : data_) v *= s;
        return *this;
    }

    friend Plane operator+(Plane a, const Plane& b) { return a += b; }
    friend Plane operator-(Plane a, const Plane& b) { return a -= b; }
    friend Plane operator*(Plane a, double s) { return a *= s; }
    friend Plane operator*(double s, Plane a) { return a *= s; }

    friend bool operator==(const Plane& a, const Plane& b)
    {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

    bool same_shape(const Plane& other) const noexcept
    {
        return rows_ == other.rows_ && cols_ == other.cols_;
    }

private:
    void require_same_shape(const Plane& other) const
    {
        if (!same_shape(other)) {
            throw std::invalid_argument("Plane: shape mismatch " + std::to_string(rows_) + "x" +
                                        std::to_string(cols_) + " vs " + std::to_string(other.rows_) +
                                        "x" + std::to_string(other.cols_));
        }
    }

    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> data_;
};

inline double max_abs_difference(const Plane& a, const Plane& b)
{
    if (!a.same_shape(b)) throw std::invalid_argument("max_abs_difference: shape mismatch");
    double m = 0.0;
    auto av = a.values();
    auto bv = b.values();
    for (std::size_t i = 0; i < av.size(); ++i) m = std::max(m, std::abs(av[i] - bv[i]));
    return m;
}

inline double frobenius_norm(const Plane& a)
{
    double s = 0.0;
    for (double v : a.values()) s += v * v;
    return std::sqrt(s);
}

inline double sum(const Plane& a)
{
    double s = 0.0;
    for (double v : a.values()) s += v;
    return s;
}

/// Copy of `p` cropped to the top-left `rows` x `cols` window.
inline Plane crop(const Plane& p, int rows, int cols)
{
    if (rows > p.rows() || cols > p.cols()) throw std::invalid_argument("crop: window exceeds plane");
    Plane out(rows, cols);
    for (int r = 0; r < rows; ++r) {
        std::copy_n(p.row(r).begin(), cols, out.row(r).begin());
    }
    return out;
}

}  // namespace dtcwtmark

#endif  // DTCWTMARK_PLANE_HPP
