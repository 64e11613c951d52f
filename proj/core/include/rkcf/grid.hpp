#pragma once

#include <algorithm>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "rkcf/error.hpp"

namespace rkcf {

struct Shape {
    int rows = 0;
    int cols = 0;

    [[nodiscard]] constexpr std::size_t size() const noexcept {
        return static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);
    }
    [[nodiscard]] constexpr bool empty() const noexcept { return rows <= 0 || cols <= 0; }
    friend constexpr bool operator==(Shape, Shape) = default;
};

/// Dense row-major 2D array. A 1D signal of length b is a 1×b grid.
template <typename T>
class Grid {
public:
    using value_type = T;

    Grid() = default;
    explicit Grid(Shape shape, T fill = T{})
        : shape_(shape), data_(checked_size(shape), fill) {}
    Grid(int rows, int cols, T fill = T{}) : Grid(Shape{rows, cols}, fill) {}
    Grid(Shape shape, std::vector<T> values) : shape_(shape), data_(std::move(values)) {
        detail::require(data_.size() == checked_size(shape), "Grid: value count does not match shape");
    }

    static Grid row_vector(std::vector<T> values) {
        const int n = static_cast<int>(values.size());
        return Grid(Shape{1, n}, std::move(values));
    }

    [[nodiscard]] Shape shape() const noexcept { return shape_; }
    [[nodiscard]] int rows() const noexcept { return shape_.rows; }
    [[nodiscard]] int cols() const noexcept { return shape_.cols; }
    [[nodiscard]] std::size_t size() const noexcept { return data_.size(); }
    [[nodiscard]] bool empty() const noexcept { return data_.empty(); }

    T& operator()(int r, int c) noexcept { return data_[index(r, c)]; }
    const T& operator()(int r, int c) const noexcept { return data_[index(r, c)]; }
    T& operator[](std::size_t i) noexcept { return data_[i]; }
    const T& operator[](std::size_t i) const noexcept { return data_[i]; }

    /// Circular (wrap-around) access.
    const T& wrapped(int r, int c) const noexcept {
        r %= shape_.rows;
        c %= shape_.cols;
        if (r < 0) r += shape_.rows;
        if (c < 0) c += shape_.cols;
        return data_[index(r, c)];
    }

    /// Edge-replicated access.
    const T& clamped(int r, int c) const noexcept {
        r = std::clamp(r, 0, shape_.rows - 1);
        c = std::clamp(c, 0, shape_.cols - 1);
        return data_[index(r, c)];
    }

    [[nodiscard]] std::span<T> values() noexcept { return data_; }
    [[nodiscard]] std::span<const T> values() const noexcept { return data_; }
    [[nodiscard]] T* data() noexcept { return data_.data(); }
    [[nodiscard]] const T* data() const noexcept { return data_.data(); }

    auto begin() noexcept { return data_.begin(); }
    auto end() noexcept { return data_.end(); }
    auto begin() const noexcept { return data_.begin(); }
    auto end() const noexcept { return data_.end(); }

    friend bool operator==(const Grid&, const Grid&) = default;

private:
    static std::size_t checked_size(Shape shape) {
        detail::require(shape.rows >= 0 && shape.cols >= 0, "Grid: negative dimension");
        return shape.size();
    }
    [[nodiscard]] std::size_t index(int r, int c) const noexcept {
        return static_cast<std::size_t>(r) * static_cast<std::size_t>(shape_.cols) +
               static_cast<std::size_t>(c);
    }

    Shape shape_{};
    std::vector<T> data_;
};

using RealGrid = Grid<double>;
using ComplexGrid = Grid<std::complex<double>>;

/// Circular shift: result(r, c) = g(r - dr, c - dc).
template <typename T>
Grid<T> circular_shift(const Grid<T>& g, int dr, int dc) {
    Grid<T> out(g.shape());
    for (int r = 0; r < g.rows(); ++r)
        for (int c = 0; c < g.cols(); ++c) out(r, c) = g.wrapped(r - dr, c - dc);
    return out;
}

/// Signed circular offset of an index into [-L/2, L/2) (even L) or [-(L-1)/2, (L-1)/2] (odd L).
constexpr int signed_offset(int index, int length) noexcept {
    return index >= (length + 1) / 2 ? index - length : index;
}

}  // namespace rkcf
