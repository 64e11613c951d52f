#pragma once

// Independent reference implementations and random generators for the tests.
// Nothing here calls into the code under test except the plain Grid type.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "rkcf/grid.hpp"

namespace rkcf::testing {

using cd = std::complex<double>;

class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo = 0.0, double hi = 1.0) {
        return std::uniform_real_distribution<double>(lo, hi)(rng_);
    }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    double normal() { return std::normal_distribution<double>(0.0, 1.0)(rng_); }

    RealGrid grid(int rows, int cols, double lo = -1.0, double hi = 1.0) {
        RealGrid g(rows, cols);
        for (auto& v : g) v = uniform(lo, hi);
        return g;
    }
    std::vector<double> vec(int n, double lo = 0.0, double hi = 1.0) {
        std::vector<double> v(static_cast<std::size_t>(n));
        for (auto& x : v) x = uniform(lo, hi);
        return v;
    }

private:
    std::mt19937_64 rng_;
};

/// O(N^2) textbook 2D DFT, unnormalized forward.
inline ComplexGrid naive_dft(const RealGrid& x) {
    const int m = x.rows(), n = x.cols();
    ComplexGrid out(m, n);
    for (int k = 0; k < m; ++k)
        for (int l = 0; l < n; ++l) {
            cd acc = 0.0;
            for (int r = 0; r < m; ++r)
                for (int c = 0; c < n; ++c) {
                    const double ph = -2.0 * std::numbers::pi *
                                      (static_cast<double>(k * r) / m + static_cast<double>(l * c) / n);
                    acc += x(r, c) * cd(std::cos(ph), std::sin(ph));
                }
            out(k, l) = acc;
        }
    return out;
}

/// Explicit circular cross-correlation c[t] = sum_u x[u] z[u + t].
inline RealGrid naive_xcorr(const RealGrid& x, const RealGrid& z) {
    RealGrid out(x.shape());
    for (int tr = 0; tr < x.rows(); ++tr)
        for (int tc = 0; tc < x.cols(); ++tc) {
            double acc = 0.0;
            for (int r = 0; r < x.rows(); ++r)
                for (int c = 0; c < x.cols(); ++c) acc += x(r, c) * z.wrapped(r + tr, c + tc);
            out(tr, tc) = acc;
        }
    return out;
}

/// Gaussian kernel by explicit shift-and-subtract: exp(-|x - z(. + t)|^2 / scale).
inline RealGrid naive_gaussian_kernel(const std::vector<RealGrid>& x, const std::vector<RealGrid>& z,
                                      double scale) {
    const int m = x.front().rows(), n = x.front().cols();
    RealGrid out(m, n);
    for (int tr = 0; tr < m; ++tr)
        for (int tc = 0; tc < n; ++tc) {
            double d = 0.0;
            for (std::size_t ch = 0; ch < x.size(); ++ch)
                for (int r = 0; r < m; ++r)
                    for (int c = 0; c < n; ++c) {
                        const double diff = x[ch](r, c) - z[ch].wrapped(r + tr, c + tc);
                        d += diff * diff;
                    }
            out(tr, tc) = std::exp(-d / scale);
        }
    return out;
}

/// Relative L2 error |a - b| / max(|b|, tiny).
inline double rel_error(const RealGrid& a, const RealGrid& b) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num += (a[i] - b[i]) * (a[i] - b[i]);
        den += b[i] * b[i];
    }
    return std::sqrt(num) / std::max(std::sqrt(den), 1e-300);
}

inline double max_abs_diff(const RealGrid& a, const RealGrid& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

/// Sinusoidal grating, stripes whose gradient points along `angle_deg` under the
/// library's rotation convention (angle measured from the column axis toward the row axis).
inline RealGrid grating(int size, double angle_deg, double period) {
    RealGrid g(size, size);
    const double a = angle_deg * std::numbers::pi / 180.0;
    const double c0 = 0.5 * (size - 1);
    for (int r = 0; r < size; ++r)
        for (int c = 0; c < size; ++c) {
            const double u = (c - c0) * std::cos(a) + (r - c0) * std::sin(a);
            g(r, c) = 0.5 + 0.4 * std::sin(2.0 * std::numbers::pi * u / period);
        }
    return g;
}

/// Population standard deviation, two-pass.
inline double population_std(const std::vector<double>& v) {
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / static_cast<double>(v.size()));
}

/// Dense normal-equation ridge solve via Gaussian elimination with partial
/// pivoting, data matrix X[i][j] = x[(i - j) mod N] (block-circulant in 2D).
inline RealGrid gauss_ridge(const RealGrid& x, const RealGrid& y, double lambda) {
    const int m = x.rows(), n = x.cols(), N = m * n;
    auto X = [&](int i, int j) {
        const int ir = i / n, ic = i % n, jr = j / n, jc = j % n;
        return x.wrapped(ir - jr, ic - jc);
    };
    std::vector<double> A(static_cast<std::size_t>(N) * N), b(static_cast<std::size_t>(N));
    for (int i = 0; i < N; ++i) {
        for (int j = 0; j < N; ++j) {
            double s = 0.0;
            for (int k = 0; k < N; ++k) s += X(k, i) * X(k, j);
            A[static_cast<std::size_t>(i) * N + j] = s + (i == j ? lambda : 0.0);
        }
        double s = 0.0;
        for (int k = 0; k < N; ++k) s += X(k, i) * y[static_cast<std::size_t>(k)];
        b[static_cast<std::size_t>(i)] = s;
    }
    for (int col = 0; col < N; ++col) {
        int piv = col;
        for (int r = col + 1; r < N; ++r)
            if (std::abs(A[static_cast<std::size_t>(r) * N + col]) > std::abs(A[static_cast<std::size_t>(piv) * N + col]))
                piv = r;
        for (int c = 0; c < N; ++c) std::swap(A[static_cast<std::size_t>(col) * N + c], A[static_cast<std::size_t>(piv) * N + c]);
        std::swap(b[static_cast<std::size_t>(col)], b[static_cast<std::size_t>(piv)]);
        for (int r = col + 1; r < N; ++r) {
            const double f = A[static_cast<std::size_t>(r) * N + col] / A[static_cast<std::size_t>(col) * N + col];
            for (int c = col; c < N; ++c) A[static_cast<std::size_t>(r) * N + c] -= f * A[static_cast<std::size_t>(col) * N + c];
            b[static_cast<std::size_t>(r)] -= f * b[static_cast<std::size_t>(col)];
        }
    }
    std::vector<double> w(static_cast<std::size_t>(N));
    for (int r = N - 1; r >= 0; --r) {
        double s = b[static_cast<std::size_t>(r)];
        for (int c = r + 1; c < N; ++c) s -= A[static_cast<std::size_t>(r) * N + c] * w[static_cast<std::size_t>(c)];
        w[static_cast<std::size_t>(r)] = s / A[static_cast<std::size_t>(r) * N + r];
    }
    return RealGrid(x.shape(), std::move(w));
}

}  // namespace rkcf::testing
