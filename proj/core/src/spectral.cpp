#include "rkcf/spectral.hpp"

#include <fftw3.h>

#include <Eigen/Dense>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <tuple>

namespace rkcf {
namespace {

// FFTW planning is not thread-safe; execution of an existing plan on new
// arrays is. Plans are created once per (shape, direction) and never freed.
class PlanCache {
public:
    static PlanCache& instance() {
        static PlanCache cache;
        return cache;
    }

    fftw_plan get(Shape shape, int sign) {
        const auto key = std::make_tuple(shape.rows, shape.cols, sign);
        std::lock_guard lock(mutex_);
        if (auto it = plans_.find(key); it != plans_.end()) return it->second;

        std::vector<std::complex<double>> in(shape.size()), out(shape.size());
        auto* pin = reinterpret_cast<fftw_complex*>(in.data());
        auto* pout = reinterpret_cast<fftw_complex*>(out.data());
        const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
        fftw_plan plan = shape.rows == 1
                             ? fftw_plan_dft_1d(shape.cols, pin, pout, sign, flags)
                             : fftw_plan_dft_2d(shape.rows, shape.cols, pin, pout, sign, flags);
        plans_.emplace(key, plan);
        return plan;
    }

private:
    std::mutex mutex_;
    std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

ComplexGrid execute(const ComplexGrid& input, int sign) {
    detail::require(!input.empty(), "transform: empty input");
    ComplexGrid in = input;
    ComplexGrid out(input.shape());
    fftw_plan plan = PlanCache::instance().get(input.shape(), sign);
    fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(in.data()),
                     reinterpret_cast<fftw_complex*>(out.data()));
    return out;
}

void require_same_shape(Shape a, Shape b, const char* what) {
    if (a != b) throw InvalidArgument(std::string(what) + ": shape mismatch");
}

}  // namespace

Spectrum forward_transform(const ComplexGrid& signal) { return execute(signal, FFTW_FORWARD); }

Spectrum forward_transform(const RealGrid& signal) {
    ComplexGrid c(signal.shape());
    for (std::size_t i = 0; i < signal.size(); ++i) c[i] = signal[i];
    return forward_transform(c);
}

ComplexGrid inverse_transform_complex(const Spectrum& spectrum) {
    ComplexGrid out = execute(spectrum, FFTW_BACKWARD);
    const double scale = 1.0 / static_cast<double>(out.size());
    for (auto& v : out) v *= scale;
    return out;
}

RealGrid inverse_transform(const Spectrum& spectrum) {
    const ComplexGrid full = inverse_transform_complex(spectrum);
    RealGrid out(full.shape());
    for (std::size_t i = 0; i < full.size(); ++i) out[i] = full[i].real();
    return out;
}

RealGrid gaussian_target(Shape shape, double sigma) {
    detail::require(!shape.empty(), "gaussian_target: empty shape");
    detail::require(sigma > 0.0, "gaussian_target: sigma must be positive");
    RealGrid out(shape);
    const double denom = 2.0 * sigma * sigma;
    for (int r = 0; r < shape.rows; ++r) {
        const double dr = std::min(r, shape.rows - r);
        for (int c = 0; c < shape.cols; ++c) {
            const double dc = std::min(c, shape.cols - c);
            out(r, c) = std::exp(-(dr * dr + dc * dc) / denom);
        }
    }
    return out;
}

RealGrid cosine_window(Shape shape) {
    detail::require(shape.rows >= 2 && shape.cols >= 2, "cosine_window: each axis needs >= 2 elements");
    auto hann = [](int length) {
        std::vector<double> h(static_cast<std::size_t>(length));
        for (int i = 0; i < length; ++i)
            h[static_cast<std::size_t>(i)] =
                0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * i / (length - 1)));
        // cos() is not exact at the ends of the period
        h.front() = 0.0;
        h.back() = 0.0;
        return h;
    };
    const auto hr = hann(shape.rows);
    const auto hc = hann(shape.cols);
    RealGrid out(shape);
    for (int r = 0; r < shape.rows; ++r)
        for (int c = 0; c < shape.cols; ++c)
            out(r, c) = hr[static_cast<std::size_t>(r)] * hc[static_cast<std::size_t>(c)];
    return out;
}

RealGrid gaussian_window(Shape shape, double sigma) {
    detail::require(!shape.empty(), "gaussian_window: empty shape");
    detail::require(sigma > 0.0, "gaussian_window: sigma must be positive");
    const double cr = 0.5 * (shape.rows - 1);
    const double cc = 0.5 * (shape.cols - 1);
    RealGrid out(shape);
    for (int r = 0; r < shape.rows; ++r)
        for (int c = 0; c < shape.cols; ++c) {
            const double d2 = (r - cr) * (r - cr) + (c - cc) * (c - cc);
            out(r, c) = std::exp(-d2 / (2.0 * sigma * sigma));
        }
    return out;
}

Spectrum ridge_filter_spectrum(const Spectrum& x_hat, const Spectrum& y_hat, double lambda) {
    require_same_shape(x_hat.shape(), y_hat.shape(), "ridge_filter_spectrum");
    detail::require(lambda >= 0.0, "ridge_filter_spectrum: lambda must be non-negative");
    Spectrum w_hat(x_hat.shape());
    for (std::size_t i = 0; i < x_hat.size(); ++i) {
        const double denom = std::norm(x_hat[i]) + lambda;
        if (denom == 0.0) throw NumericalError("ridge_filter_spectrum: zero denominator");
        w_hat[i] = std::conj(x_hat[i]) * y_hat[i] / denom;
    }
    return w_hat;
}

Spectrum ridge_dual_spectrum(const Spectrum& k_hat, const Spectrum& y_hat, double lambda) {
    require_same_shape(k_hat.shape(), y_hat.shape(), "ridge_dual_spectrum");
    detail::require(lambda >= 0.0, "ridge_dual_spectrum: lambda must be non-negative");
    Spectrum alpha_hat(k_hat.shape());
    for (std::size_t i = 0; i < k_hat.size(); ++i) {
        const std::complex<double> denom = k_hat[i] + lambda;
        if (denom == 0.0) throw NumericalError("ridge_dual_spectrum: zero denominator");
        alpha_hat[i] = y_hat[i] / denom;
    }
    return alpha_hat;
}

RealGrid dense_circulant_ridge_oracle(const RealGrid& x, const RealGrid& y, double lambda) {
    require_same_shape(x.shape(), y.shape(), "dense_circulant_ridge_oracle");
    detail::require(!x.empty(), "dense_circulant_ridge_oracle: empty input");
    detail::require(x.size() <= kDenseOracleMaxSize, "dense_circulant_ridge_oracle: size exceeds 4096");
    detail::require(lambda >= 0.0, "dense_circulant_ridge_oracle: lambda must be non-negative");

    const int m = x.rows();
    const int n = x.cols();
    const auto size = static_cast<Eigen::Index>(x.size());

    // Block-circulant with circulant blocks: row (i1,i2), column (j1,j2) holds
    // x[(i1 - j1) mod m][(i2 - j2) mod n]. Column (j1,j2) is x shifted by (j1,j2).
    Eigen::MatrixXd data(size, size);
    for (int i1 = 0; i1 < m; ++i1)
        for (int i2 = 0; i2 < n; ++i2)
            for (int j1 = 0; j1 < m; ++j1)
                for (int j2 = 0; j2 < n; ++j2)
                    data(i1 * n + i2, j1 * n + j2) = x.wrapped(i1 - j1, i2 - j2);

    Eigen::VectorXd target(size);
    for (Eigen::Index i = 0; i < size; ++i) target(i) = y[static_cast<std::size_t>(i)];

    Eigen::MatrixXd normal = data.transpose() * data;
    normal.diagonal().array() += lambda;
    Eigen::LLT<Eigen::MatrixXd> llt(normal);
    if (llt.info() != Eigen::Success)
        throw NumericalError("dense_circulant_ridge_oracle: singular system");
    const Eigen::VectorXd w = llt.solve(data.transpose() * target);
    if (!w.allFinite()) throw NumericalError("dense_circulant_ridge_oracle: singular system");

    RealGrid out(x.shape());
    for (Eigen::Index i = 0; i < size; ++i) out[static_cast<std::size_t>(i)] = w(i);
    return out;
}

Spectrum multiply(const Spectrum& a, const Spectrum& b) {
    require_same_shape(a.shape(), b.shape(), "multiply");
    Spectrum out(a.shape());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
    return out;
}

Spectrum multiply_conj(const Spectrum& a, const Spectrum& b) {
    require_same_shape(a.shape(), b.shape(), "multiply_conj");
    Spectrum out(a.shape());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = std::conj(a[i]) * b[i];
    return out;
}

RealGrid multiply(const RealGrid& a, const RealGrid& b) {
    require_same_shape(a.shape(), b.shape(), "multiply");
    RealGrid out(a.shape());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
    return out;
}

}  // namespace rkcf
