#pragma once

#include "rkcf/grid.hpp"

// Fourier-domain building blocks shared by the translation and rotation filters.
//
// Conventions:
//  * forward transform is unnormalized, inverse is scaled by 1/N;
//  * targets put their peak at element 0 (circularly wrapped), so "no motion"
//    means "argmax at index 0";
//  * ridge solutions use the conjugate-correct form, which is what the explicit
//    circulant solve in dense_circulant_ridge_oracle() produces.

namespace rkcf {

using Spectrum = ComplexGrid;

/// 2D DFT of a real grid (1D when rows == 1).
[[nodiscard]] Spectrum forward_transform(const RealGrid& signal);
[[nodiscard]] Spectrum forward_transform(const ComplexGrid& signal);

/// Inverse DFT, real part only.
[[nodiscard]] RealGrid inverse_transform(const Spectrum& spectrum);

/// Inverse DFT keeping the imaginary part (for residue checks).
[[nodiscard]] ComplexGrid inverse_transform_complex(const Spectrum& spectrum);

/// Circularly wrapped Gaussian with peak 1 at element (0, 0):
/// value = exp(-|d|^2 / (2 sigma^2)) where d is the circular offset from the origin.
[[nodiscard]] RealGrid gaussian_target(Shape shape, double sigma);

/// Outer product of 1D Hann profiles 0.5 (1 - cos(2 pi i / (L - 1))).
[[nodiscard]] RealGrid cosine_window(Shape shape);

/// Gaussian envelope with peak 1 at the geometric centre ((rows-1)/2, (cols-1)/2).
[[nodiscard]] RealGrid gaussian_window(Shape shape, double sigma);

/// Primal ridge regression over all circular shifts of x:
/// w_hat = conj(x_hat) * y_hat / (conj(x_hat) * x_hat + lambda), elementwise.
[[nodiscard]] Spectrum ridge_filter_spectrum(const Spectrum& x_hat, const Spectrum& y_hat,
                                             double lambda);

/// Dual ridge regression: alpha_hat = y_hat / (k_hat + lambda), elementwise.
[[nodiscard]] Spectrum ridge_dual_spectrum(const Spectrum& k_hat, const Spectrum& y_hat,
                                           double lambda);

/// Reference solver: builds the explicit (block-)circulant data matrix X with
/// X[i][j] = x[(i - j) mod N] and returns (X^T X + lambda I)^-1 X^T y.
/// O(N^3), limited to N <= 4096.
[[nodiscard]] RealGrid dense_circulant_ridge_oracle(const RealGrid& x, const RealGrid& y,
                                                    double lambda);

inline constexpr std::size_t kDenseOracleMaxSize = 4096;

// Elementwise helpers.
[[nodiscard]] Spectrum multiply(const Spectrum& a, const Spectrum& b);
[[nodiscard]] Spectrum multiply_conj(const Spectrum& a, const Spectrum& b);  ///< conj(a) * b
[[nodiscard]] RealGrid multiply(const RealGrid& a, const RealGrid& b);

}  // namespace rkcf
