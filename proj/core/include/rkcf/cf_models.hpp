#pragma once

#include <vector>

#include "rkcf/features.hpp"
#include "rkcf/grid.hpp"
#include "rkcf/spectral.hpp"

namespace rkcf {

/// Spatially aligned feature channels (one for grayscale, one per bin for cell HOG).
struct FeatureMap {
    std::vector<RealGrid> channels;

    FeatureMap() = default;
    explicit FeatureMap(RealGrid single) { channels.push_back(std::move(single)); }
    explicit FeatureMap(std::vector<RealGrid> chans) : channels(std::move(chans)) {}

    [[nodiscard]] Shape shape() const { return channels.empty() ? Shape{} : channels.front().shape(); }
    [[nodiscard]] double squared_norm() const;
    friend bool operator==(const FeatureMap&, const FeatureMap&) = default;
};

/// How the squared distance is scaled inside the Gaussian kernel exponent.
enum class KernelNormalization {
    none,         ///< exp(-d / sigma^2)
    per_element,  ///< exp(-d / (sigma^2 * N)), N = spatial size times channel count
};

/// Linear kernel vector over all circular shifts: k[t] = sum_c sum_u x_c[u] z_c[u + t].
[[nodiscard]] RealGrid linear_kernel_correlation(const FeatureMap& x, const FeatureMap& z);

/// Gaussian kernel vector over all circular shifts:
/// k[t] = exp(-max(0, |x|^2 + |z|^2 - 2 sum_c x_c * z_c [t]) / sigma^2).
[[nodiscard]] RealGrid gaussian_kernel_correlation(
    const FeatureMap& x, const FeatureMap& z, double sigma,
    KernelNormalization normalization = KernelNormalization::none);

// ---------------------------------------------------------------------------
// Translation filters

struct KernelDualModel {
    Spectrum alpha_hat;
    FeatureMap templ;
    double kernel_sigma = 0.5;
    double lambda1 = 1e-4;
    KernelNormalization normalization = KernelNormalization::none;

    friend bool operator==(const KernelDualModel&, const KernelDualModel&) = default;
};

struct LinearFilterModel {
    std::vector<Spectrum> w_hat;  ///< one per channel
    double lambda1 = 1e-4;

    [[nodiscard]] Shape shape() const { return w_hat.empty() ? Shape{} : w_hat.front().shape(); }
};

struct TranslationDetection {
    int dy = 0;
    int dx = 0;
    double peak = 0.0;
    RealGrid response;
};

[[nodiscard]] KernelDualModel train_kernel_cf(
    const FeatureMap& x, const RealGrid& y, double kernel_sigma, double lambda1,
    KernelNormalization normalization = KernelNormalization::none);

[[nodiscard]] LinearFilterModel train_linear_cf(const FeatureMap& x, const RealGrid& y,
                                                double lambda1);

/// Response = IDFT(DFT(k^{templ,z}) * alpha_hat); argmax mapped to a signed shift.
[[nodiscard]] TranslationDetection detect_translation(const KernelDualModel& model,
                                                      const FeatureMap& z);

/// Response = sum over channels of IDFT(z_hat_c * w_hat_c).
[[nodiscard]] TranslationDetection detect_translation(const LinearFilterModel& model,
                                                      const FeatureMap& z);

/// Argmax (first in row-major order on ties) converted to a signed circular shift.
[[nodiscard]] TranslationDetection locate_peak(RealGrid response);

/// (1 - eta) * old + eta * fresh for both alpha_hat and the template.
[[nodiscard]] KernelDualModel update_model(const KernelDualModel& old_model,
                                           const KernelDualModel& fresh, double eta);

// ---------------------------------------------------------------------------
// Rotation estimators over global orientation descriptors

enum class RotationKernel { linear, gaussian };

struct RotationFilterModel {
    Spectrum r_hat;        ///< primal solution
    Spectrum alpha_r_hat;  ///< dual solution
    Spectrum g_hat;
    OrientationDescriptor templ;
    double lambda2 = 1e-4;
    RotationKernel kernel = RotationKernel::linear;
    double kernel_sigma = 0.5;
    /// Trained on a zero descriptor; detection always reports theta = 0.
    bool inert = false;

    [[nodiscard]] double bin_width() const { return templ.bin_width(); }
};

struct RotationEstimate {
    double theta_deg = 0.0;
    double peak = 0.0;
    /// False when either descriptor is degenerate.
    bool confident = true;
};

[[nodiscard]] RotationFilterModel train_rotation_filter(
    const OrientationDescriptor& a, const RealGrid& g, double lambda2,
    RotationKernel kernel = RotationKernel::linear, double kernel_sigma = 0.5);

/// Dual-form detection: response = IDFT(DFT(k^{templ,a_new}) * alpha_r_hat).
[[nodiscard]] RotationEstimate detect_rotation_filter(const RotationFilterModel& model,
                                                      const OrientationDescriptor& a_new,
                                                      bool refine = true);

/// Primal-form detection: response = IDFT(a_new_hat * r_hat).
[[nodiscard]] RotationEstimate detect_rotation_filter_primal(const RotationFilterModel& model,
                                                             const OrientationDescriptor& a_new,
                                                             bool refine = true);

/// Peak of the circular cross-correlation between the two descriptors.
[[nodiscard]] RotationEstimate detect_rotation_correlation(const OrientationDescriptor& a_old,
                                                           const OrientationDescriptor& a_new,
                                                           bool refine = true);

/// Signed circular difference of the two argmax bins.
[[nodiscard]] RotationEstimate detect_rotation_maxshift(const OrientationDescriptor& a_old,
                                                        const OrientationDescriptor& a_new);

/// Signed circular peak position of a 1D response in bins, optionally refined
/// by a parabola through the peak and its two circular neighbours.
[[nodiscard]] double peak_shift_bins(std::span<const double> response, bool refine);

}  // namespace rkcf
