#include "rkcf/cf_models.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace rkcf {
namespace {

void require_compatible(const FeatureMap& x, const FeatureMap& z, const char* what) {
    if (x.channels.empty() || x.channels.size() != z.channels.size())
        throw InvalidArgument(std::string(what) + ": channel count mismatch");
    for (std::size_t c = 0; c < x.channels.size(); ++c)
        if (x.channels[c].shape() != x.shape() || z.channels[c].shape() != x.shape())
            throw InvalidArgument(std::string(what) + ": shape mismatch");
}

// sum_c conj(x_hat_c) * z_hat_c
Spectrum cross_spectrum(const FeatureMap& x, const FeatureMap& z) {
    Spectrum acc(x.shape());
    for (std::size_t c = 0; c < x.channels.size(); ++c) {
        const Spectrum xc = forward_transform(x.channels[c]);
        const Spectrum zc = forward_transform(z.channels[c]);
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += std::conj(xc[i]) * zc[i];
    }
    return acc;
}

// Index of the first maximum.
std::size_t first_argmax(std::span<const double> v) {
    return static_cast<std::size_t>(std::distance(v.begin(), std::max_element(v.begin(), v.end())));
}

const OrientationDescriptor& checked(const OrientationDescriptor& a, const char* what) {
    if (a.bins.empty()) throw InvalidArgument(std::string(what) + ": empty descriptor");
    return a;
}

void require_same_length(const OrientationDescriptor& a, const OrientationDescriptor& b,
                         const char* what) {
    if (a.size() != b.size() || a.mode != b.mode)
        throw InvalidArgument(std::string(what) + ": descriptor length or mode mismatch");
}

RotationEstimate estimate_from_response(const RealGrid& response, double bin_width, bool refine) {
    RotationEstimate est;
    est.peak = *std::max_element(response.begin(), response.end());
    est.theta_deg = peak_shift_bins(response.values(), refine) * bin_width;
    return est;
}

RealGrid descriptor_kernel(const RotationFilterModel& model, const OrientationDescriptor& a_new) {
    const FeatureMap x(model.templ.as_grid());
    const FeatureMap z(a_new.as_grid());
    return model.kernel == RotationKernel::linear
               ? linear_kernel_correlation(x, z)
               : gaussian_kernel_correlation(x, z, model.kernel_sigma);
}

}  // namespace

double FeatureMap::squared_norm() const {
    double total = 0.0;
    for (const auto& ch : channels)
        total += std::inner_product(ch.begin(), ch.end(), ch.begin(), 0.0);
    return total;
}

RealGrid linear_kernel_correlation(const FeatureMap& x, const FeatureMap& z) {
    require_compatible(x, z, "linear_kernel_correlation");
    return inverse_transform(cross_spectrum(x, z));
}

RealGrid gaussian_kernel_correlation(const FeatureMap& x, const FeatureMap& z, double sigma,
                                     KernelNormalization normalization) {
    require_compatible(x, z, "gaussian_kernel_correlation");
    detail::require(sigma > 0.0, "gaussian_kernel_correlation: sigma must be positive");

    const RealGrid xz = inverse_transform(cross_spectrum(x, z));
    const double norms = x.squared_norm() + z.squared_norm();
    double scale = sigma * sigma;
    if (normalization == KernelNormalization::per_element)
        scale *= static_cast<double>(x.shape().size() * x.channels.size());

    RealGrid k(xz.shape());
    for (std::size_t i = 0; i < k.size(); ++i)
        k[i] = std::exp(-std::max(0.0, norms - 2.0 * xz[i]) / scale);
    return k;
}

KernelDualModel train_kernel_cf(const FeatureMap& x, const RealGrid& y, double kernel_sigma,
                                double lambda1, KernelNormalization normalization) {
    if (x.shape() != y.shape()) throw InvalidArgument("train_kernel_cf: target shape mismatch");
    const RealGrid kxx = gaussian_kernel_correlation(x, x, kernel_sigma, normalization);
    KernelDualModel model;
    model.alpha_hat = ridge_dual_spectrum(forward_transform(kxx), forward_transform(y), lambda1);
    model.templ = x;
    model.kernel_sigma = kernel_sigma;
    model.lambda1 = lambda1;
    model.normalization = normalization;
    return model;
}

LinearFilterModel train_linear_cf(const FeatureMap& x, const RealGrid& y, double lambda1) {
    if (x.channels.empty() || x.shape() != y.shape())
        throw InvalidArgument("train_linear_cf: target shape mismatch");
    const Spectrum y_hat = forward_transform(y);
    LinearFilterModel model;
    model.lambda1 = lambda1;
    for (const auto& ch : x.channels) {
        if (ch.shape() != y.shape()) throw InvalidArgument("train_linear_cf: channel shape mismatch");
        model.w_hat.push_back(ridge_filter_spectrum(forward_transform(ch), y_hat, lambda1));
    }
    return model;
}

TranslationDetection locate_peak(RealGrid response) {
    detail::require(!response.empty(), "locate_peak: empty response");
    const std::size_t idx = first_argmax(response.values());
    const int r = static_cast<int>(idx / static_cast<std::size_t>(response.cols()));
    const int c = static_cast<int>(idx % static_cast<std::size_t>(response.cols()));
    TranslationDetection det;
    det.dy = signed_offset(r, response.rows());
    det.dx = signed_offset(c, response.cols());
    det.peak = response[idx];
    det.response = std::move(response);
    return det;
}

TranslationDetection detect_translation(const KernelDualModel& model, const FeatureMap& z) {
    if (model.alpha_hat.shape() != z.shape())
        throw InvalidArgument("detect_translation: patch shape does not match model");
    const RealGrid kxz =
        gaussian_kernel_correlation(model.templ, z, model.kernel_sigma, model.normalization);
    return locate_peak(inverse_transform(multiply(forward_transform(kxz), model.alpha_hat)));
}

TranslationDetection detect_translation(const LinearFilterModel& model, const FeatureMap& z) {
    if (model.w_hat.size() != z.channels.size() || model.shape() != z.shape())
        throw InvalidArgument("detect_translation: patch shape does not match model");
    Spectrum acc(model.shape());
    for (std::size_t c = 0; c < z.channels.size(); ++c) {
        const Spectrum zc = forward_transform(z.channels[c]);
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += zc[i] * model.w_hat[c][i];
    }
    return locate_peak(inverse_transform(acc));
}

KernelDualModel update_model(const KernelDualModel& old_model, const KernelDualModel& fresh,
                             double eta) {
    detail::require(eta >= 0.0 && eta <= 1.0, "update_model: eta must lie in [0, 1]");
    if (old_model.alpha_hat.shape() != fresh.alpha_hat.shape())
        throw InvalidArgument("update_model: shape mismatch");
    require_compatible(old_model.templ, fresh.templ, "update_model");

    KernelDualModel out = old_model;
    for (std::size_t i = 0; i < out.alpha_hat.size(); ++i)
        out.alpha_hat[i] = (1.0 - eta) * old_model.alpha_hat[i] + eta * fresh.alpha_hat[i];
    for (std::size_t c = 0; c < out.templ.channels.size(); ++c) {
        auto& dst = out.templ.channels[c];
        const auto& src = fresh.templ.channels[c];
        for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = (1.0 - eta) * dst[i] + eta * src[i];
    }
    return out;
}

RotationFilterModel train_rotation_filter(const OrientationDescriptor& a, const RealGrid& g,
                                          double lambda2, RotationKernel kernel,
                                          double kernel_sigma) {
    checked(a, "train_rotation_filter");
    if (g.rows() != 1 || g.cols() != a.size())
        throw InvalidArgument("train_rotation_filter: target length must equal descriptor length");
    detail::require(lambda2 >= 0.0, "train_rotation_filter: lambda2 must be non-negative");

    RotationFilterModel model;
    model.templ = a;
    model.lambda2 = lambda2;
    model.kernel = kernel;
    model.kernel_sigma = kernel_sigma;
    model.g_hat = forward_transform(g);
    if (a.degenerate) {
        model.inert = true;
        model.r_hat = Spectrum(g.shape());
        model.alpha_r_hat = Spectrum(g.shape());
        return model;
    }

    const Spectrum a_hat = forward_transform(a.as_grid());
    model.r_hat = ridge_filter_spectrum(a_hat, model.g_hat, lambda2);
    const Spectrum k_hat = forward_transform(descriptor_kernel(model, a));
    model.alpha_r_hat = ridge_dual_spectrum(k_hat, model.g_hat, lambda2);
    return model;
}

RotationEstimate detect_rotation_filter(const RotationFilterModel& model,
                                        const OrientationDescriptor& a_new, bool refine) {
    require_same_length(model.templ, checked(a_new, "detect_rotation_filter"),
                        "detect_rotation_filter");
    if (model.inert || a_new.degenerate) return {0.0, 0.0, false};
    const Spectrum k_hat = forward_transform(descriptor_kernel(model, a_new));
    return estimate_from_response(inverse_transform(multiply(k_hat, model.alpha_r_hat)),
                                  model.bin_width(), refine);
}

RotationEstimate detect_rotation_filter_primal(const RotationFilterModel& model,
                                               const OrientationDescriptor& a_new, bool refine) {
    require_same_length(model.templ, checked(a_new, "detect_rotation_filter_primal"),
                        "detect_rotation_filter_primal");
    if (model.inert || a_new.degenerate) return {0.0, 0.0, false};
    const Spectrum a_hat = forward_transform(a_new.as_grid());
    return estimate_from_response(inverse_transform(multiply(a_hat, model.r_hat)),
                                  model.bin_width(), refine);
}

RotationEstimate detect_rotation_correlation(const OrientationDescriptor& a_old,
                                             const OrientationDescriptor& a_new, bool refine) {
    require_same_length(checked(a_old, "detect_rotation_correlation"), a_new,
                        "detect_rotation_correlation");
    if (a_old.degenerate || a_new.degenerate) return {0.0, 0.0, false};
    const RealGrid corr = inverse_transform(
        multiply_conj(forward_transform(a_old.as_grid()), forward_transform(a_new.as_grid())));
    return estimate_from_response(corr, a_old.bin_width(), refine);
}

RotationEstimate detect_rotation_maxshift(const OrientationDescriptor& a_old,
                                          const OrientationDescriptor& a_new) {
    require_same_length(checked(a_old, "detect_rotation_maxshift"), a_new,
                        "detect_rotation_maxshift");
    if (a_old.degenerate || a_new.degenerate) return {0.0, 0.0, false};
    const int b = a_old.size();
    const auto i_old = static_cast<int>(first_argmax(a_old.bins));
    const auto i_new = static_cast<int>(first_argmax(a_new.bins));
    const int shift = signed_offset(((i_new - i_old) % b + b) % b, b);
    RotationEstimate est;
    est.theta_deg = shift * a_old.bin_width();
    est.peak = a_new.bins[static_cast<std::size_t>(i_new)];
    return est;
}

double peak_shift_bins(std::span<const double> response, bool refine) {
    detail::require(!response.empty(), "peak_shift_bins: empty response");
    const int b = static_cast<int>(response.size());
    const int idx = static_cast<int>(first_argmax(response));
    double shift = signed_offset(idx, b);
    if (!refine || b < 3) return shift;

    const double left = response[static_cast<std::size_t>((idx - 1 + b) % b)];
    const double centre = response[static_cast<std::size_t>(idx)];
    const double right = response[static_cast<std::size_t>((idx + 1) % b)];
    const double curvature = left - 2.0 * centre + right;
    const double slope = left - right;
    // symmetric neighbourhoods differ only by FFT round-off
    if (curvature >= 0.0 || std::abs(slope) <= 1e-12 * std::abs(centre)) return shift;
    return shift + std::clamp(0.5 * slope / curvature, -0.5, 0.5);
}

}  // namespace rkcf
