#include "rkcf/features.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace rkcf {
namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

// cos/sin that are exact at multiples of 90 degrees, so quarter and half turns
// remap pixels without interpolation.
std::pair<double, double> cos_sin_deg(double theta_deg) {
    const double quarter = theta_deg / 90.0;
    if (quarter == std::round(quarter)) {
        switch (((static_cast<long>(std::round(quarter)) % 4) + 4) % 4) {
            case 0: return {1.0, 0.0};
            case 1: return {0.0, 1.0};
            case 2: return {-1.0, 0.0};
            default: return {0.0, -1.0};
        }
    }
    const double rad = theta_deg * kDegToRad;
    return {std::cos(rad), std::sin(rad)};
}

double sample_bilinear_clamped(const RealGrid& g, double row, double col) {
    row = std::clamp(row, 0.0, static_cast<double>(g.rows() - 1));
    col = std::clamp(col, 0.0, static_cast<double>(g.cols() - 1));
    const int r0 = static_cast<int>(std::floor(row));
    const int c0 = static_cast<int>(std::floor(col));
    const double fr = row - r0;
    const double fc = col - c0;
    const double top = (1.0 - fc) * g.clamped(r0, c0) + fc * g.clamped(r0, c0 + 1);
    const double bottom = (1.0 - fc) * g.clamped(r0 + 1, c0) + fc * g.clamped(r0 + 1, c0 + 1);
    return (1.0 - fr) * top + fr * bottom;
}

struct Gradients {
    RealGrid gx;
    RealGrid gy;
};

Gradients centered_gradients(const RealGrid& p) {
    Gradients g{RealGrid(p.shape()), RealGrid(p.shape())};
    for (int r = 0; r < p.rows(); ++r)
        for (int c = 0; c < p.cols(); ++c) {
            g.gx(r, c) = p.clamped(r, c + 1) - p.clamped(r, c - 1);
            g.gy(r, c) = p.clamped(r + 1, c) - p.clamped(r - 1, c);
        }
    return g;
}

// Orientation in degrees, folded to [0, span).
double orientation_deg(double gy, double gx, double span) {
    double phi = std::atan2(gy, gx) / kDegToRad;
    phi = std::fmod(phi, span);
    if (phi < 0.0) phi += span;
    if (phi >= span) phi -= span;
    return phi;
}

}  // namespace

Patch::Patch(RealGrid pixels, int frame_index, PixelPoint center)
    : pixels_(std::move(pixels)), frame_index_(frame_index), center_(center) {
    detail::require(pixels_.rows() >= kMinSide && pixels_.cols() >= kMinSide,
                    "Patch: both sides must be at least 8 pixels");
    for (double v : pixels_)
        detail::require(std::isfinite(v) && v >= 0.0 && v <= 1.0,
                        "Patch: pixel values must be finite and within [0, 1]");
}

RealGrid crop_replicated(const RealGrid& frame, PixelPoint center, Shape size) {
    detail::require(!frame.empty(), "extract_patch: empty frame");
    detail::require(!size.empty(), "extract_patch: patch size must be positive");
    const int top = static_cast<int>(std::floor(center.row)) - size.rows / 2;
    const int left = static_cast<int>(std::floor(center.col)) - size.cols / 2;
    RealGrid out(size);
    for (int r = 0; r < size.rows; ++r)
        for (int c = 0; c < size.cols; ++c) out(r, c) = frame.clamped(top + r, left + c);
    return out;
}

Patch extract_patch(const RealGrid& frame, PixelPoint center, Shape size, int frame_index) {
    return Patch(crop_replicated(frame, center, size), frame_index, center);
}

RealGrid to_grayscale(const Image& image) {
    detail::require(image.channels == 1 || image.channels == 3,
                    "to_grayscale: expected 1 or 3 channels");
    detail::require(image.data.size() ==
                        static_cast<std::size_t>(image.rows) * image.cols * image.channels,
                    "to_grayscale: data size does not match dimensions");
    RealGrid out(image.rows, image.cols);
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (image.channels == 1) {
            out[i] = image.data[i];
        } else {
            const double* px = &image.data[3 * i];
            out[i] = 0.299 * px[0] + 0.587 * px[1] + 0.114 * px[2];
        }
    }
    return out;
}

RealGrid apply_window(const RealGrid& patch, const RealGrid& window) {
    if (patch.shape() != window.shape()) throw InvalidArgument("apply_window: shape mismatch");
    const double mean =
        std::accumulate(patch.begin(), patch.end(), 0.0) / static_cast<double>(patch.size());
    RealGrid out(patch.shape());
    for (std::size_t i = 0; i < patch.size(); ++i) out[i] = (patch[i] - mean) * window[i];
    return out;
}

OrientationDescriptor global_hog(const RealGrid& patch, int bins, OrientationMode mode,
                                 bool smoothing) {
    detail::require(bins >= kMinDescriptorBins, "global_hog: need at least 8 bins");
    detail::require(!patch.empty(), "global_hog: empty patch");

    OrientationDescriptor desc;
    desc.mode = mode;
    desc.bins.assign(static_cast<std::size_t>(bins), 0.0);
    const double span = desc.span_deg();
    const double width = span / bins;

    const Gradients g = centered_gradients(patch);
    double total = 0.0;
    for (std::size_t i = 0; i < patch.size(); ++i) {
        const double mag = std::hypot(g.gx[i], g.gy[i]);
        if (mag == 0.0) continue;
        const double pos = orientation_deg(g.gy[i], g.gx[i], span) / width;
        const int lo = static_cast<int>(std::floor(pos)) % bins;
        const int hi = (lo + 1) % bins;
        const double frac = pos - std::floor(pos);
        desc.bins[static_cast<std::size_t>(lo)] += mag * (1.0 - frac);
        desc.bins[static_cast<std::size_t>(hi)] += mag * frac;
        total += mag;
    }

    if (total <= 1e-12) {
        std::fill(desc.bins.begin(), desc.bins.end(), 0.0);
        desc.degenerate = true;
        return desc;
    }

    if (smoothing) {
        static constexpr double kTaps[5] = {1.0 / 16, 4.0 / 16, 6.0 / 16, 4.0 / 16, 1.0 / 16};
        std::vector<double> smoothed(desc.bins.size(), 0.0);
        for (int k = 0; k < bins; ++k)
            for (int t = -2; t <= 2; ++t)
                smoothed[static_cast<std::size_t>(k)] +=
                    kTaps[t + 2] * desc.bins[static_cast<std::size_t>(((k + t) % bins + bins) % bins)];
        desc.bins = std::move(smoothed);
    }

    const double norm = std::sqrt(
        std::inner_product(desc.bins.begin(), desc.bins.end(), desc.bins.begin(), 0.0));
    for (double& v : desc.bins) v /= norm;
    return desc;
}

RealGrid rotate_patch(const RealGrid& patch, double theta_deg) {
    detail::require(!patch.empty(), "rotate_patch: empty patch");
    detail::require(std::abs(theta_deg) <= 180.0, "rotate_patch: |theta| must be <= 180 degrees");
    if (theta_deg == 0.0) return patch;

    const auto [cs, sn] = cos_sin_deg(theta_deg);
    const double cr = 0.5 * (patch.rows() - 1);
    const double cc = 0.5 * (patch.cols() - 1);
    RealGrid out(patch.shape());
    for (int r = 0; r < patch.rows(); ++r) {
        const double y = r - cr;
        for (int c = 0; c < patch.cols(); ++c) {
            const double x = c - cc;
            // inverse map: source = R(-theta) * destination
            const double xs = x * cs + y * sn;
            const double ys = -x * sn + y * cs;
            out(r, c) = sample_bilinear_clamped(patch, ys + cr, xs + cc);
        }
    }
    return out;
}

Patch rotate_patch(const Patch& patch, double theta_deg) {
    return Patch(rotate_patch(patch.pixels(), theta_deg), patch.frame_index(), patch.center());
}

Displacement rotate_displacement(Displacement d, double theta_deg) {
    const auto [cs, sn] = cos_sin_deg(theta_deg);
    return {d.dx * sn + d.dy * cs, d.dx * cs - d.dy * sn};
}

RealGrid resize_bilinear(const RealGrid& image, Shape size) {
    detail::require(!image.empty() && !size.empty(), "resize_bilinear: empty input");
    RealGrid out(size);
    const double sr = static_cast<double>(image.rows()) / size.rows;
    const double sc = static_cast<double>(image.cols()) / size.cols;
    for (int r = 0; r < size.rows; ++r)
        for (int c = 0; c < size.cols; ++c)
            out(r, c) = sample_bilinear_clamped(image, (r + 0.5) * sr - 0.5, (c + 0.5) * sc - 0.5);
    return out;
}

std::vector<RealGrid> cell_hog(const RealGrid& patch, int cell_size, int bins) {
    detail::require(cell_size >= 1 && bins >= 2, "cell_hog: invalid cell size or bin count");
    const Shape cells{patch.rows() / cell_size, patch.cols() / cell_size};
    detail::require(!cells.empty(), "cell_hog: patch smaller than one cell");

    std::vector<RealGrid> hist(static_cast<std::size_t>(bins), RealGrid(cells));
    const Gradients g = centered_gradients(patch);
    const double width = 180.0 / bins;
    for (int r = 0; r < cells.rows * cell_size; ++r)
        for (int c = 0; c < cells.cols * cell_size; ++c) {
            const double gx = g.gx(r, c);
            const double gy = g.gy(r, c);
            const double mag = std::hypot(gx, gy);
            if (mag == 0.0) continue;
            const double pos = orientation_deg(gy, gx, 180.0) / width;
            const int lo = static_cast<int>(std::floor(pos)) % bins;
            const double frac = pos - std::floor(pos);
            hist[static_cast<std::size_t>(lo)](r / cell_size, c / cell_size) += mag * (1.0 - frac);
            hist[static_cast<std::size_t>((lo + 1) % bins)](r / cell_size, c / cell_size) += mag * frac;
        }

    RealGrid energy(cells);
    for (const auto& h : hist)
        for (std::size_t i = 0; i < h.size(); ++i) energy[i] += h[i] * h[i];

    std::vector<RealGrid> out(static_cast<std::size_t>(bins), RealGrid(cells));
    for (int r = 0; r < cells.rows; ++r)
        for (int c = 0; c < cells.cols; ++c) {
            double block = 0.0;
            for (int dr = -1; dr <= 1; ++dr)
                for (int dc = -1; dc <= 1; ++dc) block += energy.clamped(r + dr, c + dc);
            const double scale = 1.0 / std::sqrt(block / 9.0 + 1e-8);
            for (int k = 0; k < bins; ++k)
                out[static_cast<std::size_t>(k)](r, c) =
                    std::min(hist[static_cast<std::size_t>(k)](r, c) * scale, 0.4);
        }
    return out;
}

}  // namespace rkcf
