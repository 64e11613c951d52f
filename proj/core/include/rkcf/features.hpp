#pragma once

#include <vector>

#include "rkcf/grid.hpp"

namespace rkcf {

/// Sub-pixel image location, row down and column right.
struct PixelPoint {
    double row = 0.0;
    double col = 0.0;
    friend bool operator==(const PixelPoint&, const PixelPoint&) = default;
};

/// Image-plane displacement in pixels.
struct Displacement {
    double dy = 0.0;
    double dx = 0.0;
    friend bool operator==(const Displacement&, const Displacement&) = default;
};

/// Interleaved multi-channel image, channel values in [0, 1].
struct Image {
    int rows = 0;
    int cols = 0;
    int channels = 1;
    std::vector<double> data;
};

/// An m×n intensity window cut from a frame (m, n >= 8, values finite in [0, 1]).
class Patch {
public:
    static constexpr int kMinSide = 8;

    Patch(RealGrid pixels, int frame_index = 0, PixelPoint center = {});

    [[nodiscard]] const RealGrid& pixels() const noexcept { return pixels_; }
    [[nodiscard]] Shape shape() const noexcept { return pixels_.shape(); }
    [[nodiscard]] int frame_index() const noexcept { return frame_index_; }
    [[nodiscard]] PixelPoint center() const noexcept { return center_; }

private:
    RealGrid pixels_;
    int frame_index_ = 0;
    PixelPoint center_{};
};

enum class OrientationMode { unsigned180, signed360 };

/// Single-cell histogram of gradient orientations over a whole patch.
/// Bin k is centred on orientation k * bin_width(); rotating the patch by a
/// multiple of bin_width() circularly shifts the bins.
struct OrientationDescriptor {
    std::vector<double> bins;
    OrientationMode mode = OrientationMode::unsigned180;
    /// True for a constant patch; bins are then all zero.
    bool degenerate = false;

    [[nodiscard]] int size() const noexcept { return static_cast<int>(bins.size()); }
    [[nodiscard]] double span_deg() const noexcept {
        return mode == OrientationMode::unsigned180 ? 180.0 : 360.0;
    }
    [[nodiscard]] double bin_width() const noexcept { return span_deg() / size(); }
    [[nodiscard]] RealGrid as_grid() const { return RealGrid::row_vector(bins); }
};

inline constexpr int kMinDescriptorBins = 8;

/// Crop of size `size` centred at `center`; out-of-frame samples replicate the
/// nearest edge pixel. Top-left is (floor(row) - rows/2, floor(col) - cols/2).
[[nodiscard]] RealGrid crop_replicated(const RealGrid& frame, PixelPoint center, Shape size);

[[nodiscard]] Patch extract_patch(const RealGrid& frame, PixelPoint center, Shape size,
                                  int frame_index = 0);

/// Luminance 0.299 R + 0.587 G + 0.114 B; single-channel images pass through.
[[nodiscard]] RealGrid to_grayscale(const Image& image);

/// (patch - mean(patch)) * window.
[[nodiscard]] RealGrid apply_window(const RealGrid& patch, const RealGrid& window);

/// Global orientation histogram: centred-difference gradients (edge clamped),
/// magnitude-weighted votes linearly split between the two nearest bins,
/// optional circular [1 4 6 4 1]/16 smoothing, then L2 normalization.
[[nodiscard]] OrientationDescriptor global_hog(const RealGrid& patch, int bins,
                                               OrientationMode mode = OrientationMode::unsigned180,
                                               bool smoothing = true);

/// Rotates content by theta degrees about the geometric centre. Positive theta
/// turns the column axis toward the row axis (clockwise on screen). Bilinear
/// sampling, edge replication outside the source.
[[nodiscard]] RealGrid rotate_patch(const RealGrid& patch, double theta_deg);
[[nodiscard]] Patch rotate_patch(const Patch& patch, double theta_deg);

/// Applies the rotate_patch() convention to a vector:
/// dx' = dx cos - dy sin, dy' = dx sin + dy cos.
[[nodiscard]] Displacement rotate_displacement(Displacement d, double theta_deg);

/// Bilinear resampling to a new shape (pixel-centre aligned).
[[nodiscard]] RealGrid resize_bilinear(const RealGrid& image, Shape size);

/// Per-cell unsigned orientation histograms for translation features: one
/// channel per bin, each of size (rows / cell, cols / cell). Cells are
/// normalized by the energy of their 3×3 neighbourhood.
[[nodiscard]] std::vector<RealGrid> cell_hog(const RealGrid& patch, int cell_size, int bins);

}  // namespace rkcf
