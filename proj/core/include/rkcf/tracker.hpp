#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rkcf/cf_models.hpp"
#include "rkcf/features.hpp"

namespace rkcf {

/// Axis-aligned box, 0-indexed top-left corner plus size, in pixels.
struct Box {
    double x = 0.0;
    double y = 0.0;
    double w = 0.0;
    double h = 0.0;

    [[nodiscard]] PixelPoint center() const { return {y + 0.5 * h, x + 0.5 * w}; }
    friend bool operator==(const Box&, const Box&) = default;
};

enum class RotationMethod { none, filter, correlation, maxshift };
enum class FeatureMode { gray, cellhog };

/// Every tracker hyperparameter. Defaults are documented in README.md.
struct TrackerConfig {
    double padding = 1.5;                ///< window size / target size
    double lambda1 = 1e-4;               ///< translation ridge regularizer
    double lambda2 = 1e-4;               ///< rotation ridge regularizer
    double kernel_sigma = 0.5;           ///< Gaussian kernel bandwidth (translation)
    double target_sigma_factor = 0.1;    ///< 2D target sigma = factor * sqrt(h * w) / cell
    double rotation_sigma_factor = 0.0625;  ///< 1D target sigma = factor * bins
    int bins = 90;
    OrientationMode orientation_mode = OrientationMode::unsigned180;
    double eta = 0.02;                   ///< translation model interpolation rate
    RotationMethod rotation_method = RotationMethod::filter;
    bool refinement = true;              ///< parabolic sub-bin rotation refinement
    FeatureMode feature_mode = FeatureMode::gray;
    bool hog_smoothing = true;
    RotationKernel rotation_kernel = RotationKernel::linear;
    double rotation_kernel_sigma = 0.5;
    /// 0 retrains the rotation filter from the previous descriptor every frame;
    /// > 0 interpolates a descriptor model at this rate instead.
    double descriptor_eta = 0.0;

    /// Throws InvalidArgument when an invariant is violated.
    void validate() const;
    [[nodiscard]] bool rotation_enabled() const { return rotation_method != RotationMethod::none; }
    [[nodiscard]] int cell_size() const { return feature_mode == FeatureMode::cellhog ? 4 : 1; }
};

struct FrameRecord {
    int frame_index = 0;
    Box box;
    double theta_deg = 0.0;
    double peak_baseline = 0.0;  ///< U: peak on the patch as extracted
    double peak_rotated = 0.0;   ///< peak on the counter-rotated patch
    bool used_rotation = false;  ///< peak_rotated > peak_baseline
    std::optional<double> center_error;

    friend bool operator==(const FrameRecord&, const FrameRecord&) = default;
};

struct TrackerState {
    PixelPoint center;
    Box box;            ///< current box (size fixed at init)
    Shape target_size;  ///< (h, w)
    Shape window_size;  ///< (m, n)
    Shape frame_shape;
    KernelDualModel cf_model;
    OrientationDescriptor prev_descriptor;
    std::vector<double> theta_history;
    int frame_index = 0;
};

/// Resolved per-sequence geometry and fixed grids (windows, targets).
class Tracker {
public:
    explicit Tracker(TrackerConfig config);

    [[nodiscard]] const TrackerConfig& config() const noexcept { return config_; }

    /// Trains the translation model and the first descriptor on `frame` at `box`.
    [[nodiscard]] TrackerState init(const RealGrid& frame, const Box& box);

    /// One detection/update step; returns the record for this frame.
    FrameRecord track(TrackerState& state, const RealGrid& frame);

private:
    [[nodiscard]] FeatureMap features(const RealGrid& raw_window) const;
    [[nodiscard]] OrientationDescriptor descriptor(const RealGrid& raw_window) const;
    [[nodiscard]] RotationEstimate estimate_rotation(const TrackerState& state,
                                                     const OrientationDescriptor& a_new) const;
    void prepare(Shape window, Shape target_size);

    TrackerConfig config_;
    Shape window_{};
    Shape target_size_{};
    RealGrid pixel_window_;    ///< cosine window at pixel resolution (descriptor)
    RealGrid feature_window_;  ///< cosine window at feature resolution
    RealGrid target_;          ///< 2D Gaussian target
    RealGrid rotation_target_; ///< 1D Gaussian target
};

/// Window dims: padding * target, rounded up to even (multiple of 2 * cell), at least 8.
[[nodiscard]] Shape window_size_for(Shape target_size, const TrackerConfig& config);

[[nodiscard]] TrackerState init_tracker(const RealGrid& frame, const Box& box,
                                        const TrackerConfig& config);

/// Free-function form of Tracker::track; rebuilds windows and targets on every call.
FrameRecord track_frame(TrackerState& state, const RealGrid& frame, const TrackerConfig& config);

/// Runs a whole sequence: init on frame 0 with `init_box`, track the rest.
/// center_error is filled when ground truth is given (truncated to the shorter length).
[[nodiscard]] std::vector<FrameRecord> run_sequence(std::span<const RealGrid> frames,
                                                    const Box& init_box,
                                                    const TrackerConfig& config,
                                                    std::span<const Box> ground_truth = {});

[[nodiscard]] double center_distance(const Box& a, const Box& b);

// Name round-trips for config files and reports.
[[nodiscard]] std::string to_string(RotationMethod m);
[[nodiscard]] std::string to_string(FeatureMode m);
[[nodiscard]] std::string to_string(OrientationMode m);
[[nodiscard]] std::string to_string(RotationKernel k);
[[nodiscard]] RotationMethod parse_rotation_method(const std::string& s);
[[nodiscard]] FeatureMode parse_feature_mode(const std::string& s);
[[nodiscard]] OrientationMode parse_orientation_mode(const std::string& s);
[[nodiscard]] RotationKernel parse_rotation_kernel(const std::string& s);

}  // namespace rkcf
