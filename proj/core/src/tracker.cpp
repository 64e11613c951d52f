#include "rkcf/tracker.hpp"

#include <algorithm>
#include <cmath>

namespace rkcf {
namespace {

constexpr int kCellHogBins = 9;

int round_up_even(double v, int multiple) {
    const int step = 2 * multiple;
    return std::max(static_cast<int>(std::ceil(v / step)) * step, Patch::kMinSide);
}

}  // namespace

void TrackerConfig::validate() const {
    detail::require(padding > 1.0, "config: padding must exceed 1");
    detail::require(lambda1 > 0.0 && lambda2 > 0.0, "config: lambda1 and lambda2 must be positive");
    detail::require(kernel_sigma > 0.0 && rotation_kernel_sigma > 0.0,
                    "config: kernel sigmas must be positive");
    detail::require(target_sigma_factor > 0.0 && rotation_sigma_factor > 0.0,
                    "config: target sigma factors must be positive");
    detail::require(bins >= kMinDescriptorBins, "config: bins must be at least 8");
    detail::require(eta >= 0.0 && eta <= 1.0, "config: eta must lie in [0, 1]");
    detail::require(descriptor_eta >= 0.0 && descriptor_eta <= 1.0,
                    "config: descriptor_eta must lie in [0, 1]");
}

Shape window_size_for(Shape target_size, const TrackerConfig& config) {
    return {round_up_even(config.padding * target_size.rows, config.cell_size()),
            round_up_even(config.padding * target_size.cols, config.cell_size())};
}

Tracker::Tracker(TrackerConfig config) : config_(config) { config_.validate(); }

void Tracker::prepare(Shape window, Shape target_size) {
    window_ = window;
    target_size_ = target_size;
    const int cell = config_.cell_size();
    const Shape feature_shape{window.rows / cell, window.cols / cell};
    pixel_window_ = cosine_window(window);
    feature_window_ = cell == 1 ? pixel_window_ : cosine_window(feature_shape);
    const double sigma = config_.target_sigma_factor *
                         std::sqrt(static_cast<double>(target_size.rows) * target_size.cols) / cell;
    target_ = gaussian_target(feature_shape, sigma);
    rotation_target_ =
        gaussian_target(Shape{1, config_.bins}, config_.rotation_sigma_factor * config_.bins);
}

FeatureMap Tracker::features(const RealGrid& raw_window) const {
    if (config_.feature_mode == FeatureMode::gray)
        return FeatureMap(apply_window(raw_window, pixel_window_));
    std::vector<RealGrid> channels = cell_hog(raw_window, config_.cell_size(), kCellHogBins);
    for (auto& ch : channels) ch = multiply(ch, feature_window_);
    return FeatureMap(std::move(channels));
}

OrientationDescriptor Tracker::descriptor(const RealGrid& raw_window) const {
    return global_hog(apply_window(raw_window, pixel_window_), config_.bins,
                      config_.orientation_mode, config_.hog_smoothing);
}

RotationEstimate Tracker::estimate_rotation(const TrackerState& state,
                                            const OrientationDescriptor& a_new) const {
    switch (config_.rotation_method) {
        case RotationMethod::filter: {
            const RotationFilterModel model =
                train_rotation_filter(state.prev_descriptor, rotation_target_, config_.lambda2,
                                      config_.rotation_kernel, config_.rotation_kernel_sigma);
            return detect_rotation_filter(model, a_new, config_.refinement);
        }
        case RotationMethod::correlation:
            return detect_rotation_correlation(state.prev_descriptor, a_new, config_.refinement);
        case RotationMethod::maxshift:
            return detect_rotation_maxshift(state.prev_descriptor, a_new);
        case RotationMethod::none:
            break;
    }
    return {};
}

TrackerState Tracker::init(const RealGrid& frame, const Box& box) {
    detail::require(!frame.empty(), "init_tracker: empty frame");
    detail::require(box.w >= 1.0 && box.h >= 1.0, "init_tracker: box must have positive size");
    detail::require(box.x >= 0.0 && box.y >= 0.0 && box.x + box.w <= frame.cols() + 0.5 &&
                        box.y + box.h <= frame.rows() + 0.5,
                    "init_tracker: box must lie inside the frame");

    TrackerState state;
    state.box = box;
    state.center = box.center();
    state.target_size = {static_cast<int>(std::lround(box.h)), static_cast<int>(std::lround(box.w))};
    state.window_size = window_size_for(state.target_size, config_);
    state.frame_shape = frame.shape();
    prepare(state.window_size, state.target_size);

    const Patch patch = extract_patch(frame, state.center, state.window_size, 0);
    state.cf_model = train_kernel_cf(features(patch.pixels()), target_, config_.kernel_sigma,
                                     config_.lambda1, KernelNormalization::per_element);
    if (config_.rotation_enabled()) state.prev_descriptor = descriptor(patch.pixels());
    return state;
}

FrameRecord Tracker::track(TrackerState& state, const RealGrid& frame) {
    if (frame.shape() != state.frame_shape)
        throw InvalidArgument("track_frame: frame size differs from the initial frame");
    if (state.window_size != window_ || state.target_size != target_size_)
        prepare(state.window_size, state.target_size);

    const int index = state.frame_index + 1;
    const double cell = config_.cell_size();
    const Patch patch = extract_patch(frame, state.center, state.window_size, index);

    const TranslationDetection base = detect_translation(state.cf_model, features(patch.pixels()));

    FrameRecord rec;
    rec.frame_index = index;
    rec.peak_baseline = base.peak;
    rec.peak_rotated = base.peak;
    Displacement shift{base.dy * cell, base.dx * cell};

    if (config_.rotation_enabled()) {
        const OrientationDescriptor a_new = descriptor(patch.pixels());
        const double theta = std::clamp(estimate_rotation(state, a_new).theta_deg, -180.0, 180.0);
        const TranslationDetection rotated =
            detect_translation(state.cf_model, features(rotate_patch(patch.pixels(), -theta)));
        rec.theta_deg = theta;
        rec.peak_rotated = rotated.peak;
        if (rotated.peak > base.peak) {
            rec.used_rotation = true;
            shift = rotate_displacement({rotated.dy * cell, rotated.dx * cell}, theta);
        }
    }

    state.center.row = std::clamp(state.center.row + shift.dy, 0.0, frame.rows() - 1.0);
    state.center.col = std::clamp(state.center.col + shift.dx, 0.0, frame.cols() - 1.0);

    const Patch updated = extract_patch(frame, state.center, state.window_size, index);
    const KernelDualModel fresh = train_kernel_cf(features(updated.pixels()), target_,
                                                  config_.kernel_sigma, config_.lambda1,
                                                  KernelNormalization::per_element);
    state.cf_model = update_model(state.cf_model, fresh, config_.eta);

    if (config_.rotation_enabled()) {
        OrientationDescriptor next = descriptor(updated.pixels());
        if (config_.descriptor_eta > 0.0 && !state.prev_descriptor.degenerate && !next.degenerate) {
            double norm = 0.0;
            for (std::size_t k = 0; k < next.bins.size(); ++k) {
                next.bins[k] = (1.0 - config_.descriptor_eta) * state.prev_descriptor.bins[k] +
                               config_.descriptor_eta * next.bins[k];
                norm += next.bins[k] * next.bins[k];
            }
            for (double& v : next.bins) v /= std::sqrt(norm);
        }
        state.prev_descriptor = std::move(next);
    }

    state.theta_history.push_back(rec.theta_deg);
    state.frame_index = index;
    state.box.x = state.center.col - 0.5 * state.box.w;
    state.box.y = state.center.row - 0.5 * state.box.h;
    rec.box = state.box;
    return rec;
}

TrackerState init_tracker(const RealGrid& frame, const Box& box, const TrackerConfig& config) {
    return Tracker(config).init(frame, box);
}

FrameRecord track_frame(TrackerState& state, const RealGrid& frame, const TrackerConfig& config) {
    return Tracker(config).track(state, frame);
}

std::vector<FrameRecord> run_sequence(std::span<const RealGrid> frames, const Box& init_box,
                                      const TrackerConfig& config,
                                      std::span<const Box> ground_truth) {
    detail::require(frames.size() >= 2, "run_sequence: need at least two frames");
    Tracker tracker(config);
    TrackerState state = tracker.init(frames.front(), init_box);
    std::vector<FrameRecord> records;
    records.reserve(frames.size() - 1);
    for (std::size_t i = 1; i < frames.size(); ++i) {
        FrameRecord rec = tracker.track(state, frames[i]);
        if (i < ground_truth.size()) rec.center_error = center_distance(rec.box, ground_truth[i]);
        records.push_back(rec);
    }
    return records;
}

double center_distance(const Box& a, const Box& b) {
    const PixelPoint ca = a.center();
    const PixelPoint cb = b.center();
    return std::hypot(ca.row - cb.row, ca.col - cb.col);
}

std::string to_string(RotationMethod m) {
    switch (m) {
        case RotationMethod::none: return "none";
        case RotationMethod::filter: return "filter";
        case RotationMethod::correlation: return "correlation";
        case RotationMethod::maxshift: return "maxshift";
    }
    return "none";
}

std::string to_string(FeatureMode m) { return m == FeatureMode::gray ? "gray" : "cellhog"; }

std::string to_string(OrientationMode m) {
    return m == OrientationMode::unsigned180 ? "unsigned180" : "signed360";
}

std::string to_string(RotationKernel k) { return k == RotationKernel::linear ? "linear" : "gaussian"; }

RotationMethod parse_rotation_method(const std::string& s) {
    if (s == "none") return RotationMethod::none;
    if (s == "filter") return RotationMethod::filter;
    if (s == "correlation") return RotationMethod::correlation;
    if (s == "maxshift") return RotationMethod::maxshift;
    throw InvalidArgument("unknown rotation_method '" + s + "'");
}

FeatureMode parse_feature_mode(const std::string& s) {
    if (s == "gray") return FeatureMode::gray;
    if (s == "cellhog") return FeatureMode::cellhog;
    throw InvalidArgument("unknown feature_mode '" + s + "'");
}

OrientationMode parse_orientation_mode(const std::string& s) {
    if (s == "unsigned180") return OrientationMode::unsigned180;
    if (s == "signed360") return OrientationMode::signed360;
    throw InvalidArgument("unknown orientation_mode '" + s + "'");
}

RotationKernel parse_rotation_kernel(const std::string& s) {
    if (s == "linear") return RotationKernel::linear;
    if (s == "gaussian") return RotationKernel::gaussian;
    throw InvalidArgument("unknown rotation_kernel '" + s + "'");
}

}  // namespace rkcf
