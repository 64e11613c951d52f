#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rkcf/tracker.hpp"

namespace rkcf {

// ---------------------------------------------------------------------------
// Rotation-detection benchmark

enum class Envelope { cosine, gaussian };

[[nodiscard]] std::string to_string(Envelope e);
[[nodiscard]] Envelope parse_envelope(const std::string& s);  ///< "cos"/"cosine", "gauss"/"gaussian"

struct RotationBenchSpec {
    /// Patch sources (grayscale, any size; the central square is resampled to patch_size).
    std::vector<RealGrid> images;
    int rotations_per_image = 100;
    double angle_min_deg = -80.0;
    double angle_max_deg = 80.0;
    std::vector<Envelope> envelopes{Envelope::cosine, Envelope::gaussian};
    std::vector<RotationMethod> methods{RotationMethod::filter, RotationMethod::correlation,
                                        RotationMethod::maxshift};
    int bins = 90;
    OrientationMode mode = OrientationMode::unsigned180;
    std::uint64_t seed = 0;
    int patch_size = 64;
    double lambda2 = 1e-4;
    double rotation_sigma_factor = 0.0625;
    bool refinement = true;
    bool smoothing = true;
    double gaussian_sigma_factor = 0.2;  ///< Gaussian envelope sigma = factor * patch_size

    void validate() const;
};

struct BenchCell {
    Envelope envelope = Envelope::cosine;
    RotationMethod method = RotationMethod::filter;
    double mae_deg = 0.0;
    std::size_t samples = 0;
};

struct RotationBenchResult {
    std::vector<BenchCell> cells;  ///< envelope-major, in spec order

    /// Throws InvalidArgument if the pair was not benchmarked.
    [[nodiscard]] double mae(Envelope envelope, RotationMethod method) const;
};

/// For each image and envelope: descriptor of the upright windowed patch; for
/// each seeded random angle: rotate, window, describe, estimate with every
/// method, accumulate the circular absolute error.
[[nodiscard]] RotationBenchResult run_rotation_benchmark(const RotationBenchSpec& spec);

/// Procedural textures in [0, 1]: oriented gratings, anisotropic filtered noise
/// and polygon composites, cycling in that order. Deterministic per seed.
[[nodiscard]] std::vector<RealGrid> synthetic_textures(int count, int size, std::uint64_t seed);

/// a - b wrapped into [-span/2, span/2).
[[nodiscard]] double circular_angle_difference(double a, double b, double span);

// ---------------------------------------------------------------------------
// Tracking metrics

inline constexpr int kPrecisionMaxThreshold = 50;

/// precision[t] = fraction of errors <= t, t = 0..50 px.
[[nodiscard]] std::vector<double> precision_curve(std::span<const double> center_errors);

/// Throws InvalidArgument if any record lacks a center error.
[[nodiscard]] std::vector<double> precision_curve(std::span<const FrameRecord> records);

/// Population standard deviation of the per-frame rotations.
[[nodiscard]] double compute_mho(std::span<const double> thetas);

/// s / (s + f) with s = frames that used the counter-rotated detection.
[[nodiscard]] double compute_success_rate(std::span<const FrameRecord> records);

struct MetricsReport {
    std::optional<std::vector<double>> precision_curve;
    std::optional<double> precision_at_20;
    std::optional<double> mean_center_error;
    std::optional<double> mho_deg;
    std::optional<double> success_rate;
    std::map<std::string, double> per_method_mae;

    friend bool operator==(const MetricsReport&, const MetricsReport&) = default;
};

/// Fills every metric the records support (precision fields need ground truth).
[[nodiscard]] MetricsReport summarize(std::span<const FrameRecord> records);

struct ComparisonReport {
    std::vector<FrameRecord> baseline_records;
    std::vector<FrameRecord> rkcf_records;
    MetricsReport baseline;
    MetricsReport rkcf;
    /// rkcf - baseline precision per threshold (empty without ground truth).
    std::vector<double> precision_difference;
};

/// Runs the sequence with rotation disabled and with `config`'s rotation method
/// (filter when `config` has none).
[[nodiscard]] ComparisonReport compare_trackers(std::span<const RealGrid> frames,
                                                const Box& init_box, const TrackerConfig& config,
                                                std::span<const Box> ground_truth = {});

}  // namespace rkcf
