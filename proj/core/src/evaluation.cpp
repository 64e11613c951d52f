#include "rkcf/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

namespace rkcf {
namespace {

RealGrid square_source(const RealGrid& image, int size) {
    detail::require(!image.empty(), "run_rotation_benchmark: empty image");
    const int side = std::min(image.rows(), image.cols());
    const PixelPoint centre{0.5 * image.rows(), 0.5 * image.cols()};
    RealGrid crop = crop_replicated(image, centre, {side, side});
    if (side == size) return crop;
    return resize_bilinear(crop, {size, size});
}

RotationEstimate estimate(RotationMethod method, const RotationFilterModel& model,
                          const OrientationDescriptor& upright, const OrientationDescriptor& rotated,
                          bool refine) {
    switch (method) {
        case RotationMethod::filter: return detect_rotation_filter(model, rotated, refine);
        case RotationMethod::correlation: return detect_rotation_correlation(upright, rotated, refine);
        case RotationMethod::maxshift: return detect_rotation_maxshift(upright, rotated);
        case RotationMethod::none: break;
    }
    return {};
}

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

RealGrid grating_texture(int size, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> angle(0.0, std::numbers::pi);
    std::uniform_real_distribution<double> period(6.0, 14.0);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    std::uniform_real_distribution<double> weight(0.15, 0.5);
    struct Wave { double kx, ky, phase, amp; };
    Wave waves[2];
    for (int i = 0; i < 2; ++i) {
        const double a = angle(rng);
        const double f = 2.0 * std::numbers::pi / period(rng);
        waves[i] = {f * std::cos(a), f * std::sin(a), phase(rng), i == 0 ? 0.5 : weight(rng)};
    }
    RealGrid out(size, size);
    for (int r = 0; r < size; ++r)
        for (int c = 0; c < size; ++c) {
            double v = 0.0;
            for (const auto& w : waves) v += w.amp * std::sin(w.kx * c + w.ky * r + w.phase);
            out(r, c) = clamp01(0.5 + 0.6 * v);
        }
    return out;
}

RealGrid filtered_noise_texture(int size, std::mt19937_64& rng) {
    std::normal_distribution<double> noise(0.0, 1.0);
    RealGrid white(size, size);
    for (auto& v : white) v = noise(rng);

    std::uniform_real_distribution<double> angle(0.0, std::numbers::pi);
    const double a = angle(rng);
    const double ca = std::cos(a), sa = std::sin(a);
    constexpr double kMajor = 4.0, kMinor = 1.0;
    constexpr int kRadius = 10;
    std::vector<double> kernel;
    for (int dr = -kRadius; dr <= kRadius; ++dr)
        for (int dc = -kRadius; dc <= kRadius; ++dc) {
            const double u = dc * ca + dr * sa;
            const double v = -dc * sa + dr * ca;
            kernel.push_back(std::exp(-0.5 * (u * u / (kMajor * kMajor) + v * v / (kMinor * kMinor))));
        }

    RealGrid out(size, size);
    for (int r = 0; r < size; ++r)
        for (int c = 0; c < size; ++c) {
            double acc = 0.0;
            std::size_t k = 0;
            for (int dr = -kRadius; dr <= kRadius; ++dr)
                for (int dc = -kRadius; dc <= kRadius; ++dc) acc += kernel[k++] * white.wrapped(r + dr, c + dc);
            out(r, c) = acc;
        }
    const double mean = std::accumulate(out.begin(), out.end(), 0.0) / static_cast<double>(out.size());
    double var = 0.0;
    for (double v : out) var += (v - mean) * (v - mean);
    const double sd = std::sqrt(var / static_cast<double>(out.size()));
    for (auto& v : out) v = clamp01(0.5 + 0.18 * (v - mean) / sd);
    return out;
}

RealGrid polygon_texture(int size, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    RealGrid out(size, size, 0.3 + 0.4 * unit(rng));
    const int shapes = 3 + static_cast<int>(unit(rng) * 3.0);
    for (int s = 0; s < shapes; ++s) {
        const double cy = size * (0.2 + 0.6 * unit(rng));
        const double cx = size * (0.2 + 0.6 * unit(rng));
        const double half_len = size * (0.12 + 0.25 * unit(rng));
        const double half_wid = size * (0.03 + 0.08 * unit(rng));
        const double a = std::numbers::pi * unit(rng);
        const double level = unit(rng);
        const double ca = std::cos(a), sa = std::sin(a);
        for (int r = 0; r < size; ++r)
            for (int c = 0; c < size; ++c) {
                const double u = (c - cx) * ca + (r - cy) * sa;
                const double v = -(c - cx) * sa + (r - cy) * ca;
                // signed distance to the rectangle boundary, antialiased over ~1 px
                const double d = std::max(std::abs(u) - half_len, std::abs(v) - half_wid);
                const double coverage = clamp01(0.5 - d);
                out(r, c) = (1.0 - coverage) * out(r, c) + coverage * level;
            }
    }
    return out;
}

}  // namespace

std::string to_string(Envelope e) { return e == Envelope::cosine ? "cosine" : "gaussian"; }

Envelope parse_envelope(const std::string& s) {
    if (s == "cos" || s == "cosine") return Envelope::cosine;
    if (s == "gauss" || s == "gaussian") return Envelope::gaussian;
    throw InvalidArgument("unknown envelope '" + s + "'");
}

void RotationBenchSpec::validate() const {
    detail::require(!images.empty(), "rotation benchmark: empty image set");
    detail::require(rotations_per_image >= 1, "rotation benchmark: rotations_per_image must be >= 1");
    detail::require(angle_min_deg <= angle_max_deg, "rotation benchmark: empty angle range");
    const double half_span = mode == OrientationMode::unsigned180 ? 90.0 : 180.0;
    detail::require(angle_min_deg > -half_span && angle_max_deg < half_span,
                    "rotation benchmark: angle range exceeds the detectable span");
    detail::require(!envelopes.empty() && !methods.empty(), "rotation benchmark: nothing to run");
    for (auto m : methods)
        detail::require(m != RotationMethod::none, "rotation benchmark: method 'none' is not an estimator");
    detail::require(bins >= kMinDescriptorBins, "rotation benchmark: bins must be at least 8");
    detail::require(patch_size >= Patch::kMinSide, "rotation benchmark: patch too small");
    detail::require(lambda2 > 0.0 && gaussian_sigma_factor > 0.0 && rotation_sigma_factor > 0.0,
                    "rotation benchmark: non-positive hyperparameter");
}

double RotationBenchResult::mae(Envelope envelope, RotationMethod method) const {
    for (const auto& cell : cells)
        if (cell.envelope == envelope && cell.method == method) return cell.mae_deg;
    throw InvalidArgument("rotation benchmark: (" + to_string(envelope) + ", " + to_string(method) +
                          ") was not run");
}

double circular_angle_difference(double a, double b, double span) {
    double d = std::fmod(a - b, span);
    if (d < -0.5 * span) d += span;
    if (d >= 0.5 * span) d -= span;
    return d;
}

RotationBenchResult run_rotation_benchmark(const RotationBenchSpec& spec) {
    spec.validate();
    const Shape patch_shape{spec.patch_size, spec.patch_size};
    const double span = spec.mode == OrientationMode::unsigned180 ? 180.0 : 360.0;
    const RealGrid g = gaussian_target({1, spec.bins}, spec.rotation_sigma_factor * spec.bins);

    std::vector<RealGrid> windows;
    for (auto e : spec.envelopes)
        windows.push_back(e == Envelope::cosine
                              ? cosine_window(patch_shape)
                              : gaussian_window(patch_shape, spec.gaussian_sigma_factor * spec.patch_size));

    // error sums indexed [envelope][method]
    std::vector<std::vector<double>> sums(spec.envelopes.size(),
                                          std::vector<double>(spec.methods.size(), 0.0));
    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> angle(spec.angle_min_deg, spec.angle_max_deg);

    for (const auto& image : spec.images) {
        const RealGrid source = square_source(image, spec.patch_size);
        std::vector<double> angles(static_cast<std::size_t>(spec.rotations_per_image));
        for (auto& a : angles) a = spec.angle_min_deg == spec.angle_max_deg ? spec.angle_min_deg : angle(rng);

        for (std::size_t e = 0; e < spec.envelopes.size(); ++e) {
            const OrientationDescriptor upright =
                global_hog(apply_window(source, windows[e]), spec.bins, spec.mode, spec.smoothing);
            const RotationFilterModel model = train_rotation_filter(upright, g, spec.lambda2);
            for (double truth : angles) {
                const OrientationDescriptor rotated = global_hog(
                    apply_window(rotate_patch(source, truth), windows[e]), spec.bins, spec.mode,
                    spec.smoothing);
                for (std::size_t m = 0; m < spec.methods.size(); ++m) {
                    const double est =
                        estimate(spec.methods[m], model, upright, rotated, spec.refinement).theta_deg;
                    sums[e][m] += std::abs(circular_angle_difference(est, truth, span));
                }
            }
        }
    }

    const std::size_t samples = spec.images.size() * static_cast<std::size_t>(spec.rotations_per_image);
    RotationBenchResult result;
    for (std::size_t e = 0; e < spec.envelopes.size(); ++e)
        for (std::size_t m = 0; m < spec.methods.size(); ++m)
            result.cells.push_back({spec.envelopes[e], spec.methods[m],
                                    sums[e][m] / static_cast<double>(samples), samples});
    return result;
}

std::vector<RealGrid> synthetic_textures(int count, int size, std::uint64_t seed) {
    detail::require(count >= 0 && size >= Patch::kMinSide, "synthetic_textures: invalid arguments");
    std::vector<RealGrid> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        std::mt19937_64 rng(seed * 1000003ULL + static_cast<std::uint64_t>(i));
        switch (i % 3) {
            case 0: out.push_back(grating_texture(size, rng)); break;
            case 1: out.push_back(filtered_noise_texture(size, rng)); break;
            default: out.push_back(polygon_texture(size, rng)); break;
        }
    }
    return out;
}

std::vector<double> precision_curve(std::span<const double> center_errors) {
    detail::require(!center_errors.empty(), "precision_curve: no ground-truth errors");
    std::vector<double> curve(kPrecisionMaxThreshold + 1, 0.0);
    for (int t = 0; t <= kPrecisionMaxThreshold; ++t) {
        const auto hits = std::count_if(center_errors.begin(), center_errors.end(),
                                        [t](double e) { return e <= t; });
        curve[static_cast<std::size_t>(t)] =
            static_cast<double>(hits) / static_cast<double>(center_errors.size());
    }
    return curve;
}

std::vector<double> precision_curve(std::span<const FrameRecord> records) {
    std::vector<double> errors;
    errors.reserve(records.size());
    for (const auto& r : records) {
        if (!r.center_error) throw InvalidArgument("precision_curve: record without ground truth");
        errors.push_back(*r.center_error);
    }
    return precision_curve(errors);
}

double compute_mho(std::span<const double> thetas) {
    detail::require(!thetas.empty(), "compute_mho: empty rotation history");
    const double n = static_cast<double>(thetas.size());
    const double mean = std::accumulate(thetas.begin(), thetas.end(), 0.0) / n;
    double acc = 0.0;
    for (double t : thetas) acc += (t - mean) * (t - mean);
    return std::sqrt(acc / n);
}

double compute_success_rate(std::span<const FrameRecord> records) {
    detail::require(!records.empty(), "compute_success_rate: no records");
    const auto s = std::count_if(records.begin(), records.end(),
                                 [](const FrameRecord& r) { return r.used_rotation; });
    return static_cast<double>(s) / static_cast<double>(records.size());
}

MetricsReport summarize(std::span<const FrameRecord> records) {
    MetricsReport report;
    if (records.empty()) return report;
    std::vector<double> thetas;
    for (const auto& r : records) thetas.push_back(r.theta_deg);
    report.mho_deg = compute_mho(thetas);
    report.success_rate = compute_success_rate(records);

    const bool has_truth = std::all_of(records.begin(), records.end(),
                                       [](const FrameRecord& r) { return r.center_error.has_value(); });
    if (has_truth) {
        report.precision_curve = precision_curve(records);
        report.precision_at_20 = (*report.precision_curve)[20];
        double sum = 0.0;
        for (const auto& r : records) sum += *r.center_error;
        report.mean_center_error = sum / static_cast<double>(records.size());
    }
    return report;
}

ComparisonReport compare_trackers(std::span<const RealGrid> frames, const Box& init_box,
                                  const TrackerConfig& config, std::span<const Box> ground_truth) {
    TrackerConfig baseline_cfg = config;
    baseline_cfg.rotation_method = RotationMethod::none;
    TrackerConfig rkcf_cfg = config;
    if (!rkcf_cfg.rotation_enabled()) rkcf_cfg.rotation_method = RotationMethod::filter;

    ComparisonReport out;
    out.baseline_records = run_sequence(frames, init_box, baseline_cfg, ground_truth);
    out.rkcf_records = run_sequence(frames, init_box, rkcf_cfg, ground_truth);
    out.baseline = summarize(out.baseline_records);
    out.rkcf = summarize(out.rkcf_records);
    if (out.baseline.precision_curve && out.rkcf.precision_curve)
        for (std::size_t t = 0; t < out.rkcf.precision_curve->size(); ++t)
            out.precision_difference.push_back((*out.rkcf.precision_curve)[t] -
                                               (*out.baseline.precision_curve)[t]);
    return out;
}

}  // namespace rkcf
