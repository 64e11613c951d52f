#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "rkcf/cf_models.hpp"
#include "rkcf/features.hpp"
#include "rkcf/spectral.hpp"
#include "rkcf/tracker.hpp"

namespace rkcf::testing {

// Plain KCF written directly against the filter primitives, never touching the
// descriptor or rotation code. Mirrors the tracker's geometry rules.
inline std::vector<FrameRecord> reference_kcf(const std::vector<RealGrid>& frames, const Box& box,
                                              const TrackerConfig& cfg) {
    const Shape target{static_cast<int>(std::lround(box.h)), static_cast<int>(std::lround(box.w))};
    auto even_up = [](double v) { return std::max(static_cast<int>(std::ceil(v / 2.0)) * 2, 8); };
    const Shape window{even_up(cfg.padding * target.rows), even_up(cfg.padding * target.cols)};
    const RealGrid cos_win = cosine_window(window);
    const RealGrid y = gaussian_target(window, cfg.target_sigma_factor * std::sqrt(double(target.rows) * target.cols));
    auto features = [&](const RealGrid& frame, PixelPoint c) {
        return FeatureMap(apply_window(crop_replicated(frame, c, window), cos_win));
    };

    PixelPoint center = box.center();
    KernelDualModel model = train_kernel_cf(features(frames[0], center), y, cfg.kernel_sigma, cfg.lambda1,
                                            KernelNormalization::per_element);
    std::vector<FrameRecord> records;
    for (std::size_t i = 1; i < frames.size(); ++i) {
        const auto det = detect_translation(model, features(frames[i], center));
        center.row = std::clamp(center.row + det.dy, 0.0, frames[i].rows() - 1.0);
        center.col = std::clamp(center.col + det.dx, 0.0, frames[i].cols() - 1.0);
        const auto fresh = train_kernel_cf(features(frames[i], center), y, cfg.kernel_sigma, cfg.lambda1,
                                           KernelNormalization::per_element);
        model = update_model(model, fresh, cfg.eta);
        FrameRecord rec;
        rec.frame_index = static_cast<int>(i);
        rec.box = {center.col - 0.5 * box.w, center.row - 0.5 * box.h, box.w, box.h};
        rec.peak_baseline = det.peak;
        rec.peak_rotated = det.peak;
        records.push_back(rec);
    }
    return records;
}

}  // namespace rkcf::testing
