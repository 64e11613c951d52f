#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rkcf/evaluation.hpp"
#include "rkcf/tracker.hpp"

namespace rkcf::io {

namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// Sequences

struct SequenceSpec {
    std::string name;
    std::vector<fs::path> frame_paths;
    /// 0-indexed boxes, one per frame when present.
    std::optional<std::vector<Box>> ground_truth;
    /// Non-fatal issues found while loading (e.g. truncation).
    std::vector<std::string> warnings;
};

/// OTB layout: `<dir>/img/` with numbered PNG/JPEG frames and an optional
/// `<dir>/groundtruth_rect.txt` (1-indexed x,y,w,h per line; comma, tab or
/// whitespace separated). Frames sort by numeric stem; on a count mismatch both
/// lists are truncated to the shorter one and a warning is recorded.
[[nodiscard]] SequenceSpec load_sequence(const fs::path& dir);

/// Parses ground-truth text. Converts 1-indexed corners to 0-indexed. Errors
/// name `source` and the 1-based line number.
[[nodiscard]] std::vector<Box> parse_ground_truth(const std::string& text,
                                                  const std::string& source = "groundtruth_rect.txt");

[[nodiscard]] std::string format_ground_truth(const std::vector<Box>& boxes);

/// Grayscale frame with values in [0, 1].
[[nodiscard]] RealGrid load_frame(const fs::path& path);
[[nodiscard]] std::vector<RealGrid> load_frames(const SequenceSpec& spec);
void write_frame(const fs::path& path, const RealGrid& frame);

/// Every PNG/JPEG in a directory, sorted by file name.
[[nodiscard]] std::vector<RealGrid> load_image_directory(const fs::path& dir);

// ---------------------------------------------------------------------------
// Synthetic sequences

enum class SyntheticKind { translate, rotate, translate_rotate };

[[nodiscard]] std::string to_string(SyntheticKind k);
[[nodiscard]] SyntheticKind parse_synthetic_kind(const std::string& s);

struct SyntheticParams {
    int rows = 200;
    int cols = 240;
    int target_size = 40;           ///< square box side
    double velocity_dy = 1.3;       ///< px per frame (non-integer, so no detector is exact by luck)
    double velocity_dx = 2.7;
    double rotation_rate_deg = 5.0;  ///< per-frame rotation for `rotate`
    double theta_std_deg = 25.0;     ///< std of per-frame rotation for `translate_rotate`
    double noise = 0.02;             ///< additive per-pixel Gaussian noise std
};

struct SyntheticSequence {
    std::string name;
    std::vector<RealGrid> frames;
    std::vector<Box> ground_truth;
    std::vector<double> orientation_deg;  ///< absolute target orientation per frame
    std::vector<double> rotation_deg;     ///< frame-to-frame rotation, frames - 1 entries
};

/// Textured target (oriented bars on a disc) over a static low-contrast
/// background. `translate`: constant velocity, no rotation. `rotate`: in place
/// at rotation_rate_deg per frame. `translate_rotate`: constant velocity, the
/// target snaps between upright and +-A for single frames, with A chosen so the
/// frame-to-frame rotation has population std theta_std_deg.
[[nodiscard]] SyntheticSequence generate_synthetic_sequence(SyntheticKind kind, int frames,
                                                            const SyntheticParams& params,
                                                            std::uint64_t seed);

/// Writes `img/0001.png...` and a 1-indexed `groundtruth_rect.txt`.
void write_sequence(const SyntheticSequence& sequence, const fs::path& dir);

// ---------------------------------------------------------------------------
// Configuration: flat `key = value` text, keys are the TrackerConfig fields.

/// Ordered (key, value) pairs of every field.
[[nodiscard]] std::vector<std::pair<std::string, std::string>> config_entries(const TrackerConfig& c);

/// Applies one key/value; throws InvalidArgument on unknown keys or bad values.
void apply_config_entry(TrackerConfig& config, const std::string& key, const std::string& value);

/// Parses key=value lines ('#' starts a comment) on top of `base`.
/// `kernel_sigma` defaults to 0.6 when feature_mode=cellhog and it is not given.
[[nodiscard]] TrackerConfig parse_config(const std::string& text, TrackerConfig base = {});
[[nodiscard]] TrackerConfig load_config(const fs::path& path, TrackerConfig base = {});
[[nodiscard]] std::string format_config(const TrackerConfig& config);

[[nodiscard]] nlohmann::ordered_json config_to_json(const TrackerConfig& config);
[[nodiscard]] TrackerConfig config_from_json(const nlohmann::ordered_json& j);

// ---------------------------------------------------------------------------
// Results

inline constexpr const char* kRecordsFile = "records.csv";
inline constexpr const char* kMetricsFile = "metrics.json";
inline constexpr const char* kPrecisionFile = "precision.csv";
inline constexpr const char* kThetaFile = "theta.csv";

struct RunArtifacts {
    fs::path records;
    fs::path metrics;
    fs::path precision;
    fs::path theta;
};

struct StoredRun {
    std::vector<FrameRecord> records;
    MetricsReport metrics;
    nlohmann::ordered_json config;
};

/// Rounds every floating field to 6 decimals, the precision files are written with.
[[nodiscard]] double quantize(double v);
[[nodiscard]] std::vector<FrameRecord> quantize(std::vector<FrameRecord> records);

[[nodiscard]] std::string format_records_csv(const std::vector<FrameRecord>& records);
[[nodiscard]] std::vector<FrameRecord> parse_records_csv(const std::string& text,
                                                         const std::string& source = kRecordsFile);

[[nodiscard]] nlohmann::ordered_json metrics_to_json(const MetricsReport& metrics,
                                                     const nlohmann::ordered_json& config);
[[nodiscard]] MetricsReport metrics_from_json(const nlohmann::ordered_json& j);
[[nodiscard]] std::string format_metrics(const MetricsReport& metrics,
                                         const nlohmann::ordered_json& config);

RunArtifacts write_results(const std::vector<FrameRecord>& records, const MetricsReport& metrics,
                           const nlohmann::ordered_json& config, const fs::path& out_dir);
[[nodiscard]] StoredRun read_results(const fs::path& out_dir);

[[nodiscard]] std::string read_text(const fs::path& path);
void write_text(const fs::path& path, const std::string& text);

}  // namespace rkcf::io
