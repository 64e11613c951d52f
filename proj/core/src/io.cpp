#include "rkcf/io.hpp"

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

namespace rkcf::io {
namespace {

constexpr std::array<const char*, 10> kRecordColumns = {
    "frame", "x", "y", "w", "h", "theta_deg", "peak_baseline", "peak_rotated", "used_rotation",
    "center_error"};

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

bool is_image_file(const fs::path& p) {
    const std::string ext = lower(p.extension().string());
    return ext == ".png" || ext == ".jpg" || ext == ".jpeg";
}

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::optional<double> parse_double(const std::string& s) {
    const std::string t = trim(s);
    if (t.empty()) return std::nullopt;
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

// Shortest representation that parses back to the same double.
std::string shortest(double v) {
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

std::string fixed6(double v) {
    std::array<char, 64> buf{};
    std::snprintf(buf.data(), buf.size(), "%.6f", v);
    return buf.data();
}

std::vector<std::string> split(const std::string& line, char delim) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, delim)) out.push_back(field);
    if (!line.empty() && line.back() == delim) out.emplace_back();
    return out;
}

bool parse_bool(const std::string& s) {
    const std::string t = lower(trim(s));
    if (t == "1" || t == "true" || t == "on" || t == "yes") return true;
    if (t == "0" || t == "false" || t == "off" || t == "no") return false;
    throw InvalidArgument("expected a boolean, got '" + s + "'");
}

double require_number(const std::string& key, const std::string& value) {
    const auto v = parse_double(value);
    if (!v) throw InvalidArgument("config key '" + key + "': expected a number, got '" + value + "'");
    return *v;
}

// Triangle-wave reflection of x into [lo, hi].
double reflect(double x, double lo, double hi) {
    const double span = hi - lo;
    if (span <= 0.0) return lo;
    double t = std::fmod(x - lo, 2.0 * span);
    if (t < 0.0) t += 2.0 * span;
    return lo + (t <= span ? t : 2.0 * span - t);
}

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

struct Bar {
    double cu, cv, half_len, half_wid, cos_a, sin_a, level;
};

struct TargetTexture {
    double radius = 20.0;
    double base = 0.8;
    std::vector<Bar> bars;

    // Target-local coordinates (u right, v down) relative to the target centre.
    [[nodiscard]] double coverage(double u, double v) const {
        return clamp01(radius - std::max(std::abs(u), std::abs(v)) + 0.5);
    }
    [[nodiscard]] double value(double u, double v) const {
        double out = base;
        for (const auto& b : bars) {
            const double pu = (u - b.cu) * b.cos_a + (v - b.cv) * b.sin_a;
            const double pv = -(u - b.cu) * b.sin_a + (v - b.cv) * b.cos_a;
            const double d = std::max(std::abs(pu) - b.half_len, std::abs(pv) - b.half_wid);
            const double c = clamp01(0.5 - d);
            out = (1.0 - c) * out + c * b.level;
        }
        return out;
    }
};

TargetTexture make_target(int size, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    TargetTexture t;
    t.radius = 0.5 * size;
    t.base = 0.75 + 0.15 * unit(rng);
    // a dominant long bar plus shorter ones at other orientations
    const double main_angle = std::numbers::pi * unit(rng);
    for (int i = 0; i < 4; ++i) {
        const double a = i == 0 ? main_angle : main_angle + std::numbers::pi * (0.2 + 0.6 * unit(rng));
        Bar b;
        b.cu = t.radius * (i == 0 ? 0.0 : 0.5 * (unit(rng) - 0.5));
        b.cv = t.radius * (i == 0 ? 0.0 : 0.5 * (unit(rng) - 0.5));
        b.half_len = t.radius * (i == 0 ? 0.75 : 0.3 + 0.2 * unit(rng));
        b.half_wid = t.radius * (i == 0 ? 0.14 : 0.06 + 0.05 * unit(rng));
        b.cos_a = std::cos(a);
        b.sin_a = std::sin(a);
        b.level = 0.05 + 0.3 * unit(rng);
        t.bars.push_back(b);
    }
    return t;
}

RealGrid make_background(int rows, int cols, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    struct Wave { double kr, kc, phase, amp; };
    std::vector<Wave> waves;
    for (int i = 0; i < 5; ++i) {
        const double a = 2.0 * std::numbers::pi * unit(rng);
        const double f = 2.0 * std::numbers::pi / (40.0 + 80.0 * unit(rng));
        waves.push_back({f * std::sin(a), f * std::cos(a), 2.0 * std::numbers::pi * unit(rng),
                         0.02 + 0.03 * unit(rng)});
    }
    RealGrid bg(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            double v = 0.35;
            for (const auto& w : waves) v += w.amp * std::sin(w.kr * r + w.kc * c + w.phase);
            bg(r, c) = clamp01(v);
        }
    return bg;
}

RealGrid render_frame(const RealGrid& background, const TargetTexture& target, PixelPoint centre,
                      double orientation_deg) {
    RealGrid frame = background;
    const double rad = orientation_deg * std::numbers::pi / 180.0;
    const double cs = std::cos(rad), sn = std::sin(rad);
    const int r0 = std::max(0, static_cast<int>(std::floor(centre.row - target.radius - 2)));
    const int r1 = std::min(frame.rows() - 1, static_cast<int>(std::ceil(centre.row + target.radius + 2)));
    const int c0 = std::max(0, static_cast<int>(std::floor(centre.col - target.radius - 2)));
    const int c1 = std::min(frame.cols() - 1, static_cast<int>(std::ceil(centre.col + target.radius + 2)));
    for (int r = r0; r <= r1; ++r)
        for (int c = c0; c <= c1; ++c) {
            const double x = c - centre.col;
            const double y = r - centre.row;
            // same convention as rotate_patch: local = R(-theta) * world offset
            const double u = x * cs + y * sn;
            const double v = -x * sn + y * cs;
            const double cov = target.coverage(u, v);
            if (cov <= 0.0) continue;
            frame(r, c) = (1.0 - cov) * frame(r, c) + cov * target.value(u, v);
        }
    return frame;
}

std::vector<double> spike_schedule(int frames, double theta_std, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> pattern(static_cast<std::size_t>(frames), 0.0);
    for (int t = 1; t < frames; ++t) {
        const auto i = static_cast<std::size_t>(t);
        if (pattern[i - 1] != 0.0) continue;  // return upright after a spike
        if (t == 1 || unit(rng) < 0.5) pattern[i] = unit(rng) < 0.5 ? 1.0 : -1.0;
    }
    std::vector<double> steps;
    for (std::size_t t = 1; t < pattern.size(); ++t) steps.push_back(pattern[t] - pattern[t - 1]);
    const double sd = steps.empty() ? 0.0 : compute_mho(steps);
    const double amplitude = sd > 0.0 ? theta_std / sd : 0.0;
    for (auto& p : pattern) p *= amplitude;
    return pattern;
}

}  // namespace

// ---------------------------------------------------------------------------

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write " + path.string());
    out << text;
    if (!out) throw DataError("write failed for " + path.string());
}

std::vector<Box> parse_ground_truth(const std::string& text, const std::string& source) {
    std::vector<Box> boxes;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::replace(line.begin(), line.end(), '\t', ' ');
        if (trim(line).empty()) continue;
        std::istringstream fields(line);
        std::vector<double> values;
        std::string token;
        while (fields >> token) {
            const auto v = parse_double(token);
            if (!v)
                throw DataError(source + ":" + std::to_string(line_no) + ": cannot parse '" + token + "'");
            values.push_back(*v);
        }
        if (values.size() != 4)
            throw DataError(source + ":" + std::to_string(line_no) + ": expected 4 values (x,y,w,h), got " +
                            std::to_string(values.size()));
        if (values[2] <= 0.0 || values[3] <= 0.0)
            throw DataError(source + ":" + std::to_string(line_no) + ": box width and height must be positive");
        boxes.push_back({values[0] - 1.0, values[1] - 1.0, values[2], values[3]});
    }
    return boxes;
}

std::string format_ground_truth(const std::vector<Box>& boxes) {
    std::string out;
    for (const auto& b : boxes)
        out += shortest(b.x + 1.0) + "," + shortest(b.y + 1.0) + "," + shortest(b.w) + "," + shortest(b.h) + "\n";
    return out;
}

SequenceSpec load_sequence(const fs::path& dir) {
    const fs::path img_dir = dir / "img";
    if (!fs::is_directory(img_dir)) throw DataError("missing image directory " + img_dir.string());

    SequenceSpec spec;
    spec.name = dir.filename().empty() ? dir.parent_path().filename().string() : dir.filename().string();
    for (const auto& entry : fs::directory_iterator(img_dir))
        if (entry.is_regular_file() && is_image_file(entry.path())) spec.frame_paths.push_back(entry.path());
    if (spec.frame_paths.empty()) throw DataError("no PNG/JPEG frames in " + img_dir.string());

    std::sort(spec.frame_paths.begin(), spec.frame_paths.end(), [](const fs::path& a, const fs::path& b) {
        const auto na = parse_double(a.stem().string());
        const auto nb = parse_double(b.stem().string());
        if (na && nb && *na != *nb) return *na < *nb;
        if (na.has_value() != nb.has_value()) return na.has_value();
        return a.filename() < b.filename();
    });

    const fs::path gt_path = dir / "groundtruth_rect.txt";
    if (fs::exists(gt_path)) {
        std::vector<Box> boxes = parse_ground_truth(read_text(gt_path), gt_path.string());
        if (boxes.size() != spec.frame_paths.size()) {
            const std::size_t n = std::min(boxes.size(), spec.frame_paths.size());
            spec.warnings.push_back(std::to_string(spec.frame_paths.size()) + " frames but " +
                                    std::to_string(boxes.size()) + " ground-truth boxes; truncating to " +
                                    std::to_string(n));
            boxes.resize(n);
            spec.frame_paths.resize(n);
        }
        spec.ground_truth = std::move(boxes);
    }
    return spec;
}

RealGrid load_frame(const fs::path& path) {
    const cv::Mat raw = cv::imread(path.string(), cv::IMREAD_ANYDEPTH | cv::IMREAD_ANYCOLOR);
    if (raw.empty()) throw DataError("unreadable frame " + path.string());
    const double scale = raw.depth() == CV_16U ? 1.0 / 65535.0 : raw.depth() == CV_8U ? 1.0 / 255.0 : 1.0;
    cv::Mat as_double;
    raw.convertTo(as_double, CV_64F, scale);

    Image image;
    image.rows = as_double.rows;
    image.cols = as_double.cols;
    const int channels = as_double.channels();
    image.channels = channels >= 3 ? 3 : 1;
    image.data.reserve(static_cast<std::size_t>(image.rows) * image.cols * image.channels);
    for (int r = 0; r < image.rows; ++r) {
        const double* row = as_double.ptr<double>(r);
        for (int c = 0; c < image.cols; ++c) {
            const double* px = row + static_cast<std::ptrdiff_t>(c) * channels;
            if (image.channels == 1) {
                image.data.push_back(clamp01(px[0]));
            } else {  // OpenCV stores BGR(A)
                image.data.push_back(clamp01(px[2]));
                image.data.push_back(clamp01(px[1]));
                image.data.push_back(clamp01(px[0]));
            }
        }
    }
    return to_grayscale(image);
}

std::vector<RealGrid> load_frames(const SequenceSpec& spec) {
    std::vector<RealGrid> frames;
    frames.reserve(spec.frame_paths.size());
    for (const auto& p : spec.frame_paths) frames.push_back(load_frame(p));
    return frames;
}

void write_frame(const fs::path& path, const RealGrid& frame) {
    cv::Mat out(frame.rows(), frame.cols(), CV_8UC1);
    for (int r = 0; r < frame.rows(); ++r)
        for (int c = 0; c < frame.cols(); ++c)
            out.at<unsigned char>(r, c) = static_cast<unsigned char>(std::lround(clamp01(frame(r, c)) * 255.0));
    if (!cv::imwrite(path.string(), out)) throw DataError("cannot write frame " + path.string());
}

std::vector<RealGrid> load_image_directory(const fs::path& dir) {
    if (!fs::is_directory(dir)) throw DataError("not a directory: " + dir.string());
    std::vector<fs::path> paths;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && is_image_file(entry.path())) paths.push_back(entry.path());
    std::sort(paths.begin(), paths.end());
    if (paths.empty()) throw DataError("no PNG/JPEG images in " + dir.string());
    std::vector<RealGrid> images;
    for (const auto& p : paths) images.push_back(load_frame(p));
    return images;
}

// ---------------------------------------------------------------------------

std::string to_string(SyntheticKind k) {
    switch (k) {
        case SyntheticKind::translate: return "translate";
        case SyntheticKind::rotate: return "rotate";
        case SyntheticKind::translate_rotate: return "translate_rotate";
    }
    return "translate";
}

SyntheticKind parse_synthetic_kind(const std::string& s) {
    if (s == "translate") return SyntheticKind::translate;
    if (s == "rotate") return SyntheticKind::rotate;
    if (s == "translate_rotate") return SyntheticKind::translate_rotate;
    throw InvalidArgument("unknown synthetic kind '" + s + "'");
}

SyntheticSequence generate_synthetic_sequence(SyntheticKind kind, int frames,
                                              const SyntheticParams& params, std::uint64_t seed) {
    detail::require(frames >= 2, "generate_synthetic_sequence: need at least two frames");
    detail::require(params.target_size >= Patch::kMinSide && params.rows > params.target_size &&
                        params.cols > params.target_size,
                    "generate_synthetic_sequence: frame must be larger than the target");

    std::mt19937_64 rng(seed);
    const TargetTexture target = make_target(params.target_size, rng);
    const RealGrid background = make_background(params.rows, params.cols, rng);

    SyntheticSequence seq;
    seq.name = "synthetic_" + to_string(kind);
    const bool moves = kind != SyntheticKind::rotate;
    const double vy = moves ? params.velocity_dy : 0.0;
    const double vx = moves ? params.velocity_dx : 0.0;

    switch (kind) {
        case SyntheticKind::translate: seq.orientation_deg.assign(static_cast<std::size_t>(frames), 0.0); break;
        case SyntheticKind::rotate:
            for (int t = 0; t < frames; ++t) seq.orientation_deg.push_back(t * params.rotation_rate_deg);
            break;
        case SyntheticKind::translate_rotate:
            seq.orientation_deg = spike_schedule(frames, params.theta_std_deg, rng);
            break;
    }
    for (std::size_t t = 1; t < seq.orientation_deg.size(); ++t)
        seq.rotation_deg.push_back(seq.orientation_deg[t] - seq.orientation_deg[t - 1]);

    // centred path, reflected at a margin that keeps the target inside the frame
    const double margin = 0.5 * params.target_size + 2.0;
    const double start_r = 0.5 * params.rows - 0.5 * vy * (frames - 1);
    const double start_c = 0.5 * params.cols - 0.5 * vx * (frames - 1);
    std::normal_distribution<double> noise(0.0, params.noise > 0.0 ? params.noise : 1.0);

    for (int t = 0; t < frames; ++t) {
        const PixelPoint centre{reflect(start_r + vy * t, margin, params.rows - margin),
                                reflect(start_c + vx * t, margin, params.cols - margin)};
        RealGrid frame = render_frame(background, target, centre,
                                      seq.orientation_deg[static_cast<std::size_t>(t)]);
        if (params.noise > 0.0)
            for (auto& v : frame) v = clamp01(v + noise(rng));
        seq.frames.push_back(std::move(frame));
        const double s = params.target_size;
        seq.ground_truth.push_back({centre.col - 0.5 * s, centre.row - 0.5 * s, s, s});
    }
    return seq;
}

void write_sequence(const SyntheticSequence& sequence, const fs::path& dir) {
    fs::create_directories(dir / "img");
    for (std::size_t i = 0; i < sequence.frames.size(); ++i) {
        std::array<char, 32> name{};
        std::snprintf(name.data(), name.size(), "%04zu.png", i + 1);
        write_frame(dir / "img" / name.data(), sequence.frames[i]);
    }
    write_text(dir / "groundtruth_rect.txt", format_ground_truth(sequence.ground_truth));
}

// ---------------------------------------------------------------------------

std::vector<std::pair<std::string, std::string>> config_entries(const TrackerConfig& c) {
    auto b = [](bool v) { return std::string(v ? "true" : "false"); };
    return {
        {"padding", shortest(c.padding)},
        {"lambda1", shortest(c.lambda1)},
        {"lambda2", shortest(c.lambda2)},
        {"kernel_sigma", shortest(c.kernel_sigma)},
        {"target_sigma_factor", shortest(c.target_sigma_factor)},
        {"rotation_sigma_factor", shortest(c.rotation_sigma_factor)},
        {"bins", std::to_string(c.bins)},
        {"orientation_mode", to_string(c.orientation_mode)},
        {"eta", shortest(c.eta)},
        {"rotation_method", to_string(c.rotation_method)},
        {"refinement", b(c.refinement)},
        {"feature_mode", to_string(c.feature_mode)},
        {"hog_smoothing", b(c.hog_smoothing)},
        {"rotation_kernel", to_string(c.rotation_kernel)},
        {"rotation_kernel_sigma", shortest(c.rotation_kernel_sigma)},
        {"descriptor_eta", shortest(c.descriptor_eta)},
    };
}

void apply_config_entry(TrackerConfig& c, const std::string& raw_key, const std::string& raw_value) {
    const std::string key = trim(raw_key);
    const std::string value = trim(raw_value);
    if (key == "padding") c.padding = require_number(key, value);
    else if (key == "lambda1") c.lambda1 = require_number(key, value);
    else if (key == "lambda2") c.lambda2 = require_number(key, value);
    else if (key == "kernel_sigma") c.kernel_sigma = require_number(key, value);
    else if (key == "target_sigma_factor") c.target_sigma_factor = require_number(key, value);
    else if (key == "rotation_sigma_factor") c.rotation_sigma_factor = require_number(key, value);
    else if (key == "bins" || key == "b") {
        const double v = require_number(key, value);
        if (v != std::floor(v)) throw InvalidArgument("config key 'bins': expected an integer");
        c.bins = static_cast<int>(v);
    }
    else if (key == "orientation_mode") c.orientation_mode = parse_orientation_mode(value);
    else if (key == "eta") c.eta = require_number(key, value);
    else if (key == "rotation_method") c.rotation_method = parse_rotation_method(value);
    else if (key == "refinement") c.refinement = parse_bool(value);
    else if (key == "feature_mode") c.feature_mode = parse_feature_mode(value);
    else if (key == "hog_smoothing") c.hog_smoothing = parse_bool(value);
    else if (key == "rotation_kernel") c.rotation_kernel = parse_rotation_kernel(value);
    else if (key == "rotation_kernel_sigma") c.rotation_kernel_sigma = require_number(key, value);
    else if (key == "descriptor_eta") c.descriptor_eta = require_number(key, value);
    else throw InvalidArgument("unknown config key '" + key + "'");
}

TrackerConfig parse_config(const std::string& text, TrackerConfig base) {
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    bool sigma_given = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        if (trim(line).empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw InvalidArgument("config line " + std::to_string(line_no) + ": expected key=value");
        const std::string key = trim(line.substr(0, eq));
        try {
            apply_config_entry(base, key, line.substr(eq + 1));
        } catch (const InvalidArgument& e) {
            throw InvalidArgument("config line " + std::to_string(line_no) + ": " + e.what());
        }
        sigma_given = sigma_given || key == "kernel_sigma";
    }
    if (base.feature_mode == FeatureMode::cellhog && !sigma_given && base.kernel_sigma == TrackerConfig{}.kernel_sigma)
        base.kernel_sigma = 0.6;
    base.validate();
    return base;
}

TrackerConfig load_config(const fs::path& path, TrackerConfig base) {
    return parse_config(read_text(path), base);
}

std::string format_config(const TrackerConfig& config) {
    std::string out;
    for (const auto& [k, v] : config_entries(config)) out += k + "=" + v + "\n";
    return out;
}

nlohmann::ordered_json config_to_json(const TrackerConfig& config) {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const auto& [k, v] : config_entries(config)) {
        if (v == "true" || v == "false") j[k] = (v == "true");
        else if (const auto num = parse_double(v)) j[k] = k == "bins" ? nlohmann::ordered_json(config.bins)
                                                                      : nlohmann::ordered_json(*num);
        else j[k] = v;
    }
    return j;
}

TrackerConfig config_from_json(const nlohmann::ordered_json& j) {
    if (!j.is_object()) throw DataError("config: expected a JSON object");
    TrackerConfig c;
    for (const auto& [k, v] : j.items()) {
        std::string value;
        if (v.is_boolean()) value = v.get<bool>() ? "true" : "false";
        else if (v.is_number_integer()) value = std::to_string(v.get<long long>());
        else if (v.is_number()) value = shortest(v.get<double>());
        else if (v.is_string()) value = v.get<std::string>();
        else throw DataError("config: unsupported value for '" + k + "'");
        apply_config_entry(c, k, value);
    }
    c.validate();
    return c;
}

// ---------------------------------------------------------------------------

// Round-trips through the printed form so quantized values equal parsed ones bit for bit.
double quantize(double v) {
    if (!std::isfinite(v)) return v;
    const double q = *parse_double(fixed6(v));
    return q == 0.0 ? 0.0 : q;
}

std::vector<FrameRecord> quantize(std::vector<FrameRecord> records) {
    for (auto& r : records) {
        r.box = {quantize(r.box.x), quantize(r.box.y), quantize(r.box.w), quantize(r.box.h)};
        r.theta_deg = quantize(r.theta_deg);
        r.peak_baseline = quantize(r.peak_baseline);
        r.peak_rotated = quantize(r.peak_rotated);
        if (r.center_error) r.center_error = quantize(*r.center_error);
    }
    return records;
}

std::string format_records_csv(const std::vector<FrameRecord>& records) {
    std::string out;
    for (std::size_t i = 0; i < kRecordColumns.size(); ++i) {
        if (i) out += ',';
        out += kRecordColumns[i];
    }
    out += '\n';
    for (const auto& r : records) {
        out += std::to_string(r.frame_index) + ',' + fixed6(r.box.x) + ',' + fixed6(r.box.y) + ',' +
               fixed6(r.box.w) + ',' + fixed6(r.box.h) + ',' + fixed6(r.theta_deg) + ',' +
               fixed6(r.peak_baseline) + ',' + fixed6(r.peak_rotated) + ',' + (r.used_rotation ? "1" : "0") +
               ',' + (r.center_error ? fixed6(*r.center_error) : std::string()) + '\n';
    }
    return out;
}

std::vector<FrameRecord> parse_records_csv(const std::string& text, const std::string& source) {
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    auto fail = [&](const std::string& what) {
        throw DataError(source + ":" + std::to_string(line_no) + ": " + what);
    };

    if (!std::getline(in, line)) throw DataError(source + ": empty file");
    ++line_no;
    const auto header = split(trim(line), ',');
    if (header.size() != kRecordColumns.size() ||
        !std::equal(header.begin(), header.end(), kRecordColumns.begin()))
        fail("unexpected header");

    std::vector<FrameRecord> records;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto f = split(trim(line), ',');
        if (f.size() != kRecordColumns.size()) fail("expected 10 fields");
        auto num = [&](std::size_t i) {
            const auto v = parse_double(f[i]);
            if (!v) fail("bad value in column '" + std::string(kRecordColumns[i]) + "'");
            return *v;
        };
        FrameRecord r;
        const double frame = num(0);
        if (frame != std::floor(frame)) fail("frame must be an integer");
        r.frame_index = static_cast<int>(frame);
        r.box = {num(1), num(2), num(3), num(4)};
        r.theta_deg = num(5);
        r.peak_baseline = num(6);
        r.peak_rotated = num(7);
        const std::string used = trim(f[8]);
        if (used != "0" && used != "1") fail("used_rotation must be 0 or 1");
        r.used_rotation = used == "1";
        if (!trim(f[9]).empty()) r.center_error = num(9);
        records.push_back(r);
    }
    return records;
}

nlohmann::ordered_json metrics_to_json(const MetricsReport& m, const nlohmann::ordered_json& config) {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    if (m.precision_curve) {
        nlohmann::ordered_json curve = nlohmann::ordered_json::array();
        for (double v : *m.precision_curve) curve.push_back(quantize(v));
        j["precision_curve"] = std::move(curve);
    }
    if (m.precision_at_20) j["precision_at_20"] = quantize(*m.precision_at_20);
    if (m.mean_center_error) j["mean_center_error"] = quantize(*m.mean_center_error);
    if (m.mho_deg) j["mho_deg"] = quantize(*m.mho_deg);
    if (m.success_rate) j["success_rate"] = quantize(*m.success_rate);
    if (!m.per_method_mae.empty()) {
        nlohmann::ordered_json mae = nlohmann::ordered_json::object();
        for (const auto& [k, v] : m.per_method_mae) mae[k] = quantize(v);
        j["per_method_mae"] = std::move(mae);
    }
    j["mho_definition"] = "population standard deviation (divisor n)";
    j["config"] = config;
    return j;
}

MetricsReport metrics_from_json(const nlohmann::ordered_json& j) {
    MetricsReport m;
    try {
        if (j.contains("precision_curve")) m.precision_curve = j.at("precision_curve").get<std::vector<double>>();
        if (j.contains("precision_at_20")) m.precision_at_20 = j.at("precision_at_20").get<double>();
        if (j.contains("mean_center_error")) m.mean_center_error = j.at("mean_center_error").get<double>();
        if (j.contains("mho_deg")) m.mho_deg = j.at("mho_deg").get<double>();
        if (j.contains("success_rate")) m.success_rate = j.at("success_rate").get<double>();
        if (j.contains("per_method_mae"))
            m.per_method_mae = j.at("per_method_mae").get<std::map<std::string, double>>();
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("metrics: ") + e.what());
    }
    return m;
}

std::string format_metrics(const MetricsReport& metrics, const nlohmann::ordered_json& config) {
    return metrics_to_json(metrics, config).dump(2) + "\n";
}

RunArtifacts write_results(const std::vector<FrameRecord>& records, const MetricsReport& metrics,
                           const nlohmann::ordered_json& config, const fs::path& out_dir) {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw DataError("cannot create " + out_dir.string() + ": " + ec.message());

    RunArtifacts art{out_dir / kRecordsFile, out_dir / kMetricsFile, out_dir / kPrecisionFile,
                     out_dir / kThetaFile};
    write_text(art.records, format_records_csv(records));
    write_text(art.metrics, format_metrics(metrics, config));

    std::string precision = "threshold_px,precision\n";
    if (metrics.precision_curve)
        for (std::size_t t = 0; t < metrics.precision_curve->size(); ++t)
            precision += std::to_string(t) + ',' + fixed6((*metrics.precision_curve)[t]) + '\n';
    write_text(art.precision, precision);

    std::string theta = "frame,theta_deg\n";
    for (const auto& r : records) theta += std::to_string(r.frame_index) + ',' + fixed6(r.theta_deg) + '\n';
    write_text(art.theta, theta);
    return art;
}

StoredRun read_results(const fs::path& out_dir) {
    StoredRun run;
    const fs::path records_path = out_dir / kRecordsFile;
    const fs::path metrics_path = out_dir / kMetricsFile;
    run.records = parse_records_csv(read_text(records_path), records_path.string());
    nlohmann::ordered_json j;
    try {
        j = nlohmann::ordered_json::parse(read_text(metrics_path));
    } catch (const nlohmann::json::parse_error& e) {
        throw DataError(metrics_path.string() + ": " + e.what());
    }
    run.metrics = metrics_from_json(j);
    run.config = j.value("config", nlohmann::ordered_json::object());
    return run;
}

}  // namespace rkcf::io
