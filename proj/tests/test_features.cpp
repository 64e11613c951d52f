#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rkcf/error.hpp"
#include "rkcf/features.hpp"
#include "rkcf/spectral.hpp"
#include "support.hpp"

using namespace rkcf;
using namespace rkcf::testing;

namespace {

constexpr double kPi = std::numbers::pi;

// Straightforward re-derivation of the descriptor definition, used as an oracle.
std::vector<double> reference_hog(const RealGrid& p, int bins, bool signed_mode, bool smooth) {
    const double span = signed_mode ? 360.0 : 180.0;
    const double width = span / bins;
    std::vector<double> h(static_cast<std::size_t>(bins), 0.0);
    for (int r = 0; r < p.rows(); ++r)
        for (int c = 0; c < p.cols(); ++c) {
            const double gx = p.clamped(r, c + 1) - p.clamped(r, c - 1);
            const double gy = p.clamped(r + 1, c) - p.clamped(r - 1, c);
            const double mag = std::hypot(gx, gy);
            if (mag == 0.0) continue;
            double phi = std::atan2(gy, gx) * 180.0 / kPi;
            phi = std::fmod(phi + 360.0, span);
            if (phi >= span) phi -= span;
            const double pos = phi / width;
            const int lo = static_cast<int>(std::floor(pos)) % bins;
            const double frac = pos - std::floor(pos);
            h[static_cast<std::size_t>(lo)] += mag * (1.0 - frac);
            h[static_cast<std::size_t>((lo + 1) % bins)] += mag * frac;
        }
    if (smooth) {
        const double k[5] = {1.0 / 16, 4.0 / 16, 6.0 / 16, 4.0 / 16, 1.0 / 16};
        std::vector<double> s(h.size(), 0.0);
        for (int i = 0; i < bins; ++i)
            for (int j = -2; j <= 2; ++j)
                s[static_cast<std::size_t>(i)] += k[j + 2] * h[static_cast<std::size_t>(((i - j) % bins + bins) % bins)];
        h = s;
    }
    double n = 0.0;
    for (double v : h) n += v * v;
    if (n > 0.0)
        for (double& v : h) v /= std::sqrt(n);
    return h;
}

// Circular shift (in bins) that best aligns b onto a: argmax_s sum_k a[k] b[k + s].
int best_shift(const std::vector<double>& a, const std::vector<double>& b) {
    const int n = static_cast<int>(a.size());
    int best = 0;
    double best_v = -1.0;
    for (int s = 0; s < n; ++s) {
        double v = 0.0;
        for (int k = 0; k < n; ++k) v += a[static_cast<std::size_t>(k)] * b[static_cast<std::size_t>((k + s) % n)];
        if (v > best_v) {
            best_v = v;
            best = s;
        }
    }
    return best >= (n + 1) / 2 ? best - n : best;
}

RealGrid windowed(const RealGrid& p) { return apply_window(p, cosine_window(p.shape())); }

RealGrid blob(int size, double cr, double cc, double sr, double sc, double angle_deg = 0.0) {
    RealGrid g(size, size);
    const double a = angle_deg * kPi / 180.0;
    for (int r = 0; r < size; ++r)
        for (int c = 0; c < size; ++c) {
            const double x = c - cc, y = r - cr;
            const double u = x * std::cos(a) + y * std::sin(a);
            const double v = -x * std::sin(a) + y * std::cos(a);
            g(r, c) = std::exp(-0.5 * (u * u / (sc * sc) + v * v / (sr * sr)));
        }
    return g;
}

}  // namespace

// ---------------------------------------------------------------------------
// Patch extraction

TEST(ExtractPatch, InteriorCropIsExactCopy) {
    Gen gen(31);
    const RealGrid frame = gen.grid(40, 50, 0.0, 1.0);
    const Patch p = extract_patch(frame, {20.0, 25.0}, {10, 12}, 3);
    EXPECT_EQ(p.frame_index(), 3);
    for (int r = 0; r < 10; ++r)
        for (int c = 0; c < 12; ++c) EXPECT_EQ(p.pixels()(r, c), frame(15 + r, 19 + c));
}

TEST(ExtractPatch, ConstantFrameCornerIsConstant) {
    const RealGrid frame(30, 30, 0.25);
    const Patch p = extract_patch(frame, {0.0, 0.0}, {16, 16});
    for (double v : p.pixels()) EXPECT_EQ(v, 0.25);
}

TEST(ExtractPatch, CornerOfRampReplicatesEdges) {
    RealGrid ramp(4, 4);
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) ramp(r, c) = 4 * r + c;
    // 3x3 window centred on (0, 0): rows/cols -1, 0, 1 -> clamped 0, 0, 1
    const RealGrid crop = crop_replicated(ramp, {0.0, 0.0}, {3, 3});
    const double expected[3][3] = {{0, 0, 1}, {0, 0, 1}, {4, 4, 5}};
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) EXPECT_EQ(crop(r, c), expected[r][c]);
}

TEST(ExtractPatch, Errors) {
    EXPECT_THROW((void)extract_patch(RealGrid(), {0, 0}, {8, 8}), InvalidArgument);
    EXPECT_THROW(Patch(RealGrid(7, 8)), InvalidArgument);
    EXPECT_THROW(Patch(RealGrid(8, 8, 1.5)), InvalidArgument);
    EXPECT_THROW(Patch(RealGrid(8, 8, std::nan(""))), InvalidArgument);
}

// ---------------------------------------------------------------------------
// Grayscale

TEST(Grayscale, Coefficients) {
    const Image white{1, 1, 3, {1.0, 1.0, 1.0}};
    const Image green{1, 1, 3, {0.0, 1.0, 0.0}};
    EXPECT_NEAR(to_grayscale(white)(0, 0), 1.0, 1e-15);
    EXPECT_DOUBLE_EQ(to_grayscale(green)(0, 0), 0.587);
    Gen gen(32);
    for (int i = 0; i < 20; ++i) {
        const double r = gen.uniform(), g = gen.uniform(), b = gen.uniform();
        EXPECT_NEAR(to_grayscale(Image{1, 1, 3, {r, g, b}})(0, 0), 0.299 * r + 0.587 * g + 0.114 * b, 1e-15);
    }
    const Image gray{1, 2, 1, {0.3, 0.7}};
    EXPECT_EQ(to_grayscale(gray)(0, 1), 0.7);
    EXPECT_THROW((void)to_grayscale(Image{1, 1, 2, {0.1, 0.2}}), InvalidArgument);
}

// ---------------------------------------------------------------------------
// Global HOG

TEST(GlobalHog, ConstantPatchIsDegenerate) {
    const auto d = global_hog(RealGrid(16, 16, 0.4), 18);
    EXPECT_TRUE(d.degenerate);
    for (double v : d.bins) EXPECT_EQ(v, 0.0);
}

TEST(GlobalHog, VerticalEdgeFallsInBinZero) {
    RealGrid step(16, 16);
    for (int r = 0; r < 16; ++r)
        for (int c = 8; c < 16; ++c) step(r, c) = 1.0;
    const auto raw = global_hog(step, 18, OrientationMode::unsigned180, false);
    EXPECT_FALSE(raw.degenerate);
    EXPECT_DOUBLE_EQ(raw.bins[0], 1.0);
    for (int k = 1; k < 18; ++k) EXPECT_EQ(raw.bins[static_cast<std::size_t>(k)], 0.0);

    // smoothed: taps [1 4 6 4 1]/16 around bin 0, L2-normalized -> 6 / sqrt(70) at the centre
    const auto smooth = global_hog(step, 18, OrientationMode::unsigned180, true);
    EXPECT_NEAR(smooth.bins[0], 6.0 / std::sqrt(70.0), 1e-15);
    EXPECT_NEAR(smooth.bins[1], 4.0 / std::sqrt(70.0), 1e-15);
    EXPECT_NEAR(smooth.bins[17], 4.0 / std::sqrt(70.0), 1e-15);
    EXPECT_NEAR(smooth.bins[16], 1.0 / std::sqrt(70.0), 1e-15);
    EXPECT_EQ(smooth.bins[9], 0.0);
}

TEST(GlobalHog, SignedModeSeparatesOpposites) {
    RealGrid down(16, 16), up(16, 16);
    for (int r = 8; r < 16; ++r)
        for (int c = 0; c < 16; ++c) down(r, c) = 1.0;  // brighter below: gradient at +90
    for (int r = 0; r < 8; ++r)
        for (int c = 0; c < 16; ++c) up(r, c) = 1.0;
    EXPECT_DOUBLE_EQ(global_hog(down, 36, OrientationMode::signed360, false).bins[9], 1.0);
    EXPECT_DOUBLE_EQ(global_hog(up, 36, OrientationMode::signed360, false).bins[27], 1.0);
    EXPECT_DOUBLE_EQ(global_hog(up, 18, OrientationMode::unsigned180, false).bins[9], 1.0);
}

TEST(GlobalHog, MatchesReferenceOnRandomPatches) {
    Gen gen(33);
    for (int trial = 0; trial < 12; ++trial) {
        const int rows = gen.integer(8, 24), cols = gen.integer(8, 24);
        const int bins = gen.integer(8, 90);
        const bool signed_mode = trial % 2 == 1;
        const bool smooth = trial % 3 != 0;
        const RealGrid p = gen.grid(rows, cols, 0.0, 1.0);
        const auto d = global_hog(p, bins, signed_mode ? OrientationMode::signed360 : OrientationMode::unsigned180,
                                  smooth);
        const auto ref = reference_hog(p, bins, signed_mode, smooth);
        ASSERT_EQ(d.size(), bins);
        for (int k = 0; k < bins; ++k) EXPECT_NEAR(d.bins[static_cast<std::size_t>(k)], ref[static_cast<std::size_t>(k)], 1e-12);
    }
}

TEST(GlobalHog, UnitNormAndNonNegative) {
    Gen gen(34);
    for (int trial = 0; trial < 10; ++trial) {
        const auto d = global_hog(windowed(gen.grid(20, 20, 0.0, 1.0)), 90);
        double n = 0.0;
        for (double v : d.bins) {
            EXPECT_GE(v, 0.0);
            n += v * v;
        }
        EXPECT_NEAR(n, 1.0, 1e-12);
    }
    EXPECT_THROW((void)global_hog(RealGrid(8, 8), 7), InvalidArgument);
}

TEST(GlobalHog, GratingRotationShiftsBins) {
    constexpr int b = 90;
    constexpr double delta = 180.0 / b;
    const auto a = global_hog(windowed(grating(64, 45.0, 8.0)), b);
    const auto r = global_hog(windowed(grating(64, 45.0 + 4 * delta, 8.0)), b);
    EXPECT_NEAR(best_shift(a.bins, r.bins), 4, 1);
    double corr = 0.0;
    for (int k = 0; k < b; ++k) corr += a.bins[static_cast<std::size_t>(k)] * r.bins[static_cast<std::size_t>((k + 4) % b)];
    EXPECT_GT(corr, 0.95);
}

// Rotating smooth patterns shifts the descriptor by round(theta / delta) +- 1 bin.
TEST(GlobalHog, RotationShiftCorrespondence) {
    for (int b : {36, 90}) {
        const double delta = 180.0 / b;
        const RealGrid sources[] = {grating(64, 20.0, 9.0), blob(64, 31.5, 31.5, 5.0, 14.0, 15.0)};
        for (const RealGrid& src : sources) {
            const auto a = global_hog(windowed(src), b);
            for (double theta : {-60.0, -30.0, -10.0, 10.0, 30.0, 60.0}) {
                const auto r = global_hog(windowed(rotate_patch(src, theta)), b);
                EXPECT_NEAR(best_shift(a.bins, r.bins), std::lround(theta / delta), 1)
                    << "b=" << b << " theta=" << theta;
            }
        }
    }
}

TEST(GlobalHog, HalfTurnInvariantInUnsignedMode) {
    Gen gen(35);
    for (int trial = 0; trial < 5; ++trial) {
        const RealGrid p = gen.grid(24, 24, 0.0, 1.0);
        const auto a = global_hog(windowed(p), 90);
        const auto r = global_hog(windowed(rotate_patch(p, 180.0)), 90);
        for (int k = 0; k < 90; ++k) EXPECT_NEAR(a.bins[static_cast<std::size_t>(k)], r.bins[static_cast<std::size_t>(k)], 1e-3);
    }
}

// ---------------------------------------------------------------------------
// Rotation

TEST(RotatePatch, ZeroIsIdentity) {
    Gen gen(36);
    const RealGrid p = gen.grid(12, 15, 0.0, 1.0);
    EXPECT_EQ(rotate_patch(p, 0.0), p);
    const Patch patch(p, 4, {1.0, 2.0});
    EXPECT_EQ(rotate_patch(patch, 0.0).pixels(), p);
    EXPECT_EQ(rotate_patch(patch, 30.0).frame_index(), 4);
}

TEST(RotatePatch, HalfTurnTwiceRestores) {
    Gen gen(37);
    for (Shape s : {Shape{9, 9}, Shape{12, 12}, Shape{9, 14}}) {
        const RealGrid p = gen.grid(s.rows, s.cols, 0.0, 1.0);
        EXPECT_LT(max_abs_diff(rotate_patch(rotate_patch(p, 180.0), 180.0), p), 1e-6);
    }
    const RealGrid q = gen.grid(11, 11, 0.0, 1.0);
    RealGrid r = q;
    for (int i = 0; i < 4; ++i) r = rotate_patch(r, 90.0);
    EXPECT_EQ(r, q);  // exact pixel remap on odd square patches
    EXPECT_EQ(rotate_patch(q, 90.0)(0, 10), q(0, 0));
}

TEST(RotatePatch, DiscIsRotationInvariant) {
    RealGrid disc(41, 41);
    for (int r = 0; r < 41; ++r)
        for (int c = 0; c < 41; ++c)
            disc(r, c) = 0.5 + 0.5 * std::tanh((12.0 - std::hypot(r - 20.0, c - 20.0)) / 2.0);
    for (double theta : {7.0, 33.0, -61.0, 135.0}) EXPECT_LE(max_abs_diff(rotate_patch(disc, theta), disc), 2e-2);
}

TEST(RotatePatch, RejectsLargeAngles) {
    EXPECT_THROW((void)rotate_patch(RealGrid(8, 8), 181.0), InvalidArgument);
}

TEST(RotateDisplacement, Basics) {
    const Displacement d0 = rotate_displacement({1.5, -2.0}, 0.0);
    EXPECT_EQ(d0, (Displacement{1.5, -2.0}));
    const Displacement q = rotate_displacement({0.0, 1.0}, 90.0);
    EXPECT_EQ(q, (Displacement{1.0, 0.0}));
    Gen gen(38);
    for (int i = 0; i < 50; ++i) {
        const Displacement d{gen.uniform(-20, 20), gen.uniform(-20, 20)};
        const double theta = gen.uniform(-180, 180);
        const Displacement r = rotate_displacement(d, theta);
        EXPECT_NEAR(std::hypot(r.dy, r.dx), std::hypot(d.dy, d.dx), 1e-12);
        const Displacement back = rotate_displacement(r, -theta);
        EXPECT_NEAR(back.dy, d.dy, 1e-12);
        EXPECT_NEAR(back.dx, d.dx, 1e-12);
    }
}

// The blob moves under rotate_patch the way rotate_displacement says it does.
TEST(RotateDisplacement, AgreesWithRotatePatch) {
    constexpr int size = 41;
    const double c0 = 20.0;
    const Displacement offset{-5.0, 9.0};
    const RealGrid p = blob(size, c0 + offset.dy, c0 + offset.dx, 2.0, 2.0);
    for (double theta : {-75.0, -30.0, 20.0, 45.0, 120.0}) {
        const RealGrid q = rotate_patch(p, theta);
        double sw = 0.0, sr = 0.0, sc = 0.0;
        for (int r = 0; r < size; ++r)
            for (int c = 0; c < size; ++c) {
                sw += q(r, c);
                sr += q(r, c) * r;
                sc += q(r, c) * c;
            }
        const Displacement want = rotate_displacement(offset, theta);
        EXPECT_NEAR(sr / sw - c0, want.dy, 1.0) << theta;
        EXPECT_NEAR(sc / sw - c0, want.dx, 1.0) << theta;
    }
}

// ---------------------------------------------------------------------------
// Misc

TEST(Resize, ConstantAndIdentity) {
    const RealGrid c(10, 14, 0.3);
    for (double v : resize_bilinear(c, {25, 7})) EXPECT_NEAR(v, 0.3, 1e-15);
    Gen gen(39);
    const RealGrid p = gen.grid(9, 11);
    EXPECT_LT(max_abs_diff(resize_bilinear(p, p.shape()), p), 1e-15);
}

TEST(CellHog, ShapeAndRange) {
    Gen gen(40);
    const auto channels = cell_hog(gen.grid(32, 24, 0.0, 1.0), 4, 9);
    ASSERT_EQ(channels.size(), 9u);
    for (const auto& ch : channels) {
        EXPECT_EQ(ch.shape(), (Shape{8, 6}));
        for (double v : ch) {
            EXPECT_GE(v, 0.0);
            EXPECT_LE(v, 0.4);
        }
    }
    for (const auto& ch : cell_hog(RealGrid(16, 16, 0.5), 4, 9))
        for (double v : ch) EXPECT_EQ(v, 0.0);
}
