#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "rkcf/error.hpp"
#include "rkcf/evaluation.hpp"
#include "rkcf/io.hpp"
#include "support.hpp"

using namespace rkcf;
using namespace rkcf::testing;

namespace {

FrameRecord record(int i, double err, bool used, double theta = 0.0) {
    FrameRecord r;
    r.frame_index = i;
    r.box = {0, 0, 10, 10};
    r.center_error = err;
    r.used_rotation = used;
    r.theta_deg = theta;
    return r;
}

}  // namespace

TEST(Precision, TwoErrors) {
    const std::vector<double> e{10.0, 30.0};
    const auto p = precision_curve(e);
    ASSERT_EQ(p.size(), 51u);
    EXPECT_EQ(p[20], 0.5);
    EXPECT_EQ(p[9], 0.0);
    EXPECT_EQ(p[10], 0.5);
    EXPECT_EQ(p[30], 1.0);
}

TEST(Precision, AllZero) {
    const std::vector<double> e(7, 0.0);
    for (double v : precision_curve(e)) EXPECT_EQ(v, 1.0);
}

TEST(Precision, HandCountedFiveFrames) {
    const std::vector<double> e{0.5, 3.0, 3.2, 19.99, 48.0};
    const auto p = precision_curve(e);
    // counted by hand: <=0:0, <=1:1, <=3:2, <=4:3, <=20:4, <=48:5
    EXPECT_EQ(p[0], 0.0);
    EXPECT_EQ(p[1], 0.2);
    EXPECT_EQ(p[3], 0.4);
    EXPECT_EQ(p[4], 0.6);
    EXPECT_EQ(p[19], 0.6);
    EXPECT_EQ(p[20], 0.8);
    EXPECT_EQ(p[47], 0.8);
    EXPECT_EQ(p[48], 1.0);
}

TEST(Precision, EmptyOrMissingGroundTruthThrows) {
    EXPECT_THROW((void)precision_curve(std::vector<double>{}), InvalidArgument);
    std::vector<FrameRecord> recs{record(1, 1.0, false)};
    recs[0].center_error.reset();
    EXPECT_THROW((void)precision_curve(recs), InvalidArgument);
}

TEST(PrecisionProperty, MonotoneBoundedCdf) {
    Gen gen(21);
    for (int trial = 0; trial < 50; ++trial) {
        const auto e = gen.vec(gen.integer(1, 40), 0.0, 80.0);
        const auto p = precision_curve(e);
        for (std::size_t t = 0; t < p.size(); ++t) {
            EXPECT_GE(p[t], 0.0);
            EXPECT_LE(p[t], 1.0);
            if (t > 0) EXPECT_GE(p[t], p[t - 1]);
            const auto count = std::count_if(e.begin(), e.end(), [&](double v) { return v <= double(t); });
            EXPECT_DOUBLE_EQ(p[t], double(count) / double(e.size()));
        }
        EXPECT_GE(p[50], p[20]);
    }
}

TEST(Mho, SmallCases) {
    EXPECT_EQ(compute_mho(std::vector<double>{3.0, 3.0, 3.0}), 0.0);
    EXPECT_DOUBLE_EQ(compute_mho(std::vector<double>{10.0, -10.0, 10.0, -10.0}), 10.0);
    EXPECT_EQ(compute_mho(std::vector<double>{42.0}), 0.0);
    EXPECT_THROW((void)compute_mho(std::vector<double>{}), InvalidArgument);
}

TEST(MhoProperty, MatchesPopulationStdAndShiftInvariant) {
    Gen gen(22);
    for (int trial = 0; trial < 60; ++trial) {
        auto th = gen.vec(gen.integer(1, 100), -60.0, 60.0);
        const double m = compute_mho(th);
        EXPECT_NEAR(m, population_std(th), 1e-12);
        const double shift = gen.uniform(-30.0, 30.0);
        for (double& v : th) v += shift;
        EXPECT_NEAR(compute_mho(th), m, 1e-9);
    }
}

TEST(SuccessRate, Counting) {
    std::vector<FrameRecord> r{record(1, 0, true), record(2, 0, false), record(3, 0, false), record(4, 0, false)};
    EXPECT_EQ(compute_success_rate(r), 0.25);
    for (auto& x : r) x.used_rotation = true;
    EXPECT_EQ(compute_success_rate(r), 1.0);
    EXPECT_THROW((void)compute_success_rate(std::vector<FrameRecord>{}), InvalidArgument);
}

TEST(Summarize, FieldsFromRecords) {
    const std::vector<FrameRecord> r{record(1, 10.0, true, 10.0), record(2, 30.0, false, -10.0)};
    const MetricsReport m = summarize(r);
    ASSERT_TRUE(m.precision_curve && m.precision_at_20 && m.mean_center_error && m.mho_deg && m.success_rate);
    EXPECT_EQ(*m.precision_at_20, 0.5);
    EXPECT_EQ(*m.mean_center_error, 20.0);
    EXPECT_EQ(*m.mho_deg, 10.0);
    EXPECT_EQ(*m.success_rate, 0.5);

    std::vector<FrameRecord> no_gt = r;
    for (auto& x : no_gt) x.center_error.reset();
    const MetricsReport n = summarize(no_gt);
    EXPECT_FALSE(n.precision_curve || n.precision_at_20 || n.mean_center_error);
    EXPECT_TRUE(n.mho_deg && n.success_rate);
}

TEST(CircularDifference, FoldsIntoHalfSpan) {
    EXPECT_DOUBLE_EQ(circular_angle_difference(80.0, -80.0, 180.0), -20.0);
    EXPECT_DOUBLE_EQ(circular_angle_difference(10.0, 5.0, 180.0), 5.0);
    EXPECT_DOUBLE_EQ(circular_angle_difference(170.0, -170.0, 360.0), -20.0);
    Gen gen(23);
    for (int i = 0; i < 500; ++i) {
        const double span = gen.integer(0, 1) ? 180.0 : 360.0;
        const double d = circular_angle_difference(gen.uniform(-720, 720), gen.uniform(-720, 720), span);
        EXPECT_GE(d, -span / 2);
        EXPECT_LT(d, span / 2);
    }
}

TEST(Envelope, Parse) {
    EXPECT_EQ(parse_envelope("cos"), Envelope::cosine);
    EXPECT_EQ(parse_envelope("cosine"), Envelope::cosine);
    EXPECT_EQ(parse_envelope("gauss"), Envelope::gaussian);
    EXPECT_EQ(parse_envelope(to_string(Envelope::gaussian)), Envelope::gaussian);
    EXPECT_THROW((void)parse_envelope("box"), InvalidArgument);
}

TEST(Textures, DeterministicAndInRange) {
    const auto a = synthetic_textures(6, 48, 5);
    const auto b = synthetic_textures(6, 48, 5);
    ASSERT_EQ(a.size(), 6u);
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i], b[i]);
        EXPECT_EQ(a[i].shape(), (Shape{48, 48}));
        for (double v : a[i]) {
            EXPECT_GE(v, 0.0);
            EXPECT_LE(v, 1.0);
        }
    }
    EXPECT_NE(synthetic_textures(1, 48, 6)[0], a[0]);
}

TEST(RotationBenchmark, ZeroAngleRangeGivesZeroError) {
    RotationBenchSpec s;
    s.images = synthetic_textures(3, 64, 1);
    s.rotations_per_image = 4;
    s.angle_min_deg = 0.0;
    s.angle_max_deg = 0.0;
    const auto res = run_rotation_benchmark(s);
    ASSERT_EQ(res.cells.size(), 6u);
    for (const auto& c : res.cells) {
        EXPECT_EQ(c.mae_deg, 0.0);
        EXPECT_EQ(c.samples, 12u);
    }
}

TEST(RotationBenchmark, DeterministicAndOrdered) {
    RotationBenchSpec s;
    s.images = synthetic_textures(4, 64, 2);
    s.rotations_per_image = 10;
    s.seed = 3;
    const auto a = run_rotation_benchmark(s);
    const auto b = run_rotation_benchmark(s);
    ASSERT_EQ(a.cells.size(), b.cells.size());
    for (std::size_t i = 0; i < a.cells.size(); ++i) EXPECT_EQ(a.cells[i].mae_deg, b.cells[i].mae_deg);
    EXPECT_EQ(a.cells[0].envelope, Envelope::cosine);
    EXPECT_EQ(a.cells[0].method, RotationMethod::filter);
    EXPECT_EQ(a.cells[5].envelope, Envelope::gaussian);
    EXPECT_EQ(a.cells[5].method, RotationMethod::maxshift);
    EXPECT_EQ(a.mae(Envelope::gaussian, RotationMethod::maxshift), a.cells[5].mae_deg);
    s.envelopes = {Envelope::cosine};
    EXPECT_THROW((void)run_rotation_benchmark(s).mae(Envelope::gaussian, RotationMethod::filter), InvalidArgument);
}

TEST(RotationBenchmark, ImageOrderDoesNotMatterWithOneAngleSet) {
    // every sample uses the same angle, so reversing the images only permutes
    // the accumulation
    RotationBenchSpec s;
    s.images = synthetic_textures(2, 64, 4);
    s.rotations_per_image = 1;
    s.angle_min_deg = s.angle_max_deg = 25.0;
    const auto a = run_rotation_benchmark(s);
    std::reverse(s.images.begin(), s.images.end());
    const auto b = run_rotation_benchmark(s);
    for (std::size_t i = 0; i < a.cells.size(); ++i) EXPECT_NEAR(a.cells[i].mae_deg, b.cells[i].mae_deg, 1e-12);
}

TEST(RotationBenchmark, InvalidSpec) {
    RotationBenchSpec s;
    EXPECT_THROW((void)run_rotation_benchmark(s), InvalidArgument);  // no images
    s.images = synthetic_textures(1, 64, 1);
    s.angle_min_deg = 10.0;
    s.angle_max_deg = -10.0;
    EXPECT_THROW((void)run_rotation_benchmark(s), InvalidArgument);
}

TEST(Compare, DeterministicAndDifference) {
    const auto seq = io::generate_synthetic_sequence(io::SyntheticKind::translate_rotate, 20, {}, 2);
    const auto a = compare_trackers(seq.frames, seq.ground_truth[0], {}, seq.ground_truth);
    const auto b = compare_trackers(seq.frames, seq.ground_truth[0], {}, seq.ground_truth);
    EXPECT_EQ(a.rkcf_records, b.rkcf_records);
    EXPECT_EQ(a.baseline, b.baseline);
    EXPECT_EQ(a.rkcf, b.rkcf);
    ASSERT_EQ(a.precision_difference.size(), 51u);
    for (int t = 0; t <= 50; ++t)
        EXPECT_DOUBLE_EQ(a.precision_difference[t], (*a.rkcf.precision_curve)[t] - (*a.baseline.precision_curve)[t]);
    for (const auto& r : a.baseline_records) EXPECT_FALSE(r.used_rotation);
}

// Thresholds 0 and 1 px are left out: a noise-driven counter-rotated win moves
// the box by a sub-pixel amount, which can cost a few frames at those radii.
TEST(Compare, NonRotatingFallbackSafety) {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        const auto seq = io::generate_synthetic_sequence(io::SyntheticKind::translate, 40, {}, seed);
        const auto rep = compare_trackers(seq.frames, seq.ground_truth[0], {}, seq.ground_truth);
        for (int t = 2; t <= 50; ++t) EXPECT_GE(rep.precision_difference[t], -0.02) << "seed " << seed << " t " << t;
    }
}

// At the default speed both trackers saturate; a faster, noisier target
// separates them on the rotating sequence.
TEST(Compare, RotatingSequenceFavoursRkcf) {
    io::SyntheticParams p;
    p.velocity_dy = 4.0;
    p.velocity_dx = 7.0;
    p.noise = 0.05;
    double base = 0.0, rkcf = 0.0;
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        const auto seq = io::generate_synthetic_sequence(io::SyntheticKind::translate_rotate, 60, p, seed);
        const auto rep = compare_trackers(seq.frames, seq.ground_truth[0], {}, seq.ground_truth);
        base += *rep.baseline.precision_at_20;
        rkcf += *rep.rkcf.precision_at_20;
    }
    EXPECT_GT(rkcf, base);
}
