#include "glossc/transition_planner.hpp"

#include "glossc/errors.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace glossc;

namespace {

GlossSequence make_seq(std::vector<std::string> glosses,
                       std::vector<std::pair<std::size_t, std::size_t>> composites = {}) {
    GlossSequence seq;
    seq.glosses = std::move(glosses);
    seq.word_alignment.assign(seq.glosses.size(), {});
    seq.negation_marks.assign(seq.glosses.size(), false);
    seq.composite_spans = std::move(composites);
    return seq;
}

// Independent displacement oracle: component-by-component squared sum.
double oracle_sq_norm(const Vec3& a, const Vec3& b) {
    const double comps[3] = {a.x - b.x, a.y - b.y, a.z - b.z};
    double sum = 0.0;
    for (double c : comps) sum += c * c;
    return sum;
}

} // namespace

TEST_CASE("hand displacement of identical boundary poses is zero") {
    const auto clip = testutil::make_clip("A", {0.4, 0.2, 0.1});
    const HandDisplacement d = hand_displacement(clip, clip);
    CHECK(d.d_right == 0.0);
    CHECK(d.d_left == 0.0);
    CHECK_FALSE(d.left_active);
}

TEST_CASE("hand displacement is the squared magnitude of the pose difference") {
    const auto prev = testutil::make_clip("A", {0, 0, 0});
    const auto next = testutil::make_clip("B", {1, 2, 2});
    CHECK(hand_displacement(prev, next).d_right == 9.0);
}

TEST_CASE("hand displacement matches a component-wise oracle on random pairs") {
    std::mt19937 rng(1234);
    for (int i = 0; i < 50; ++i) {
        SignClip prev = testutil::make_clip("A", testutil::random_vec(rng));
        SignClip next = testutil::make_clip("B", testutil::random_vec(rng));
        prev.keyframes.back().left_hand = testutil::random_vec(rng);
        next.keyframes.front().left_hand = testutil::random_vec(rng);
        const HandDisplacement d = hand_displacement(prev, next);
        CHECK(d.d_right == oracle_sq_norm(next.keyframes.front().right_hand,
                                          prev.keyframes.back().right_hand));
        CHECK(d.d_left == oracle_sq_norm(next.keyframes.front().left_hand,
                                         prev.keyframes.back().left_hand));
    }
}

TEST_CASE("left_active when either clip's left hand moves") {
    const auto still = testutil::make_clip("A", {0, 0, 0});
    const auto moving = testutil::make_clip("B", {0, 0, 0}, {0.5, 0, 0});
    CHECK(hand_displacement(still, moving).left_active);
    CHECK(hand_displacement(moving, still).left_active);
    CHECK_FALSE(hand_displacement(still, still).left_active);
}

TEST_CASE("calibration finds the fixture's extremal pairs") {
    const SignDatabase db = load_sign_database_file(testutil::fixture("signdb_small.json"));
    const CalibrationResult result = calibrate(db);

    // Exhaustive-scan expectations, derived by hand from the fixture poses:
    // right scale over left-still pairs, both scale over pairs involving DAR.
    CHECK(result.scale.min_right == doctest::Approx(0.0025).epsilon(1e-12));
    CHECK(result.scale.max_right == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(result.scale.min_both == doctest::Approx(0.04).epsilon(1e-12));
    CHECK(result.scale.max_both == doctest::Approx(3.25).epsilon(1e-12));
    CHECK(result.closest_pair == std::pair<std::string, std::string>{"EU", "TER"});
    CHECK(result.furthest_pair == std::pair<std::string, std::string>{"ELE", "TER"});
}

TEST_CASE("calibration agrees with an independent exhaustive pair scan") {
    const SignDatabase db = load_sign_database_file(testutil::fixture("signdb_corpus.json"));
    const CalibrationResult result = calibrate(db);

    double lo_b = 1e300, hi_b = -1e300, lo_r = 1e300, hi_r = -1e300;
    for (const auto& [pid, prev] : db.clips) {
        for (const auto& [nid, next] : db.clips) {
            if (pid == nid) continue;
            const double dr = oracle_sq_norm(next.first_keyframe().right_hand,
                                             prev.last_keyframe().right_hand);
            const double dl = oracle_sq_norm(next.first_keyframe().left_hand,
                                             prev.last_keyframe().left_hand);
            if (prev.left_moves || next.left_moves) {
                lo_b = std::min(lo_b, dr + dl);
                hi_b = std::max(hi_b, dr + dl);
            } else {
                lo_r = std::min(lo_r, dr);
                hi_r = std::max(hi_r, dr);
            }
        }
    }
    CHECK(result.scale.min_both == lo_b);
    CHECK(result.scale.max_both == hi_b);
    CHECK(result.scale.min_right == lo_r);
    CHECK(result.scale.max_right == hi_r);
}

TEST_CASE("two-clip database calibrates from its two ordered pairs") {
    SignDatabase db;
    db.clips.emplace("A", testutil::make_clip("A", {0.0, 0, 0}));
    SignClip b = testutil::make_clip("B", {1.0, 0, 0});
    b.keyframes.front().right_hand = {0.5, 0, 0}; // asymmetric: (A,B) != (B,A)
    db.clips.emplace("B", b);

    const CalibrationResult result = calibrate(db);
    // (A,B): |0.5-0|^2 = 0.25, (B,A): |0-1.0|^2 = 1.0
    CHECK(result.scale.min_right == doctest::Approx(0.25));
    CHECK(result.scale.max_right == doctest::Approx(1.0));
    // no left-active pairs: both scale copied from the right scale
    CHECK(result.scale.min_both == result.scale.min_right);
    CHECK(result.scale.max_both == result.scale.max_right);
}

TEST_CASE("degenerate and undersized databases fail calibration") {
    SignDatabase one;
    one.clips.emplace("A", testutil::make_clip("A", {0.1, 0, 0}));
    CHECK_THROWS_AS(calibrate(one), CalibrationError);

    SignDatabase same;
    same.clips.emplace("A", testutil::make_clip("A", {0.1, 0, 0}));
    same.clips.emplace("B", testutil::make_clip("B", {0.1, 0, 0}));
    CHECK_THROWS_WITH_AS(calibrate(same), doctest::Contains("degenerate scale"),
                         CalibrationError);
}

TEST_CASE("displacement fractions hit the scale endpoints and clamp outside") {
    const ScaleCalibration calib{0.1, 2.1, 0.2, 1.2};
    HandDisplacement d;

    d.left_active = false;
    d.d_right = 0.2;
    CHECK(displacement_to_fraction(d, calib) == 0.0);
    d.d_right = 1.2;
    CHECK(displacement_to_fraction(d, calib) == 1.0);
    d.d_right = 0.05; // closer than anything in the calibration set
    CHECK(displacement_to_fraction(d, calib) == 0.0);
    d.d_right = 8.0;
    CHECK(displacement_to_fraction(d, calib) == 1.0);
    d.d_right = 0.7;
    CHECK(displacement_to_fraction(d, calib) == doctest::Approx(0.5));

    d.left_active = true;
    d.d_right = 0.05;
    d.d_left = 0.05;
    CHECK(displacement_to_fraction(d, calib) == 0.0);
    d.d_right = 1.0;
    d.d_left = 1.1;
    CHECK(displacement_to_fraction(d, calib) == 1.0);
}

TEST_CASE("duration interpolates between 0.3 and 1.1 seconds") {
    const TransitionConfig cfg;
    CHECK(fraction_to_duration(0.0, cfg) == 0.3);
    CHECK(fraction_to_duration(1.0, cfg) == 1.1);
    CHECK(fraction_to_duration(0.5, cfg) == doctest::Approx(0.7));
}

TEST_CASE("offset pairs each duration against 1.2 seconds") {
    const TransitionConfig cfg;
    CHECK(offset_for(0.5, cfg) == doctest::Approx(0.7));
    CHECK(offset_for(1.1, cfg) == doctest::Approx(0.1));
    CHECK(offset_for(0.2, cfg) == doctest::Approx(1.0));
    CHECK_THROWS_AS(offset_for(1.3, cfg), RangeError);
    CHECK_THROWS_AS(offset_for(0.0, cfg), RangeError);
}

TEST_CASE("offset identity holds exactly for randomized durations") {
    const TransitionConfig cfg;
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> dur(cfg.t_min, cfg.t_max);
    for (int i = 0; i < 1000; ++i) {
        const double d = dur(rng);
        CHECK(d + offset_for(d, cfg) == 1.2);
    }
    CHECK(0.2 + offset_for(0.2, cfg) == 1.2);
}

TEST_CASE("composite spans force the 0.2 s transition") {
    const SignDatabase db = load_sign_database_file(testutil::fixture("signdb_small.json"));
    const ScaleCalibration calib = calibrate(db).scale;

    const auto seq = make_seq({"VERMELHO", "MELÃO"}, {{0, 1}});
    const TransitionPlan plan = plan_transitions(seq, db, calib);
    REQUIRE(plan.boundaries.size() == 1);
    CHECK(plan.boundaries[0].duration == 0.2);
    CHECK(plan.boundaries[0].source == BoundarySource::composite);
    CHECK(plan.boundaries[0].duration + plan.boundaries[0].offset == 1.2);
}

TEST_CASE("a single gloss plans no boundaries") {
    const SignDatabase db = load_sign_database_file(testutil::fixture("signdb_small.json"));
    const ScaleCalibration calib = calibrate(db).scale;
    CHECK(plan_transitions(make_seq({"EU"}), db, calib).boundaries.empty());
}

TEST_CASE("dynamic plan matches an independent composition of the stages") {
    const SignDatabase db = load_sign_database_file(testutil::fixture("signdb_small.json"));
    const ScaleCalibration calib = calibrate(db).scale;
    const TransitionConfig cfg;

    const auto seq = make_seq({"EU", "QUERER", "CASA"});
    const TransitionPlan plan = plan_transitions(seq, db, calib, cfg);
    REQUIRE(plan.boundaries.size() == 2);

    for (std::size_t i = 0; i < 2; ++i) {
        const SignClip& prev = db.at(seq.glosses[i]);
        const SignClip& next = db.at(seq.glosses[i + 1]);
        const double dr = oracle_sq_norm(next.first_keyframe().right_hand,
                                         prev.last_keyframe().right_hand);
        const double dl = oracle_sq_norm(next.first_keyframe().left_hand,
                                         prev.last_keyframe().left_hand);
        double value, lo, hi;
        if (prev.left_moves || next.left_moves) {
            value = dr + dl;
            lo = calib.min_both;
            hi = calib.max_both;
        } else {
            value = dr;
            lo = calib.min_right;
            hi = calib.max_right;
        }
        const double f = std::clamp((value - lo) / (hi - lo), 0.0, 1.0);
        const double expected = cfg.t_min + f * (cfg.t_max - cfg.t_min);
        CHECK(plan.boundaries[i].duration == expected);
        CHECK(plan.boundaries[i].offset == cfg.total() - expected);
        CHECK(plan.boundaries[i].source == BoundarySource::dynamic);
    }
}

TEST_CASE("planning rejects unknown glosses and overlapping spans") {
    const SignDatabase db = load_sign_database_file(testutil::fixture("signdb_small.json"));
    const ScaleCalibration calib = calibrate(db).scale;

    CHECK_THROWS_WITH_AS(plan_transitions(make_seq({"EU", "FANTASMA"}), db, calib),
                         doctest::Contains("FANTASMA"), LookupError);
    CHECK_THROWS_WITH_AS(
        plan_transitions(make_seq({"EU", "TER", "CASA", "DAR"}, {{0, 2}, {1, 3}}), db, calib),
        doctest::Contains("overlap"), ValidationError);
    CHECK_THROWS_AS(plan_transitions(make_seq({"EU", "TER"}, {{1, 1}}), db, calib),
                    ValidationError);
}

TEST_CASE("calibration endpoints map to the duration bounds through the full chain") {
    const SignDatabase db = load_sign_database_file(testutil::fixture("signdb_small.json"));
    const CalibrationResult calib = calibrate(db);
    const TransitionConfig cfg;

    const auto min_seq = make_seq({calib.closest_pair.first, calib.closest_pair.second});
    const auto max_seq = make_seq({calib.furthest_pair.first, calib.furthest_pair.second});
    CHECK(plan_transitions(min_seq, db, calib.scale, cfg).boundaries[0].duration == cfg.t_min);
    CHECK(plan_transitions(max_seq, db, calib.scale, cfg).boundaries[0].duration == cfg.t_max);
}

TEST_CASE("duration is monotone in total displacement") {
    const ScaleCalibration calib{0.05, 3.0, 0.02, 4.5};
    const TransitionConfig cfg;
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> disp(0.0, 5.0);

    for (int active = 0; active < 2; ++active) {
        for (int i = 0; i < 2000; ++i) {
            HandDisplacement a, b;
            a.left_active = b.left_active = active == 1;
            a.d_right = disp(rng);
            b.d_right = disp(rng);
            if (active == 1) {
                a.d_left = disp(rng);
                b.d_left = disp(rng);
            }
            const double ta = a.d_right + a.d_left;
            const double tb = b.d_right + b.d_left;
            const double da = fraction_to_duration(displacement_to_fraction(a, calib), cfg);
            const double db_ = fraction_to_duration(displacement_to_fraction(b, calib), cfg);
            if (ta <= tb) CHECK(da <= db_);
            else CHECK(db_ <= da);
        }
    }
}

TEST_CASE("plans are deterministic") {
    const SignDatabase db = load_sign_database_file(testutil::fixture("signdb_small.json"));
    const ScaleCalibration calib = calibrate(db).scale;
    const auto seq = make_seq({"EU", "DAR", "CASA", "ELE"});

    const TransitionPlan p1 = plan_transitions(seq, db, calib);
    const TransitionPlan p2 = plan_transitions(seq, db, calib);
    REQUIRE(p1.boundaries.size() == p2.boundaries.size());
    for (std::size_t i = 0; i < p1.boundaries.size(); ++i) {
        CHECK(p1.boundaries[i].duration == p2.boundaries[i].duration);
        CHECK(p1.boundaries[i].offset == p2.boundaries[i].offset);
    }
}

TEST_CASE("constant plans force one duration everywhere") {
    const auto seq = make_seq({"A", "B", "C", "D"}, {{1, 2}});
    const TransitionPlan plan = plan_constant_transitions(seq, 0.5);
    REQUIRE(plan.boundaries.size() == 3);
    for (const auto& b : plan.boundaries) {
        CHECK(b.duration == 0.5);
        CHECK(b.offset == doctest::Approx(0.7));
        CHECK(b.source == BoundarySource::constant);
    }
}

TEST_CASE("calibration files round-trip and pin the source database") {
    const SignDatabase db = load_sign_database_file(testutil::fixture("signdb_small.json"));
    const CalibrationResult result = calibrate(db);
    const std::string checksum = database_checksum(db);
    const std::string bytes = serialize_calibration(result.scale, checksum);

    std::istringstream in(bytes);
    const CalibrationFile file = load_calibration(in);
    CHECK(file.db_checksum == checksum);
    CHECK(file.scale.min_both == result.scale.min_both);
    CHECK(file.scale.max_both == result.scale.max_both);
    CHECK(file.scale.min_right == result.scale.min_right);
    CHECK(file.scale.max_right == result.scale.max_right);

    CHECK_NOTHROW(verify_calibration_checksum(file, db, false));

    SignDatabase other = db;
    other.clips.emplace("NOVO", testutil::make_clip("NOVO", {1.5, 0.5, 0}));
    CHECK_THROWS_AS(verify_calibration_checksum(file, other, false), CalibrationError);
    CHECK_NOTHROW(verify_calibration_checksum(file, other, true)); // forced
}
