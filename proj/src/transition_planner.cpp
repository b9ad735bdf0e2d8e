#include "glossc/transition_planner.hpp"

#include "glossc/errors.hpp"
#include "json_util.hpp"

#include <algorithm>
#include <istream>
#include <limits>

namespace glossc {

using detail::json;

void TransitionConfig::validate() const {
    if (!(0.0 < t_min && t_min < t_max))
        throw ValidationError("transition config: need 0 < t_min < t_max");
    if (!(0.0 < composite_duration && composite_duration <= t_min))
        throw ValidationError("transition config: need 0 < composite_duration <= t_min");
    if (!(0.0 <= overlap && overlap < 1.0))
        throw ValidationError("transition config: need 0 <= overlap < 1");
}

const char* to_string(BoundarySource s) {
    switch (s) {
        case BoundarySource::dynamic: return "dynamic";
        case BoundarySource::composite: return "composite";
        case BoundarySource::constant: return "constant";
    }
    return "unknown";
}

BoundarySource boundary_source_from_string(const std::string& s) {
    if (s == "dynamic") return BoundarySource::dynamic;
    if (s == "composite") return BoundarySource::composite;
    if (s == "constant") return BoundarySource::constant;
    throw ParseError("unknown boundary source \"" + s + "\"");
}

HandDisplacement hand_displacement(const SignClip& prev, const SignClip& next) {
    const auto poses = boundary_poses(prev, next);
    HandDisplacement d;
    d.d_right = squared_distance(poses.next_first.right_hand, poses.prev_last.right_hand);
    d.d_left = squared_distance(poses.next_first.left_hand, poses.prev_last.left_hand);
    d.left_active = prev.left_moves || next.left_moves;
    return d;
}

CalibrationResult calibrate(const SignDatabase& db) {
    if (db.size() < 2)
        throw CalibrationError("calibration needs at least 2 clips, got " +
                               std::to_string(db.size()));

    struct Extreme {
        double value;
        std::pair<std::string, std::string> pair;
    };
    constexpr double inf = std::numeric_limits<double>::infinity();
    Extreme min_both{inf, {}}, max_both{-inf, {}};
    Extreme min_right{inf, {}}, max_right{-inf, {}};

    for (const auto& [prev_id, prev] : db.clips) {
        for (const auto& [next_id, next] : db.clips) {
            if (prev_id == next_id) continue;
            const HandDisplacement d = hand_displacement(prev, next);
            const double value = d.left_active ? d.d_right + d.d_left : d.d_right;
            Extreme& lo = d.left_active ? min_both : min_right;
            Extreme& hi = d.left_active ? max_both : max_right;
            if (value < lo.value) lo = {value, {prev_id, next_id}};
            if (value > hi.value) hi = {value, {prev_id, next_id}};
        }
    }

    const bool has_both = min_both.value <= max_both.value;
    const bool has_right = min_right.value <= max_right.value;
    if (has_both && !has_right) {
        min_right = min_both;
        max_right = max_both;
    } else if (has_right && !has_both) {
        min_both = min_right;
        max_both = max_right;
    }

    if (!(min_both.value < max_both.value))
        throw CalibrationError("degenerate scale: both-hands displacements are all " +
                               detail::fixed6(min_both.value));
    if (!(min_right.value < max_right.value))
        throw CalibrationError("degenerate scale: right-hand displacements are all " +
                               detail::fixed6(min_right.value));

    CalibrationResult result;
    result.scale =
        ScaleCalibration{min_both.value, max_both.value, min_right.value, max_right.value};
    const Extreme& overall_min = min_both.value <= min_right.value ? min_both : min_right;
    const Extreme& overall_max = max_both.value >= max_right.value ? max_both : max_right;
    result.closest_pair = overall_min.pair;
    result.furthest_pair = overall_max.pair;
    return result;
}

double displacement_to_fraction(const HandDisplacement& disp, const ScaleCalibration& calib) {
    double value, lo, hi;
    if (disp.left_active) {
        value = disp.d_right + disp.d_left;
        lo = calib.min_both;
        hi = calib.max_both;
    } else {
        value = disp.d_right;
        lo = calib.min_right;
        hi = calib.max_right;
    }
    const double f = (value - lo) / (hi - lo);
    return std::clamp(f, 0.0, 1.0);
}

double fraction_to_duration(double fraction, const TransitionConfig& cfg) {
    return cfg.t_min + fraction * (cfg.t_max - cfg.t_min);
}

double offset_for(double duration, const TransitionConfig& cfg) {
    if (!(duration > 0.0) || duration > cfg.total())
        throw RangeError("transition duration " + detail::fixed6(duration) +
                         " cannot be paired with an offset (total " + detail::fixed6(cfg.total()) +
                         ")");
    return cfg.total() - duration;
}

namespace {

// Boundary i sits between glosses i and i+1; it is inside span [first, last]
// when both endpoints are members.
bool inside_composite(std::size_t boundary,
                      const std::vector<std::pair<std::size_t, std::size_t>>& spans) {
    for (const auto& [first, last] : spans)
        if (boundary >= first && boundary + 1 <= last) return true;
    return false;
}

} // namespace

TransitionPlan plan_transitions(const GlossSequence& seq, const SignDatabase& db,
                                const ScaleCalibration& calib, const TransitionConfig& cfg) {
    cfg.validate();
    validate_gloss_sequence(seq);
    for (const auto& gloss : seq.glosses)
        if (!db.contains(gloss)) throw LookupError("unknown gloss \"" + gloss + "\"");

    TransitionPlan plan;
    if (seq.size() < 2) return plan;
    plan.boundaries.reserve(seq.size() - 1);
    for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
        Boundary b;
        if (inside_composite(i, seq.composite_spans)) {
            b.duration = cfg.composite_duration;
            b.source = BoundarySource::composite;
        } else {
            const HandDisplacement disp =
                hand_displacement(db.at(seq.glosses[i]), db.at(seq.glosses[i + 1]));
            b.duration = fraction_to_duration(displacement_to_fraction(disp, calib), cfg);
            b.source = BoundarySource::dynamic;
        }
        b.offset = offset_for(b.duration, cfg);
        plan.boundaries.push_back(b);
    }
    return plan;
}

TransitionPlan plan_constant_transitions(const GlossSequence& seq, double duration,
                                         const TransitionConfig& cfg) {
    cfg.validate();
    validate_gloss_sequence(seq);
    TransitionPlan plan;
    if (seq.size() < 2) return plan;
    const double offset = offset_for(duration, cfg);
    plan.boundaries.assign(seq.size() - 1, Boundary{duration, offset, BoundarySource::constant});
    return plan;
}

std::string serialize_calibration(const ScaleCalibration& calib, const std::string& db_checksum) {
    json doc;
    doc["format"] = "glossc-calibration";
    doc["version"] = 1;
    doc["db_checksum"] = db_checksum;
    doc["min_both"] = calib.min_both;
    doc["max_both"] = calib.max_both;
    doc["min_right"] = calib.min_right;
    doc["max_right"] = calib.max_right;
    return doc.dump(2) + "\n";
}

CalibrationFile load_calibration(std::istream& source) {
    const json doc = detail::parse_json(source, "calibration");
    const std::string format = detail::string_at(detail::field(doc, "format", "$"), "$.format");
    if (format != "glossc-calibration")
        throw ParseError("calibration: unexpected format \"" + format + "\"");
    const auto version = detail::integer_at(detail::field(doc, "version", "$"), "$.version");
    if (version != 1)
        throw ParseError("calibration: unsupported version " + std::to_string(version));

    CalibrationFile file;
    file.db_checksum = detail::string_at(detail::field(doc, "db_checksum", "$"), "$.db_checksum");
    file.scale.min_both = detail::number_at(detail::field(doc, "min_both", "$"), "$.min_both");
    file.scale.max_both = detail::number_at(detail::field(doc, "max_both", "$"), "$.max_both");
    file.scale.min_right = detail::number_at(detail::field(doc, "min_right", "$"), "$.min_right");
    file.scale.max_right = detail::number_at(detail::field(doc, "max_right", "$"), "$.max_right");
    if (!(file.scale.min_both < file.scale.max_both) ||
        !(file.scale.min_right < file.scale.max_right))
        throw ValidationError("calibration: scale extremes must satisfy min < max");
    return file;
}

CalibrationFile load_calibration_file(const std::string& path) {
    auto in = detail::open_input(path);
    return load_calibration(in);
}

void verify_calibration_checksum(const CalibrationFile& file, const SignDatabase& db, bool force) {
    const std::string actual = database_checksum(db);
    if (file.db_checksum != actual && !force)
        throw CalibrationError("calibration was measured on a different database (file " +
                               file.db_checksum + ", database " + actual +
                               "); recalibrate or pass --force");
}

} // namespace glossc
