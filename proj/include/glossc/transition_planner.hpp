#pragma once

#include "glossc/gloss_sequence.hpp"
#include "glossc/sign_store.hpp"

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace glossc {

/// Squared hand displacement across one sign boundary: how far each hand has
/// to travel from the previous sign's final pose to the next sign's initial
/// pose. Magnitudes stay squared end to end.
struct HandDisplacement {
    double d_right = 0.0; // squared skeleton units
    double d_left = 0.0;
    bool left_active = false; // either clip's left hand moves
};

/// Displacement extremes measured over a sign database. Boundaries where the
/// left hand participates are normalized against the both-hands scale, the
/// rest against the right-hand-only scale.
struct ScaleCalibration {
    double min_both = 0.0;
    double max_both = 0.0;
    double min_right = 0.0;
    double max_right = 0.0;
};

/// Calibration plus the extremal pairs that produced it, for reporting.
struct CalibrationResult {
    ScaleCalibration scale;
    std::pair<std::string, std::string> closest_pair;  // overall minimum, (prev, next)
    std::pair<std::string, std::string> furthest_pair; // overall maximum
};

struct TransitionConfig {
    double t_min = 0.3;              // shortest dynamic transition, seconds
    double t_max = 1.1;              // longest dynamic transition, seconds
    double composite_duration = 0.2; // inside composite utterances
    double overlap = 0.2;            // clip overlap; duration + offset = 1.0 + overlap

    double total() const { return 1.0 + overlap; }
    void validate() const; // throws ValidationError
};

enum class BoundarySource { dynamic, composite, constant };

const char* to_string(BoundarySource s);
BoundarySource boundary_source_from_string(const std::string& s);

struct Boundary {
    double duration = 0.0; // seconds
    double offset = 0.0;   // seconds; duration + offset = 1.0 + overlap
    BoundarySource source = BoundarySource::dynamic;
};

struct TransitionPlan {
    std::vector<Boundary> boundaries; // one per adjacent gloss pair
};

// Squared displacement of each hand between prev's last and next's first
// keyframe. left_active follows the per-clip motion flags.
HandDisplacement hand_displacement(const SignClip& prev, const SignClip& next);

// Exhaustive scan over all ordered pairs of distinct clips. Throws
// CalibrationError when fewer than two clips exist or a populated scale
// degenerates to a single value.
CalibrationResult calibrate(const SignDatabase& db);

// Affine position of a displacement within its scale, clamped to [0, 1].
// New sign pairs may fall outside the calibration extremes.
double displacement_to_fraction(const HandDisplacement& disp, const ScaleCalibration& calib);

// Linear interpolation between the duration bounds.
double fraction_to_duration(double fraction, const TransitionConfig& cfg);

// Scheduling offset paired with a transition: (1.0 + overlap) - duration.
// Throws RangeError when the duration cannot be paired.
double offset_for(double duration, const TransitionConfig& cfg);

// One boundary per adjacent pair: composite spans get the fixed composite
// duration, everything else the displacement-driven one.
TransitionPlan plan_transitions(const GlossSequence& seq, const SignDatabase& db,
                                const ScaleCalibration& calib, const TransitionConfig& cfg = {});

// Every boundary forced to one duration (the study's control condition).
TransitionPlan plan_constant_transitions(const GlossSequence& seq, double duration,
                                         const TransitionConfig& cfg = {});

// Calibration file round-trip (see docs/formats.md). The checksum ties a
// calibration to the database it was measured on.
std::string serialize_calibration(const ScaleCalibration& calib, const std::string& db_checksum);

struct CalibrationFile {
    ScaleCalibration scale;
    std::string db_checksum;
};
CalibrationFile load_calibration(std::istream& source);
CalibrationFile load_calibration_file(const std::string& path);

// Throws CalibrationError when the checksum does not match the database,
// unless force is set.
void verify_calibration_checksum(const CalibrationFile& file, const SignDatabase& db, bool force);

} // namespace glossc
