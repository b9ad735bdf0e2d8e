#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace glossc {

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    friend bool operator==(const Vec3&, const Vec3&) = default;
};

// Squared Euclidean distance. Transition math works on squared magnitudes
// throughout, so the square root is never taken.
double squared_distance(const Vec3& a, const Vec3& b);

struct Keyframe {
    double t = 0.0; // clip-local seconds
    Vec3 right_hand;
    Vec3 left_hand;
    std::set<std::string> face_flags;

    friend bool operator==(const Keyframe&, const Keyframe&) = default;
};

/// One keyframed sign animation clip. Clips are loaded once, validated, and
/// never mutated afterwards; readers may share them across threads.
struct SignClip {
    std::string gloss_id;
    std::vector<Keyframe> keyframes; // non-empty, strictly increasing t
    double lead_in = 0.0;            // t of the first keyframe, always 1.0
    double active_duration = 0.0;    // last keyframe t minus first keyframe t
    bool mouth_occupied = false;     // a facial expression uses the mouth
    bool left_moves = false;         // left hand travels beyond epsilon within the clip

    const Keyframe& first_keyframe() const { return keyframes.front(); }
    const Keyframe& last_keyframe() const { return keyframes.back(); }

    friend bool operator==(const SignClip&, const SignClip&) = default;
};

struct SignDatabase {
    std::map<std::string, SignClip> clips;

    const SignClip& at(const std::string& gloss_id) const; // throws LookupError
    bool contains(const std::string& gloss_id) const;
    std::size_t size() const { return clips.size(); }

    friend bool operator==(const SignDatabase&, const SignDatabase&) = default;
};

struct LoadOptions {
    // A clip whose face flags intersect this set has its mouth occupied by a
    // phonological expression, which suppresses mouthing for that sign.
    std::set<std::string> mouth_flags = {"cheeks_puffed", "tongue_to_chin", "mouth_morpheme"};
    // Left hand counts as moving when the max pairwise squared displacement of
    // its positions across the clip exceeds this (squared skeleton units).
    double left_motion_epsilon = 1e-4;
};

// Parses and validates a sign database document (see docs/formats.md).
// Throws ParseError for malformed bytes, ValidationError for invariant
// violations (lead-in != 1.0 s, duplicate gloss, empty database, ...).
SignDatabase load_sign_database(std::istream& source, const LoadOptions& opts = {});
SignDatabase load_sign_database_file(const std::string& path, const LoadOptions& opts = {});

// Canonical serialization; load(serialize(db)) == db.
std::string serialize_sign_database(const SignDatabase& db);

// FNV-1a 64 over the canonical serialization, formatted "fnv1a64:<16 hex>".
// Calibration files carry this so a stale calibration is detected.
std::string database_checksum(const SignDatabase& db);

// The poses a transition interpolates between: the previous clip's final
// keyframe and the next clip's initial keyframe.
struct BoundaryPoses {
    Keyframe prev_last;
    Keyframe next_first;
};
BoundaryPoses boundary_poses(const SignClip& prev, const SignClip& next);

} // namespace glossc
