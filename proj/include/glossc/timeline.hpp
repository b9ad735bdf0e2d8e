#pragma once

#include "glossc/gloss_sequence.hpp"
#include "glossc/mouthing_scheduler.hpp"
#include "glossc/sign_store.hpp"
#include "glossc/transition_planner.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace glossc {

struct ScheduledSign {
    std::string gloss_id;
    double clip_start = 0.0;       // where clip-local 0 sits on the timeline (may be < 0:
                                   // the lead-in before the first keyframe is skipped)
    double first_keyframe_at = 0.0;
    double last_keyframe_at = 0.0;
};

struct TimelineMeta {
    TransitionConfig transition;
    MouthingConfig mouthing;
    std::string db_checksum;
    std::string calibration_checksum; // empty when no calibration was used
    std::optional<double> constant_transition;
    bool mouthing_enabled = true;
};

/// The compiled schedule: sign playback windows, the transition at each
/// boundary both as the abstract keyframe gap (gap = duration - overlap) and
/// as the raw (duration, offset) pair an overlap-blending engine consumes,
/// plus the mouthing tracks.
struct Timeline {
    TimelineMeta meta;
    std::vector<ScheduledSign> signs;
    std::vector<Boundary> transitions;
    std::vector<VisemeTrack> mouthing;

    double total_length() const { return signs.empty() ? 0.0 : signs.back().last_keyframe_at; }
};

// Global playback windows implied by a plan: the first sign's first keyframe
// lands at t_min (no transition precedes it, so the stored 1 s lead-in is
// compressed), and each later sign starts its window one gap after the
// previous window ends.
std::vector<SignWindow> compute_sign_windows(const GlossSequence& seq, const SignDatabase& db,
                                             const TransitionPlan& plan,
                                             const TransitionConfig& cfg);

// Fuses windows, plan, and mouthing tracks, re-validating every cross-module
// invariant (plan length, offset identity, non-negative gaps, track
// containment). Throws ValidationError on any inconsistency.
Timeline assemble(const GlossSequence& seq, const SignDatabase& db, const TransitionPlan& plan,
                  const std::vector<VisemeTrack>& tracks, const TransitionConfig& transition_cfg,
                  const MouthingConfig& mouthing_cfg, TimelineMeta meta = {});

// Canonical text form: fixed field order, seconds with six decimal places.
// serialize(deserialize(serialize(t))) == serialize(t).
std::string serialize_timeline(const Timeline& timeline);
Timeline deserialize_timeline(std::istream& source);
Timeline deserialize_timeline(const std::string& bytes);

} // namespace glossc
