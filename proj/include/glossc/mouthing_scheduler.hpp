#pragma once

#include "glossc/gloss_sequence.hpp"
#include "glossc/mouthing_pipeline.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace glossc {

struct MouthingConfig {
    double anticipation = 0.1;        // mouth leads the hands by this much, seconds
    double max_viseme_duration = 0.35; // cap so mouthing never drags on long signs

    void validate() const; // throws ValidationError
};

struct TimedViseme {
    Viseme viseme = Viseme::A;
    double start = 0.0;    // timeline-global seconds
    double duration = 0.0; // seconds
};

/// Mouthing events for one sign, in timeline-global seconds. Events share one
/// duration and never outlast the sign's active window.
struct VisemeTrack {
    std::size_t sign_ref = 0; // index into the timeline's sign list
    std::vector<TimedViseme> events;

    bool empty() const { return events.empty(); }
    double end() const { return events.empty() ? 0.0 : events.back().start + events.back().duration; }
};

struct SignWindow {
    double start = 0.0; // first keyframe, timeline-global
    double end = 0.0;   // last keyframe
};

// Lays the pruned visemes over a sign's playback window. Per-viseme duration
// is min(window / count, max_viseme_duration); the track starts anticipation
// seconds early, clamped to not_before (timeline zero, or the previous
// track's end so mouth shapes never fight each other). Signs whose clip
// occupies the mouth with a phonological expression get no mouthing at all.
// Throws RangeError when start >= end.
VisemeTrack schedule_mouthing(const SignWindow& window, const VisemeSequence& visemes,
                              bool mouth_occupied, const MouthingConfig& cfg,
                              double not_before = 0.0);

// Per-sign inflected word lists resolved from the sequence's alignment.
// Glosses with no aligned word get an empty list (and, downstream, no track).
std::vector<std::vector<std::string>> assign_words(const GlossSequence& seq);

// The per-sign mouthing unit: aligned words' viseme sequences concatenated,
// then pruned once so the seam collapses like any word-internal run.
std::vector<VisemeSequence> sign_visemes(const GlossSequence& seq, const Grapheme2Phoneme& g2p,
                                         const VisemeMap& map);

// Tracks for a whole sentence; empty tracks are dropped. Windows must be in
// sign order.
std::vector<VisemeTrack> schedule_all(const std::vector<SignWindow>& windows,
                                      const std::vector<VisemeSequence>& per_sign,
                                      const std::vector<bool>& mouth_occupied,
                                      const MouthingConfig& cfg);

} // namespace glossc
