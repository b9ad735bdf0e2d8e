#include "glossc/mouthing_scheduler.hpp"

#include "glossc/errors.hpp"

#include <algorithm>
#include <cmath>

namespace glossc {

void MouthingConfig::validate() const {
    if (!(anticipation >= 0.0)) throw ValidationError("mouthing config: anticipation must be >= 0");
    if (!(max_viseme_duration > 0.0))
        throw ValidationError("mouthing config: max_viseme_duration must be > 0");
}

VisemeTrack schedule_mouthing(const SignWindow& window, const VisemeSequence& visemes,
                              bool mouth_occupied, const MouthingConfig& cfg, double not_before) {
    cfg.validate();
    if (!(window.start < window.end))
        throw RangeError("sign window must satisfy start < end");

    VisemeTrack track;
    if (mouth_occupied || visemes.events.empty()) return track;

    const double span = window.end - window.start;
    const std::size_t count = visemes.events.size();
    double per_viseme = std::min(span / static_cast<double>(count), cfg.max_viseme_duration);
    // Guard the containment invariant against the last-bit rounding of
    // span / count: nudge down until count * per_viseme <= span.
    while (static_cast<double>(count) * per_viseme > span)
        per_viseme = std::nextafter(per_viseme, 0.0);

    const double start = std::max(window.start - cfg.anticipation, std::max(0.0, not_before));
    track.events.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        TimedViseme ev;
        ev.viseme = visemes.events[i].viseme;
        ev.start = start + static_cast<double>(i) * per_viseme;
        ev.duration = per_viseme;
        track.events.push_back(ev);
    }
    return track;
}

std::vector<std::vector<std::string>> assign_words(const GlossSequence& seq) {
    validate_gloss_sequence(seq);
    const std::vector<std::string> tokens = tokenize_sentence(seq.sentence);
    std::vector<std::vector<std::string>> out(seq.size());
    for (std::size_t g = 0; g < seq.size(); ++g)
        for (std::size_t w : seq.word_alignment[g]) out[g].push_back(tokens[w]);
    return out;
}

std::vector<VisemeSequence> sign_visemes(const GlossSequence& seq, const Grapheme2Phoneme& g2p,
                                         const VisemeMap& map) {
    validate_gloss_sequence(seq);
    const std::vector<VisemeSequence> per_token = sentence_visemes(seq.sentence, g2p, map);
    std::vector<VisemeSequence> out;
    out.reserve(seq.size());
    for (std::size_t g = 0; g < seq.size(); ++g) {
        std::vector<VisemeSequence> parts;
        for (std::size_t w : seq.word_alignment[g]) parts.push_back(per_token[w]);
        out.push_back(prune(concat_visemes(parts)));
    }
    return out;
}

std::vector<VisemeTrack> schedule_all(const std::vector<SignWindow>& windows,
                                      const std::vector<VisemeSequence>& per_sign,
                                      const std::vector<bool>& mouth_occupied,
                                      const MouthingConfig& cfg) {
    if (windows.size() != per_sign.size() || windows.size() != mouth_occupied.size())
        throw ValidationError("schedule_all: windows, visemes and flags must align");

    std::vector<VisemeTrack> tracks;
    double previous_end = 0.0;
    for (std::size_t i = 0; i < windows.size(); ++i) {
        VisemeTrack track =
            schedule_mouthing(windows[i], per_sign[i], mouth_occupied[i], cfg, previous_end);
        if (track.empty()) continue;
        track.sign_ref = i;
        previous_end = track.end();
        tracks.push_back(std::move(track));
    }
    return tracks;
}

} // namespace glossc
