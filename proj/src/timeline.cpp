#include "glossc/timeline.hpp"

#include "glossc/errors.hpp"
#include "json_util.hpp"

#include <cmath>
#include <sstream>

namespace glossc {

using detail::json;

std::vector<SignWindow> compute_sign_windows(const GlossSequence& seq, const SignDatabase& db,
                                             const TransitionPlan& plan,
                                             const TransitionConfig& cfg) {
    cfg.validate();
    const std::size_t n = seq.size();
    const std::size_t expected = n > 0 ? n - 1 : 0;
    if (plan.boundaries.size() != expected)
        throw ValidationError("assembly: plan has " + std::to_string(plan.boundaries.size()) +
                              " boundaries for " + std::to_string(n) + " signs");

    std::vector<SignWindow> windows;
    windows.reserve(n);
    double cursor = cfg.t_min;
    for (std::size_t i = 0; i < n; ++i) {
        const SignClip& clip = db.at(seq.glosses[i]);
        SignWindow w;
        w.start = cursor;
        w.end = cursor + clip.active_duration;
        windows.push_back(w);
        if (i + 1 < n) {
            const Boundary& b = plan.boundaries[i];
            if (std::fabs(b.duration + b.offset - cfg.total()) > 1e-12)
                throw ValidationError("assembly: boundary " + std::to_string(i) +
                                      " violates duration + offset = " +
                                      detail::fixed6(cfg.total()));
            const double gap = b.duration - cfg.overlap;
            if (gap < 0.0)
                throw ValidationError("assembly: boundary " + std::to_string(i) + " duration " +
                                      detail::fixed6(b.duration) + " is shorter than the overlap " +
                                      detail::fixed6(cfg.overlap));
            cursor = w.end + gap;
        }
    }
    return windows;
}

Timeline assemble(const GlossSequence& seq, const SignDatabase& db, const TransitionPlan& plan,
                  const std::vector<VisemeTrack>& tracks, const TransitionConfig& transition_cfg,
                  const MouthingConfig& mouthing_cfg, TimelineMeta meta) {
    validate_gloss_sequence(seq);
    mouthing_cfg.validate();
    const std::vector<SignWindow> windows = compute_sign_windows(seq, db, plan, transition_cfg);

    Timeline timeline;
    meta.transition = transition_cfg;
    meta.mouthing = mouthing_cfg;
    timeline.meta = std::move(meta);
    timeline.transitions = plan.boundaries;

    for (std::size_t i = 0; i < seq.size(); ++i) {
        const SignClip& clip = db.at(seq.glosses[i]);
        ScheduledSign sign;
        sign.gloss_id = seq.glosses[i];
        sign.first_keyframe_at = windows[i].start;
        sign.last_keyframe_at = windows[i].end;
        sign.clip_start = windows[i].start - clip.lead_in;
        timeline.signs.push_back(std::move(sign));
    }

    for (const VisemeTrack& track : tracks) {
        if (track.empty()) continue;
        if (track.sign_ref >= timeline.signs.size())
            throw ValidationError("assembly: mouthing track references sign " +
                                  std::to_string(track.sign_ref) + " of " +
                                  std::to_string(timeline.signs.size()));
        const SignWindow& window = windows[track.sign_ref];
        const double earliest = std::max(0.0, window.start - mouthing_cfg.anticipation);
        double previous_end = earliest;
        for (const TimedViseme& ev : track.events) {
            if (ev.start < earliest || ev.start + 1e-12 < previous_end || ev.duration <= 0.0 ||
                ev.start + ev.duration > window.end)
                throw ValidationError("assembly: mouthing event escapes the window of sign " +
                                      std::to_string(track.sign_ref));
            previous_end = ev.start + ev.duration;
        }
        timeline.mouthing.push_back(track);
    }
    return timeline;
}

// ---------------------------------------------------------------------------
// Serialization. The writer is hand-rolled so output bytes are canonical:
// fixed field order, six-decimal seconds, two-space indent.
// ---------------------------------------------------------------------------

namespace {

std::string escape_json(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    static const char* hex = "0123456789abcdef";
                    out += "\\u00";
                    out += hex[(c >> 4) & 0xF];
                    out += hex[c & 0xF];
                } else {
                    out += c;
                }
        }
    }
    return out;
}

} // namespace

std::string serialize_timeline(const Timeline& t) {
    using detail::fixed6;
    std::ostringstream out;
    out << "{\n";
    out << "  \"format\": \"glossc-timeline\",\n";
    out << "  \"version\": 1,\n";
    out << "  \"meta\": {\n";
    out << "    \"transition_config\": {\"t_min\": " << fixed6(t.meta.transition.t_min)
        << ", \"t_max\": " << fixed6(t.meta.transition.t_max)
        << ", \"composite_duration\": " << fixed6(t.meta.transition.composite_duration)
        << ", \"overlap\": " << fixed6(t.meta.transition.overlap) << "},\n";
    out << "    \"mouthing_config\": {\"anticipation\": " << fixed6(t.meta.mouthing.anticipation)
        << ", \"max_viseme_duration\": " << fixed6(t.meta.mouthing.max_viseme_duration) << "},\n";
    out << "    \"db_checksum\": \"" << escape_json(t.meta.db_checksum) << "\",\n";
    out << "    \"calibration_checksum\": \"" << escape_json(t.meta.calibration_checksum)
        << "\",\n";
    out << "    \"constant_transition\": "
        << (t.meta.constant_transition ? fixed6(*t.meta.constant_transition) : "null") << ",\n";
    out << "    \"mouthing_enabled\": " << (t.meta.mouthing_enabled ? "true" : "false") << "\n";
    out << "  },\n";

    out << "  \"signs\": [";
    for (std::size_t i = 0; i < t.signs.size(); ++i) {
        const ScheduledSign& s = t.signs[i];
        out << (i == 0 ? "\n" : ",\n");
        out << "    {\"gloss\": \"" << escape_json(s.gloss_id)
            << "\", \"clip_start\": " << fixed6(s.clip_start)
            << ", \"first_keyframe_at\": " << fixed6(s.first_keyframe_at)
            << ", \"last_keyframe_at\": " << fixed6(s.last_keyframe_at) << "}";
    }
    out << (t.signs.empty() ? "],\n" : "\n  ],\n");

    out << "  \"transitions\": [";
    for (std::size_t i = 0; i < t.transitions.size(); ++i) {
        const Boundary& b = t.transitions[i];
        out << (i == 0 ? "\n" : ",\n");
        out << "    {\"duration\": " << fixed6(b.duration) << ", \"offset\": " << fixed6(b.offset)
            << ", \"source\": \"" << to_string(b.source) << "\"}";
    }
    out << (t.transitions.empty() ? "],\n" : "\n  ],\n");

    out << "  \"mouthing\": [";
    for (std::size_t i = 0; i < t.mouthing.size(); ++i) {
        const VisemeTrack& track = t.mouthing[i];
        out << (i == 0 ? "\n" : ",\n");
        out << "    {\"sign\": " << track.sign_ref << ", \"events\": [";
        for (std::size_t e = 0; e < track.events.size(); ++e) {
            const TimedViseme& ev = track.events[e];
            out << (e == 0 ? "\n" : ",\n");
            out << "      {\"viseme\": \"" << to_char(ev.viseme)
                << "\", \"start\": " << fixed6(ev.start)
                << ", \"duration\": " << fixed6(ev.duration) << "}";
        }
        out << (track.events.empty() ? "]}" : "\n    ]}");
    }
    out << (t.mouthing.empty() ? "]\n" : "\n  ]\n");
    out << "}\n";
    return out.str();
}

Timeline deserialize_timeline(std::istream& source) {
    const json doc = detail::parse_json(source, "timeline");
    const std::string format = detail::string_at(detail::field(doc, "format", "$"), "$.format");
    if (format != "glossc-timeline")
        throw ParseError("timeline: unexpected format \"" + format + "\"");
    const auto version = detail::integer_at(detail::field(doc, "version", "$"), "$.version");
    if (version != 1)
        throw ParseError("timeline: unsupported version " + std::to_string(version));

    Timeline t;
    const json& meta = detail::field(doc, "meta", "$");
    const json& tc = detail::field(meta, "transition_config", "meta");
    t.meta.transition.t_min = detail::number_at(detail::field(tc, "t_min", "meta.transition_config"),
                                                "meta.transition_config.t_min");
    t.meta.transition.t_max = detail::number_at(detail::field(tc, "t_max", "meta.transition_config"),
                                                "meta.transition_config.t_max");
    t.meta.transition.composite_duration =
        detail::number_at(detail::field(tc, "composite_duration", "meta.transition_config"),
                          "meta.transition_config.composite_duration");
    t.meta.transition.overlap = detail::number_at(
        detail::field(tc, "overlap", "meta.transition_config"), "meta.transition_config.overlap");
    const json& mc = detail::field(meta, "mouthing_config", "meta");
    t.meta.mouthing.anticipation =
        detail::number_at(detail::field(mc, "anticipation", "meta.mouthing_config"),
                          "meta.mouthing_config.anticipation");
    t.meta.mouthing.max_viseme_duration =
        detail::number_at(detail::field(mc, "max_viseme_duration", "meta.mouthing_config"),
                          "meta.mouthing_config.max_viseme_duration");
    t.meta.db_checksum =
        detail::string_at(detail::field(meta, "db_checksum", "meta"), "meta.db_checksum");
    t.meta.calibration_checksum = detail::string_at(
        detail::field(meta, "calibration_checksum", "meta"), "meta.calibration_checksum");
    const json& ct = detail::field(meta, "constant_transition", "meta");
    if (!ct.is_null()) t.meta.constant_transition = detail::number_at(ct, "meta.constant_transition");
    const json& me = detail::field(meta, "mouthing_enabled", "meta");
    if (!me.is_boolean()) throw ParseError("meta.mouthing_enabled: expected boolean");
    t.meta.mouthing_enabled = me.get<bool>();

    const json& jsigns = detail::array_at(detail::field(doc, "signs", "$"), "$.signs");
    for (std::size_t i = 0; i < jsigns.size(); ++i) {
        const std::string path = "signs[" + std::to_string(i) + "]";
        ScheduledSign s;
        s.gloss_id = detail::string_at(detail::field(jsigns[i], "gloss", path), path + ".gloss");
        s.clip_start =
            detail::number_at(detail::field(jsigns[i], "clip_start", path), path + ".clip_start");
        s.first_keyframe_at = detail::number_at(
            detail::field(jsigns[i], "first_keyframe_at", path), path + ".first_keyframe_at");
        s.last_keyframe_at = detail::number_at(detail::field(jsigns[i], "last_keyframe_at", path),
                                               path + ".last_keyframe_at");
        t.signs.push_back(std::move(s));
    }

    const json& jtrans = detail::array_at(detail::field(doc, "transitions", "$"), "$.transitions");
    for (std::size_t i = 0; i < jtrans.size(); ++i) {
        const std::string path = "transitions[" + std::to_string(i) + "]";
        Boundary b;
        b.duration =
            detail::number_at(detail::field(jtrans[i], "duration", path), path + ".duration");
        b.offset = detail::number_at(detail::field(jtrans[i], "offset", path), path + ".offset");
        b.source = boundary_source_from_string(
            detail::string_at(detail::field(jtrans[i], "source", path), path + ".source"));
        t.transitions.push_back(b);
    }

    const json& jmouth = detail::array_at(detail::field(doc, "mouthing", "$"), "$.mouthing");
    for (std::size_t i = 0; i < jmouth.size(); ++i) {
        const std::string path = "mouthing[" + std::to_string(i) + "]";
        VisemeTrack track;
        const auto sign = detail::integer_at(detail::field(jmouth[i], "sign", path), path + ".sign");
        if (sign < 0) throw ParseError(path + ".sign: negative index");
        track.sign_ref = static_cast<std::size_t>(sign);
        const json& jevents =
            detail::array_at(detail::field(jmouth[i], "events", path), path + ".events");
        for (std::size_t e = 0; e < jevents.size(); ++e) {
            const std::string epath = path + ".events[" + std::to_string(e) + "]";
            TimedViseme ev;
            const std::string vis =
                detail::string_at(detail::field(jevents[e], "viseme", epath), epath + ".viseme");
            if (vis.size() != 1) throw ParseError(epath + ".viseme: expected one class letter");
            ev.viseme = viseme_from_char(vis[0]);
            ev.start = detail::number_at(detail::field(jevents[e], "start", epath), epath + ".start");
            ev.duration = detail::number_at(detail::field(jevents[e], "duration", epath),
                                            epath + ".duration");
            track.events.push_back(ev);
        }
        t.mouthing.push_back(std::move(track));
    }
    return t;
}

Timeline deserialize_timeline(const std::string& bytes) {
    std::istringstream in(bytes);
    return deserialize_timeline(in);
}

} // namespace glossc
