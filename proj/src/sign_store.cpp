#include "glossc/sign_store.hpp"

#include "glossc/errors.hpp"
#include "json_util.hpp"

#include <cmath>
#include <fstream>
#include <istream>

namespace glossc {

using detail::json;

double squared_distance(const Vec3& a, const Vec3& b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    const double dz = a.z - b.z;
    return dx * dx + dy * dy + dz * dz;
}

const SignClip& SignDatabase::at(const std::string& gloss_id) const {
    auto it = clips.find(gloss_id);
    if (it == clips.end()) throw LookupError("unknown gloss \"" + gloss_id + "\"");
    return it->second;
}

bool SignDatabase::contains(const std::string& gloss_id) const {
    return clips.find(gloss_id) != clips.end();
}

namespace {

constexpr double kLeadIn = 1.0;

Vec3 parse_vec3(const json& v, const std::string& path) {
    const json& arr = detail::array_at(v, path);
    if (arr.size() != 3) throw ParseError(path + ": expected 3 components");
    Vec3 out;
    out.x = detail::number_at(arr[0], path + "[0]");
    out.y = detail::number_at(arr[1], path + "[1]");
    out.z = detail::number_at(arr[2], path + "[2]");
    return out;
}

void require_finite(const Vec3& v, const std::string& path) {
    if (!std::isfinite(v.x) || !std::isfinite(v.y) || !std::isfinite(v.z))
        throw ValidationError(path + ": position must be finite");
}

bool left_hand_moves(const SignClip& clip, double epsilon) {
    // Max pairwise squared displacement of left-hand positions; keyframe
    // counts are small, so the quadratic scan is fine.
    for (std::size_t i = 0; i < clip.keyframes.size(); ++i)
        for (std::size_t j = i + 1; j < clip.keyframes.size(); ++j)
            if (squared_distance(clip.keyframes[i].left_hand, clip.keyframes[j].left_hand) > epsilon)
                return true;
    return false;
}

SignClip parse_clip(const json& jclip, std::size_t index, const LoadOptions& opts) {
    const std::string path = "clips[" + std::to_string(index) + "]";
    SignClip clip;
    clip.gloss_id = detail::string_at(detail::field(jclip, "gloss", path), path + ".gloss");
    if (clip.gloss_id.empty()) throw ValidationError(path + ".gloss: empty gloss id");

    const json& jkfs = detail::array_at(detail::field(jclip, "keyframes", path), path + ".keyframes");
    if (jkfs.empty())
        throw ValidationError("gloss \"" + clip.gloss_id + "\": keyframes must be non-empty");

    for (std::size_t k = 0; k < jkfs.size(); ++k) {
        const std::string kpath = path + ".keyframes[" + std::to_string(k) + "]";
        Keyframe kf;
        kf.t = detail::number_at(detail::field(jkfs[k], "t", kpath), kpath + ".t");
        if (!std::isfinite(kf.t) || kf.t < 0.0)
            throw ValidationError("gloss \"" + clip.gloss_id + "\": keyframe time must be >= 0");
        kf.right_hand = parse_vec3(detail::field(jkfs[k], "right", kpath), kpath + ".right");
        kf.left_hand = parse_vec3(detail::field(jkfs[k], "left", kpath), kpath + ".left");
        require_finite(kf.right_hand, kpath + ".right");
        require_finite(kf.left_hand, kpath + ".left");
        if (auto it = jkfs[k].find("flags"); it != jkfs[k].end()) {
            for (const auto& f : detail::array_at(*it, kpath + ".flags"))
                kf.face_flags.insert(detail::string_at(f, kpath + ".flags[]"));
        }
        if (!clip.keyframes.empty() && kf.t <= clip.keyframes.back().t)
            throw ValidationError("gloss \"" + clip.gloss_id +
                                  "\": keyframe times must be strictly increasing");
        clip.keyframes.push_back(std::move(kf));
    }

    clip.lead_in = clip.keyframes.front().t;
    if (clip.lead_in != kLeadIn)
        throw ValidationError("gloss \"" + clip.gloss_id + "\": lead_in must be 1.0 (got " +
                              detail::fixed6(clip.lead_in) + ")");
    clip.active_duration = clip.keyframes.back().t - clip.keyframes.front().t;
    if (!(clip.active_duration > 0.0))
        throw ValidationError("gloss \"" + clip.gloss_id + "\": active_duration must be > 0");

    for (const auto& kf : clip.keyframes)
        for (const auto& flag : kf.face_flags)
            if (opts.mouth_flags.count(flag)) clip.mouth_occupied = true;
    clip.left_moves = left_hand_moves(clip, opts.left_motion_epsilon);
    return clip;
}

} // namespace

SignDatabase load_sign_database(std::istream& source, const LoadOptions& opts) {
    const json doc = detail::parse_json(source, "sign database");
    const std::string format =
        detail::string_at(detail::field(doc, "format", "$"), "$.format");
    if (format != "glossc-signdb")
        throw ParseError("sign database: unexpected format \"" + format + "\"");
    const auto version = detail::integer_at(detail::field(doc, "version", "$"), "$.version");
    if (version != 1)
        throw ParseError("sign database: unsupported version " + std::to_string(version));

    const json& jclips = detail::array_at(detail::field(doc, "clips", "$"), "$.clips");
    if (jclips.empty()) throw ValidationError("empty database");

    SignDatabase db;
    for (std::size_t i = 0; i < jclips.size(); ++i) {
        SignClip clip = parse_clip(jclips[i], i, opts);
        auto [it, inserted] = db.clips.emplace(clip.gloss_id, std::move(clip));
        if (!inserted)
            throw ValidationError("duplicate gloss_id \"" + it->first + "\"");
    }
    return db;
}

SignDatabase load_sign_database_file(const std::string& path, const LoadOptions& opts) {
    auto in = detail::open_input(path);
    return load_sign_database(in, opts);
}

std::string serialize_sign_database(const SignDatabase& db) {
    json doc;
    doc["format"] = "glossc-signdb";
    doc["version"] = 1;
    json jclips = json::array();
    for (const auto& [gloss, clip] : db.clips) {
        json jclip;
        jclip["gloss"] = gloss;
        json jkfs = json::array();
        for (const auto& kf : clip.keyframes) {
            json jkf;
            jkf["t"] = kf.t;
            jkf["right"] = {kf.right_hand.x, kf.right_hand.y, kf.right_hand.z};
            jkf["left"] = {kf.left_hand.x, kf.left_hand.y, kf.left_hand.z};
            jkf["flags"] = json::array();
            for (const auto& f : kf.face_flags) jkf["flags"].push_back(f);
            jkfs.push_back(std::move(jkf));
        }
        jclip["keyframes"] = std::move(jkfs);
        jclips.push_back(std::move(jclip));
    }
    doc["clips"] = std::move(jclips);
    return doc.dump(2) + "\n";
}

std::string database_checksum(const SignDatabase& db) {
    return detail::fnv1a64_hex(serialize_sign_database(db));
}

BoundaryPoses boundary_poses(const SignClip& prev, const SignClip& next) {
    return BoundaryPoses{prev.last_keyframe(), next.first_keyframe()};
}

} // namespace glossc
