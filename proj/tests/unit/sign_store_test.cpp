#include "glossc/sign_store.hpp"

#include "glossc/errors.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <sstream>

using namespace glossc;

TEST_CASE("loads a valid database and derives per-clip flags") {
    const SignDatabase db = load_sign_database_file(testutil::fixture("signdb_small.json"));
    CHECK(db.size() == 8);

    const SignClip& ter = db.at("TER");
    CHECK(ter.lead_in == 1.0);
    CHECK(ter.active_duration == doctest::Approx(0.8));
    CHECK_FALSE(ter.left_moves);
    CHECK_FALSE(ter.mouth_occupied);

    const SignClip& dar = db.at("DAR");
    CHECK(dar.left_moves);
    CHECK(db.at("MELÃO").keyframes.size() == 3);
}

TEST_CASE("rejects a clip whose first keyframe is not at 1 second") {
    CHECK_THROWS_WITH_AS(load_sign_database_file(testutil::fixture("signdb_bad_leadin.json")),
                         doctest::Contains("lead_in must be 1.0"), ValidationError);
    try {
        load_sign_database_file(testutil::fixture("signdb_bad_leadin.json"));
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("EU") != std::string::npos);
    }
}

TEST_CASE("rejects an empty clip list") {
    std::istringstream in(R"({"format": "glossc-signdb", "version": 1, "clips": []})");
    CHECK_THROWS_WITH_AS(load_sign_database(in), doctest::Contains("empty database"),
                         ValidationError);
}

TEST_CASE("rejects duplicate gloss ids") {
    std::istringstream in(R"({"format": "glossc-signdb", "version": 1, "clips": [
      {"gloss": "EU", "keyframes": [{"t": 1.0, "right": [0,0,0], "left": [0,0,0]},
                                    {"t": 1.5, "right": [0,0,0], "left": [0,0,0]}]},
      {"gloss": "EU", "keyframes": [{"t": 1.0, "right": [0,0,0], "left": [0,0,0]},
                                    {"t": 1.5, "right": [0,0,0], "left": [0,0,0]}]}
    ]})");
    CHECK_THROWS_WITH_AS(load_sign_database(in), doctest::Contains("duplicate gloss_id"),
                         ValidationError);
}

TEST_CASE("rejects non-increasing keyframe times") {
    std::istringstream in(R"({"format": "glossc-signdb", "version": 1, "clips": [
      {"gloss": "EU", "keyframes": [{"t": 1.0, "right": [0,0,0], "left": [0,0,0]},
                                    {"t": 1.0, "right": [0,0,0], "left": [0,0,0]}]}
    ]})");
    CHECK_THROWS_WITH_AS(load_sign_database(in), doctest::Contains("strictly increasing"),
                         ValidationError);
}

TEST_CASE("reports malformed bytes as parse errors with a location") {
    std::istringstream in("{\"format\": \"glossc-signdb\"");
    CHECK_THROWS_AS(load_sign_database(in), ParseError);

    std::istringstream missing(R"({"format": "glossc-signdb", "version": 1, "clips": [
      {"gloss": "EU"}]})");
    CHECK_THROWS_WITH_AS(load_sign_database(missing), doctest::Contains("clips[0].keyframes"),
                         ParseError);
}

TEST_CASE("mouth flags mark clips as mouth-occupied") {
    std::istringstream in(R"({"format": "glossc-signdb", "version": 1, "clips": [
      {"gloss": "SABER", "keyframes": [
        {"t": 1.0, "right": [0,0,0], "left": [0,0,0], "flags": ["mouth_morpheme"]},
        {"t": 1.5, "right": [0,0,0], "left": [0,0,0]}]}
    ]})");
    const SignDatabase db = load_sign_database(in);
    CHECK(db.at("SABER").mouth_occupied);

    std::istringstream again(R"({"format": "glossc-signdb", "version": 1, "clips": [
      {"gloss": "SABER", "keyframes": [
        {"t": 1.0, "right": [0,0,0], "left": [0,0,0], "flags": ["mouth_morpheme"]},
        {"t": 1.5, "right": [0,0,0], "left": [0,0,0]}]}
    ]})");
    LoadOptions opts;
    opts.mouth_flags = {"cheeks_puffed"}; // morpheme flag not in the configured set
    CHECK_FALSE(load_sign_database(again, opts).at("SABER").mouth_occupied);
}

TEST_CASE("left motion flag honours the epsilon threshold") {
    auto doc = [](double x) {
        std::ostringstream s;
        s << R"({"format": "glossc-signdb", "version": 1, "clips": [
          {"gloss": "X", "keyframes": [{"t": 1.0, "right": [0,0,0], "left": [0,0,0]},
                                       {"t": 1.5, "right": [0,0,0], "left": [)"
          << x << R"(,0,0]}]}]})";
        return s.str();
    };
    std::istringstream still(doc(0.005)); // squared displacement 2.5e-5 < 1e-4
    CHECK_FALSE(load_sign_database(still).at("X").left_moves);
    std::istringstream moving(doc(0.02)); // squared displacement 4e-4 > 1e-4
    CHECK(load_sign_database(moving).at("X").left_moves);
}

TEST_CASE("boundary_poses returns last and first keyframes") {
    const SignDatabase db = load_sign_database_file(testutil::fixture("signdb_small.json"));
    const SignClip& casa = db.at("CASA"); // keyframes at 1.0, 1.5, 2.0
    const SignClip& eu = db.at("EU");

    auto poses = boundary_poses(casa, eu);
    CHECK(poses.prev_last.t == 2.0);
    CHECK(poses.next_first.t == 1.0);
    CHECK(poses.prev_last == casa.keyframes[2]);
    CHECK(poses.next_first == eu.keyframes[0]);

    // Degenerate single-keyframe clip: same keyframe both ways round.
    SignClip lone;
    lone.gloss_id = "X";
    Keyframe kf;
    kf.t = 1.0;
    lone.keyframes = {kf};
    lone.lead_in = 1.0;
    auto degenerate = boundary_poses(lone, lone);
    CHECK(degenerate.prev_last == degenerate.next_first);
    CHECK(degenerate.prev_last.t >= degenerate.next_first.t);
}

TEST_CASE("serialization round-trips the database identically") {
    const SignDatabase db = load_sign_database_file(testutil::fixture("signdb_small.json"));
    const std::string bytes = serialize_sign_database(db);
    std::istringstream in(bytes);
    const SignDatabase again = load_sign_database(in);
    CHECK(db == again);
    CHECK(serialize_sign_database(again) == bytes);
    CHECK(database_checksum(db) == database_checksum(again));
    CHECK(database_checksum(db).rfind("fnv1a64:", 0) == 0);
}

TEST_CASE("checksum changes when the database changes") {
    SignDatabase db;
    db.clips.emplace("A", testutil::make_clip("A", {0.1, 0, 0}));
    SignDatabase other = db;
    other.clips.emplace("B", testutil::make_clip("B", {0.4, 0, 0}));
    CHECK(database_checksum(db) != database_checksum(other));
}

TEST_CASE("unknown gloss lookups fail by name") {
    const SignDatabase db = load_sign_database_file(testutil::fixture("signdb_small.json"));
    CHECK_THROWS_WITH_AS(db.at("INEXISTENTE"), doctest::Contains("INEXISTENTE"), LookupError);
}
