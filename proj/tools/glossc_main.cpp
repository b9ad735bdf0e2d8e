// glossc - compiles translated gloss sequences into timed animation schedules:
// dynamic inter-sign transitions plus synchronized mouthing tracks.

#include "glossc/compiler.hpp"
#include "glossc/metrics.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace {

void write_output(const std::string& path, const std::string& bytes) {
    if (path.empty() || path == "-") {
        std::cout << bytes;
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw glossc::Error("cannot open " + path + " for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw glossc::Error("write failed: " + path);
}

struct PipelineSettings {
    glossc::TransitionConfig transition;
    glossc::MouthingConfig mouthing;
    std::vector<std::string> mouth_flags;
};

// Config file values sit between the built-in defaults and the command line.
PipelineSettings load_settings(const std::string& config_path) {
    PipelineSettings s;
    if (config_path.empty()) return s;
    std::ifstream in(config_path, std::ios::binary);
    if (!in) throw glossc::ParseError("cannot open " + config_path);
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw glossc::ParseError(std::string("config: ") + e.what());
    }
    auto number = [&](const char* key, double& target) {
        if (auto it = doc.find(key); it != doc.end()) {
            if (!it->is_number()) throw glossc::ParseError(std::string("config.") + key + ": expected number");
            target = it->get<double>();
        }
    };
    number("t_min", s.transition.t_min);
    number("t_max", s.transition.t_max);
    number("composite_duration", s.transition.composite_duration);
    number("overlap", s.transition.overlap);
    number("anticipation", s.mouthing.anticipation);
    number("max_viseme_duration", s.mouthing.max_viseme_duration);
    if (auto it = doc.find("mouth_flags"); it != doc.end()) {
        if (!it->is_array()) throw glossc::ParseError("config.mouth_flags: expected array");
        for (const auto& f : *it) s.mouth_flags.push_back(f.get<std::string>());
    }
    return s;
}

glossc::LoadOptions db_load_options(const PipelineSettings& s) {
    glossc::LoadOptions opts;
    if (!s.mouth_flags.empty())
        opts.mouth_flags = {s.mouth_flags.begin(), s.mouth_flags.end()};
    return opts;
}

int run_calibrate(const std::string& db_path, const std::string& out_path,
                  const PipelineSettings& settings) {
    const auto db = glossc::load_sign_database_file(db_path, db_load_options(settings));
    const auto result = glossc::calibrate(db);
    std::cerr << "closest pair:  " << result.closest_pair.first << " -> "
              << result.closest_pair.second << "\n"
              << "furthest pair: " << result.furthest_pair.first << " -> "
              << result.furthest_pair.second << "\n";
    write_output(out_path, glossc::serialize_calibration(result.scale, database_checksum(db)));
    return 0;
}

int run_compile(const std::string& db_path, const std::string& input_path,
                const std::string& calibration_path, const std::string& lexicon_path,
                const std::string& map_path, const std::string& out_path,
                const PipelineSettings& settings, bool no_mouthing,
                std::optional<double> constant_transition, bool force) {
    glossc::CompileOptions options;
    options.transition = settings.transition;
    options.mouthing = settings.mouthing;
    options.mouthing_enabled = !no_mouthing;
    options.constant_transition = constant_transition;
    options.force_calibration = force;

    const auto db = glossc::load_sign_database_file(db_path, db_load_options(settings));
    const auto seq = glossc::load_gloss_sequence_file(input_path);

    std::optional<glossc::CalibrationFile> calibration;
    if (!constant_transition) {
        if (calibration_path.empty())
            throw glossc::StageError("calibration",
                                     "--calibration is required unless --constant-transition is set");
        calibration = glossc::load_calibration_file(calibration_path);
    }

    std::optional<glossc::LexiconG2p> lexicon;
    glossc::RuleG2p rules;
    std::optional<glossc::ChainG2p> g2p;
    std::optional<glossc::VisemeMap> viseme_map;
    if (options.mouthing_enabled) {
        if (lexicon_path.empty() || map_path.empty())
            throw glossc::StageError("mouthing",
                                     "--lexicon and --viseme-map are required unless --no-mouthing is set");
        lexicon.emplace(glossc::LexiconG2p::load_file(lexicon_path));
        g2p.emplace(*lexicon, rules);
        viseme_map.emplace(glossc::VisemeMap::load_file(map_path));
    }

    glossc::CompileInputs inputs{db, calibration ? &*calibration : nullptr,
                                 g2p ? &*g2p : nullptr, viseme_map ? &*viseme_map : nullptr};
    const glossc::Timeline timeline = glossc::compile_sentence(seq, inputs, options);
    write_output(out_path, glossc::serialize_timeline(timeline));
    return 0;
}

int run_score(const std::string& responses_path, const std::string& synonyms_path,
              const std::string& out_path) {
    const auto records = glossc::load_responses_file(responses_path);
    glossc::SynonymTable synonyms;
    if (!synonyms_path.empty()) synonyms = glossc::SynonymTable::load_file(synonyms_path);
    const auto report = glossc::score_responses(records, synonyms);
    const std::string text = glossc::format_report(report);
    write_output(out_path, text);
    if (!out_path.empty() && out_path != "-") std::cout << text;
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"gloss sequence to animation schedule compiler"};
    app.require_subcommand(1);

    std::string db_path, input_path, calibration_path, lexicon_path, map_path;
    std::string out_path, config_path, responses_path, synonyms_path;
    bool no_mouthing = false;
    bool force = false;
    double constant_transition = 0.0;

    auto* calibrate = app.add_subcommand("calibrate", "scan a sign database for its displacement extremes");
    calibrate->add_option("--db", db_path, "sign database file")->required();
    calibrate->add_option("-o,--output", out_path, "calibration file (default: stdout)");
    calibrate->add_option("--config", config_path, "settings file overriding defaults");

    auto* compile = app.add_subcommand("compile", "compile a gloss sequence into a timeline");
    compile->add_option("--db", db_path, "sign database file")->required();
    compile->add_option("-i,--input", input_path, "sentence document")->required();
    compile->add_option("--calibration", calibration_path, "calibration file");
    compile->add_option("--lexicon", lexicon_path, "pronunciation lexicon");
    compile->add_option("--viseme-map", map_path, "phoneme-to-viseme map file");
    compile->add_option("-o,--output", out_path, "timeline file (default: stdout)");
    compile->add_option("--config", config_path, "settings file overriding defaults");
    compile->add_flag("--no-mouthing", no_mouthing, "drop the mouthing track (control condition)");
    auto* constant_opt = compile->add_option("--constant-transition", constant_transition,
                                             "force one duration for every boundary, seconds");
    compile->add_flag("--force", force, "accept a calibration whose checksum mismatches");

    auto* score = app.add_subcommand("score", "score study response records");
    score->add_option("--responses", responses_path, "response records file")->required();
    score->add_option("--synonyms", synonyms_path, "gloss synonym table");
    score->add_option("-o,--output", out_path, "report file (default: stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        const PipelineSettings settings = load_settings(config_path);
        if (calibrate->parsed()) return run_calibrate(db_path, out_path, settings);
        if (compile->parsed()) {
            std::optional<double> constant;
            if (constant_opt->count() > 0) constant = constant_transition;
            return run_compile(db_path, input_path, calibration_path, lexicon_path, map_path,
                               out_path, settings, no_mouthing, constant, force);
        }
        if (score->parsed()) return run_score(responses_path, synonyms_path, out_path);
    } catch (const glossc::StageError& e) {
        std::cerr << "error [" << e.stage << "]: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
