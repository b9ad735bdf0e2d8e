#include "glossc/compiler.hpp"

#include "json_util.hpp"

#include <utility>

namespace glossc {

namespace {

template <typename Fn>
auto stage(const char* name, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const StageError&) {
        throw;
    } catch (const Error& e) {
        throw StageError(name, e.what());
    }
}

} // namespace

Timeline compile_sentence(const GlossSequence& seq, const CompileInputs& inputs,
                          const CompileOptions& options) {
    stage("input", [&] { validate_gloss_sequence(seq); return 0; });

    TimelineMeta meta;
    meta.db_checksum = database_checksum(inputs.db);
    meta.mouthing_enabled = options.mouthing_enabled;
    meta.constant_transition = options.constant_transition;

    TransitionPlan plan;
    if (options.constant_transition) {
        plan = stage("plan", [&] {
            return plan_constant_transitions(seq, *options.constant_transition,
                                             options.transition);
        });
    } else {
        if (inputs.calibration == nullptr)
            throw StageError("calibration", "dynamic transitions need a calibration file");
        stage("calibration", [&] {
            verify_calibration_checksum(*inputs.calibration, inputs.db,
                                        options.force_calibration);
            return 0;
        });
        meta.calibration_checksum = detail::fnv1a64_hex(serialize_calibration(
            inputs.calibration->scale, inputs.calibration->db_checksum));
        plan = stage("plan", [&] {
            return plan_transitions(seq, inputs.db, inputs.calibration->scale,
                                    options.transition);
        });
    }

    const std::vector<SignWindow> windows = stage("assemble", [&] {
        return compute_sign_windows(seq, inputs.db, plan, options.transition);
    });

    std::vector<VisemeTrack> tracks;
    if (options.mouthing_enabled && seq.size() > 0) {
        if (inputs.g2p == nullptr || inputs.viseme_map == nullptr)
            throw StageError("mouthing", "mouthing needs a lexicon and a viseme map");
        tracks = stage("mouthing", [&] {
            const auto per_sign = sign_visemes(seq, *inputs.g2p, *inputs.viseme_map);
            std::vector<bool> occupied;
            occupied.reserve(seq.size());
            for (const auto& gloss : seq.glosses)
                occupied.push_back(inputs.db.at(gloss).mouth_occupied);
            return schedule_all(windows, per_sign, occupied, options.mouthing);
        });
    }

    return stage("assemble", [&] {
        return assemble(seq, inputs.db, plan, tracks, options.transition, options.mouthing,
                        std::move(meta));
    });
}

} // namespace glossc
