#pragma once

#include "glossc/errors.hpp"
#include "glossc/gloss_sequence.hpp"
#include "glossc/mouthing_pipeline.hpp"
#include "glossc/mouthing_scheduler.hpp"
#include "glossc/sign_store.hpp"
#include "glossc/timeline.hpp"
#include "glossc/transition_planner.hpp"

#include <optional>
#include <string>

namespace glossc {

/// An Error that remembers which pipeline stage raised it, so the command
/// line can report "error [plan]: ..." and exit nonzero.
struct StageError : Error {
    StageError(std::string stage_name, const std::string& message)
        : Error(message), stage(std::move(stage_name)) {}
    std::string stage;
};

struct CompileOptions {
    TransitionConfig transition;
    MouthingConfig mouthing;
    bool mouthing_enabled = true;                  // --no-mouthing clears this
    std::optional<double> constant_transition;     // --constant-transition <seconds>
    bool force_calibration = false;                // accept a checksum mismatch
};

struct CompileInputs {
    const SignDatabase& db;
    const CalibrationFile* calibration = nullptr; // unused in constant mode
    const Grapheme2Phoneme* g2p = nullptr;        // unused with mouthing disabled
    const VisemeMap* viseme_map = nullptr;        // likewise
};

// The whole pipeline for one sentence: transition planning, mouthing, and
// assembly. Throws StageError naming the failed stage.
Timeline compile_sentence(const GlossSequence& seq, const CompileInputs& inputs,
                          const CompileOptions& options);

} // namespace glossc
