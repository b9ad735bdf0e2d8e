#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace glossc {

/// The translated sentence as it arrives from the text-to-gloss stage:
/// ordered gloss ids, the inflected source sentence, a per-gloss alignment
/// into the sentence's words, composite-utterance spans, and negation marks.
struct GlossSequence {
    std::string sentence; // full inflected Portuguese sentence
    std::vector<std::string> glosses;
    // Per gloss: indices into the sentence's whitespace tokens. Mouthing uses
    // the inflected words, never the citation-form gloss labels.
    std::vector<std::vector<std::size_t>> word_alignment;
    // Inclusive gloss index ranges [first, last], each spanning >= 2 glosses.
    std::vector<std::pair<std::size_t, std::size_t>> composite_spans;
    std::vector<bool> negation_marks;

    std::size_t size() const { return glosses.size(); }
};

// Whitespace tokenization with edge punctuation stripped and letters
// lowercased (UTF-8 aware for the Portuguese accented range).
std::vector<std::string> tokenize_sentence(const std::string& sentence);

// Lowercase ASCII letters plus the Latin-1 accented letters Portuguese uses;
// diacritics are preserved.
std::string utf8_lowercase(const std::string& text);

// Parses a sentence document (see docs/formats.md) and validates alignment
// bounds, span bounds, span disjointness, and negation indices.
GlossSequence load_gloss_sequence(std::istream& source);
GlossSequence load_gloss_sequence_file(const std::string& path);

// Structural validation shared by the loader and by callers that build
// sequences in memory. Throws ValidationError.
void validate_gloss_sequence(const GlossSequence& seq);

} // namespace glossc
