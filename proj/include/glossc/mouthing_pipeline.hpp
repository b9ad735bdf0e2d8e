#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace glossc {

// ---------------------------------------------------------------------------
// Phoneme inventory
//
// The 33 European Portuguese phonemes: 9 oral vowels, 5 nasal vowels and 19
// consonants. Each has a fixed ASCII code (SAMPA-style) used by every file
// format and by all downstream stages. Nasal vowels are written with the
// combining tilde (U+0303).
// ---------------------------------------------------------------------------

struct PhonemeInfo {
    std::string ipa;  // UTF-8 IPA symbol
    std::string code; // ASCII code
    bool consonant = false;
};

const std::vector<PhonemeInfo>& phoneme_inventory();
bool is_inventory_ipa(const std::string& ipa);
bool is_inventory_code(const std::string& code);
bool is_vowel_code(const std::string& code);

// Folds precomposed nasal vowels (ĩ ẽ õ ũ) onto the combining-tilde spelling
// the inventory uses; other symbols pass through.
std::string canonical_ipa(const std::string& ipa);

// ---------------------------------------------------------------------------
// Step 1: grapheme-to-phoneme
// ---------------------------------------------------------------------------

/// Pluggable G2P resource. Returns the word's IPA symbols, or nothing when
/// the word cannot be transcribed by this source.
class Grapheme2Phoneme {
public:
    virtual ~Grapheme2Phoneme() = default;
    virtual std::optional<std::vector<std::string>> lookup(const std::string& word) const = 0;
};

/// Word list with hand-checked transcriptions (see docs/formats.md for the
/// file format). Lookups are exact after lowercasing.
class LexiconG2p : public Grapheme2Phoneme {
public:
    static LexiconG2p load(std::istream& source);
    static LexiconG2p load_file(const std::string& path);

    std::optional<std::vector<std::string>> lookup(const std::string& word) const override;
    const std::string& version() const { return version_; }
    std::size_t size() const { return entries_.size(); }

private:
    std::map<std::string, std::vector<std::string>> entries_;
    std::string version_;
};

/// Minimal letter-to-sound rules for European Portuguese. Approximate by
/// construction; it backs up the lexicon for out-of-vocabulary words and
/// fails (returns nullopt) on characters it has no rule for.
class RuleG2p : public Grapheme2Phoneme {
public:
    std::optional<std::vector<std::string>> lookup(const std::string& word) const override;
};

/// Lexicon first, rules second.
class ChainG2p : public Grapheme2Phoneme {
public:
    ChainG2p(const Grapheme2Phoneme& first, const Grapheme2Phoneme& second)
        : first_(first), second_(second) {}
    std::optional<std::vector<std::string>> lookup(const std::string& word) const override;

private:
    const Grapheme2Phoneme& first_;
    const Grapheme2Phoneme& second_;
};

struct WordPhonemes {
    std::string word;             // sentence token (lowercased)
    std::vector<std::string> ipa; // inventory IPA symbols
};

// Transcribes the full inflected sentence. Words are transcribed in sentence
// order and cross-word assimilation is applied afterwards (word-final /S Z/
// voicing to the following word), which is why the sentence is handled whole
// rather than word by word.
std::vector<WordPhonemes> transcribe(const std::string& sentence, const Grapheme2Phoneme& g2p);

// ---------------------------------------------------------------------------
// Step 2: ASCII normalization
// ---------------------------------------------------------------------------

struct WordCodes {
    std::string word;
    std::vector<std::string> codes; // ASCII phoneme codes, one per input symbol
};

WordCodes normalize(const WordPhonemes& word);
std::vector<WordCodes> normalize(const std::vector<WordPhonemes>& words);

// ---------------------------------------------------------------------------
// Step 3: syllabification
// ---------------------------------------------------------------------------

struct SyllabifiedWord {
    std::string word;
    std::vector<std::vector<std::string>> syllables; // concatenation == input codes
    bool used_fallback = false; // no vowel nucleus found; whole word kept as one syllable
};

// Onset maximization over EP phonotactics: every vowel is a nucleus, single
// consonants and the stop/f/v + liquid clusters may open a syllable,
// remaining consonants close the preceding one.
SyllabifiedWord syllabify(const WordCodes& word);

// ---------------------------------------------------------------------------
// Step 4: viseme mapping and pruning
// ---------------------------------------------------------------------------

enum class Viseme : char { A = 'A', B = 'B', C = 'C', E = 'E', F = 'F', O = 'O', U = 'U' };

char to_char(Viseme v);
Viseme viseme_from_char(char c);

/// Total mapping phoneme code -> viseme class, loaded from the map file. The
/// consonant flag drives the syllable-final pruning rule.
class VisemeMap {
public:
    struct Entry {
        Viseme viseme;
        bool consonant;
    };

    static VisemeMap load(std::istream& source);
    static VisemeMap load_file(const std::string& path);

    const Entry& at(const std::string& code) const; // throws LookupError
    std::size_t size() const { return entries_.size(); }

private:
    std::map<std::string, Entry> entries_;
};

struct VisemeEvent {
    Viseme viseme = Viseme::A;
    std::size_t syllable_index = 0;
    bool syllable_final = false;
    bool consonant = false;

    friend bool operator==(const VisemeEvent&, const VisemeEvent&) = default;
};

struct VisemeSequence {
    std::vector<VisemeEvent> events;

    friend bool operator==(const VisemeSequence&, const VisemeSequence&) = default;
};

VisemeSequence map_visemes(const SyllabifiedWord& word, const VisemeMap& map);

// Joins word sequences into one mouthing unit, renumbering syllable indices.
VisemeSequence concat_visemes(const std::vector<VisemeSequence>& words);

// Over-articulation pruning: drops class-C consonants in syllable-final
// position, then collapses runs of equal consecutive visemes (first event of
// a run survives). Idempotent; never lengthens the sequence.
VisemeSequence prune(const VisemeSequence& sequence);

// Steps 1-4 for a whole sentence: one unpruned viseme sequence per sentence
// token, in token order. Pruning is applied later, per sign mouthing unit.
std::vector<VisemeSequence> sentence_visemes(const std::string& sentence,
                                             const Grapheme2Phoneme& g2p, const VisemeMap& map);

} // namespace glossc
