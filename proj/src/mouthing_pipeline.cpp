#include "glossc/mouthing_pipeline.hpp"

#include "glossc/errors.hpp"
#include "glossc/gloss_sequence.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>

namespace glossc {

// ---------------------------------------------------------------------------
// Inventory
// ---------------------------------------------------------------------------

const std::vector<PhonemeInfo>& phoneme_inventory() {
    static const std::vector<PhonemeInfo> inventory = {
        // oral vowels
        {"i", "i", false},
        {"e", "e", false},
        {"ɛ", "E", false}, // ɛ
        {"a", "a", false},
        {"ɐ", "6", false}, // ɐ
        {"ɔ", "O", false}, // ɔ
        {"o", "o", false},
        {"u", "u", false},
        {"ɨ", "@", false}, // ɨ
        // nasal vowels (combining tilde)
        {"ĩ", "i~", false},
        {"ẽ", "e~", false},
        {"ɐ̃", "6~", false},
        {"õ", "o~", false},
        {"ũ", "u~", false},
        // consonants
        {"p", "p", true},
        {"b", "b", true},
        {"t", "t", true},
        {"d", "d", true},
        {"k", "k", true},
        {"g", "g", true},
        {"f", "f", true},
        {"v", "v", true},
        {"s", "s", true},
        {"z", "z", true},
        {"ʃ", "S", true}, // ʃ
        {"ʒ", "Z", true}, // ʒ
        {"m", "m", true},
        {"n", "n", true},
        {"ɲ", "J", true}, // ɲ
        {"l", "l", true},
        {"ʎ", "L", true}, // ʎ
        {"ɾ", "r", true}, // ɾ
        {"ʁ", "R", true}, // ʁ
    };
    return inventory;
}

std::string canonical_ipa(const std::string& ipa) {
    if (ipa == "ĩ") return "ĩ"; // ĩ
    if (ipa == "ẽ") return "ẽ"; // ẽ
    if (ipa == "õ") return "õ"; // õ
    if (ipa == "ũ") return "ũ"; // ũ
    return ipa;
}

namespace {

const PhonemeInfo* find_by_ipa(const std::string& ipa) {
    const std::string canon = canonical_ipa(ipa);
    for (const auto& p : phoneme_inventory())
        if (p.ipa == canon) return &p;
    return nullptr;
}

const PhonemeInfo* find_by_code(const std::string& code) {
    for (const auto& p : phoneme_inventory())
        if (p.code == code) return &p;
    return nullptr;
}

bool is_vowel_ipa(const std::string& ipa) {
    const PhonemeInfo* p = find_by_ipa(ipa);
    return p != nullptr && !p->consonant;
}

bool is_voiced_ipa(const std::string& ipa) {
    static const std::set<std::string> voiced = {"b", "d",      "g",      "v",      "z",
                                                 "ʒ", "m", "n",      "ɲ", "l",
                                                 "ʎ", "ɾ", "ʁ"};
    return is_vowel_ipa(ipa) || voiced.count(ipa) > 0;
}

} // namespace

bool is_inventory_ipa(const std::string& ipa) { return find_by_ipa(ipa) != nullptr; }
bool is_inventory_code(const std::string& code) { return find_by_code(code) != nullptr; }

bool is_vowel_code(const std::string& code) {
    const PhonemeInfo* p = find_by_code(code);
    return p != nullptr && !p->consonant;
}

// ---------------------------------------------------------------------------
// Lexicon
// ---------------------------------------------------------------------------

namespace {

std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> parts;
    std::istringstream in(line);
    std::string part;
    while (in >> part) parts.push_back(part);
    return parts;
}

} // namespace

LexiconG2p LexiconG2p::load(std::istream& source) {
    LexiconG2p lex;
    std::string line;
    std::size_t lineno = 0;
    bool header_seen = false;
    while (std::getline(source, line)) {
        ++lineno;
        if (!header_seen) {
            auto parts = split_ws(line);
            if (parts.size() != 2 || parts[0] != "#glossc-lexicon")
                throw ParseError("lexicon line 1: expected \"#glossc-lexicon v<N>\" header");
            lex.version_ = parts[1];
            header_seen = true;
            continue;
        }
        if (line.empty() || line[0] == '#') continue;
        auto parts = split_ws(line);
        if (parts.size() < 2)
            throw ParseError("lexicon line " + std::to_string(lineno) +
                             ": expected word followed by IPA symbols");
        std::string word = utf8_lowercase(parts[0]);
        std::vector<std::string> ipa;
        for (auto it = parts.begin() + 1; it != parts.end(); ++it) {
            std::string sym = canonical_ipa(*it);
            if (!is_inventory_ipa(sym))
                throw ValidationError("lexicon line " + std::to_string(lineno) + ": symbol \"" +
                                      *it + "\" for word \"" + word + "\" is not in the inventory");
            ipa.push_back(std::move(sym));
        }
        if (!lex.entries_.emplace(std::move(word), std::move(ipa)).second)
            throw ValidationError("lexicon line " + std::to_string(lineno) + ": duplicate word \"" +
                                  parts[0] + "\"");
    }
    if (!header_seen) throw ParseError("lexicon: empty file");
    return lex;
}

LexiconG2p LexiconG2p::load_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path);
    return load(in);
}

std::optional<std::vector<std::string>> LexiconG2p::lookup(const std::string& word) const {
    auto it = entries_.find(utf8_lowercase(word));
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

// ---------------------------------------------------------------------------
// Letter-to-sound rules
// ---------------------------------------------------------------------------

namespace {

std::vector<std::string> utf8_letters(const std::string& word) {
    std::vector<std::string> letters;
    std::size_t i = 0;
    while (i < word.size()) {
        unsigned char c = static_cast<unsigned char>(word[i]);
        std::size_t len = 1;
        if ((c & 0x80) != 0) {
            if ((c & 0xE0) == 0xC0) len = 2;
            else if ((c & 0xF0) == 0xE0) len = 3;
            else if ((c & 0xF8) == 0xF0) len = 4;
        }
        if (i + len > word.size()) len = 1;
        letters.push_back(word.substr(i, len));
        i += len;
    }
    return letters;
}

bool is_letter_vowel(const std::string& l) {
    static const std::set<std::string> vowels = {"a",      "á", "à", "â", "ã",
                                                 "e",      "é", "ê", "i",      "í",
                                                 "o",      "ó", "ô", "õ", "u",
                                                 "ú", "ü", "y"};
    return vowels.count(l) > 0;
}

// Oral vowel -> nasal counterpart, applied when a coda m/n nasalizes the
// preceding vowel.
std::optional<std::string> nasal_counterpart(const std::string& ipa) {
    if (ipa == "a" || ipa == "ɐ") return "ɐ̃";
    if (ipa == "e" || ipa == "ɛ" || ipa == "ɨ") return "ẽ";
    if (ipa == "i") return "ĩ";
    if (ipa == "o" || ipa == "ɔ") return "õ";
    if (ipa == "u") return "ũ";
    return std::nullopt;
}

} // namespace

std::optional<std::vector<std::string>> RuleG2p::lookup(const std::string& word) const {
    const std::vector<std::string> ls = utf8_letters(utf8_lowercase(word));
    if (ls.empty()) return std::nullopt;
    std::vector<std::string> out;

    auto at = [&](std::size_t i) -> const std::string& {
        static const std::string empty;
        return i < ls.size() ? ls[i] : empty;
    };
    auto front_vowel = [&](std::size_t i) {
        const std::string& l = at(i);
        return l == "e" || l == "i" || l == "é" || l == "ê" || l == "í";
    };
    // "e"/"o" reduce word-finally, also before a final plural "s"
    auto word_final_pos = [&](std::size_t i) {
        return i + 1 == ls.size() || (i + 2 == ls.size() && at(i + 1) == "s");
    };

    for (std::size_t i = 0; i < ls.size(); ++i) {
        const std::string& l = ls[i];
        const std::string& next = at(i + 1);

        // digraphs
        if (l == "c" && next == "h") { out.push_back("ʃ"); ++i; continue; }
        if (l == "l" && next == "h") { out.push_back("ʎ"); ++i; continue; }
        if (l == "n" && next == "h") { out.push_back("ɲ"); ++i; continue; }
        if (l == "r" && next == "r") { out.push_back("ʁ"); ++i; continue; }
        if (l == "s" && next == "s") { out.push_back("s"); ++i; continue; }
        if (l == "q") {
            if (next == "u" && front_vowel(i + 2)) { out.push_back("k"); ++i; continue; }
            if (next == "u") { out.push_back("k"); out.push_back("u"); ++i; continue; }
            out.push_back("k");
            continue;
        }
        if (l == "g" && next == "u" && front_vowel(i + 2)) { out.push_back("g"); ++i; continue; }
        if (l == "o" && next == "u") { out.push_back("o"); ++i; continue; }

        // nasal coda: vowel + m/n at word end or before a consonant
        if ((l == "m" || l == "n") && !out.empty() &&
            (i + 1 == ls.size() || (!is_letter_vowel(next) && next != "h"))) {
            if (auto nasal = nasal_counterpart(out.back())) {
                out.back() = *nasal;
                continue;
            }
        }

        if (l == "a") { out.push_back("a"); continue; }
        if (l == "á" || l == "à") { out.push_back("a"); continue; }
        if (l == "â") { out.push_back("ɐ"); continue; }
        if (l == "ã") { out.push_back("ɐ̃"); continue; }
        if (l == "e") { out.push_back(word_final_pos(i) ? "ɨ" : "e"); continue; }
        if (l == "é") { out.push_back("ɛ"); continue; }
        if (l == "ê") { out.push_back("e"); continue; }
        if (l == "i" || l == "í" || l == "y") { out.push_back("i"); continue; }
        if (l == "o") { out.push_back(word_final_pos(i) ? "u" : "o"); continue; }
        if (l == "ó") { out.push_back("ɔ"); continue; }
        if (l == "ô") { out.push_back("o"); continue; }
        if (l == "õ") { out.push_back("õ"); continue; }
        if (l == "u" || l == "ú" || l == "ü" || l == "w") { out.push_back("u"); continue; }

        if (l == "b") { out.push_back("b"); continue; }
        if (l == "c") { out.push_back(front_vowel(i + 1) ? "s" : "k"); continue; }
        if (l == "ç") { out.push_back("s"); continue; }
        if (l == "d") { out.push_back("d"); continue; }
        if (l == "f") { out.push_back("f"); continue; }
        if (l == "g") { out.push_back(front_vowel(i + 1) ? "ʒ" : "g"); continue; }
        if (l == "h") { continue; } // silent
        if (l == "j") { out.push_back("ʒ"); continue; }
        if (l == "k") { out.push_back("k"); continue; }
        if (l == "l") { out.push_back("l"); continue; }
        if (l == "m") { out.push_back("m"); continue; }
        if (l == "n") { out.push_back("n"); continue; }
        if (l == "p") { out.push_back("p"); continue; }
        if (l == "r") {
            const bool strong = i == 0 || at(i - 1) == "l" || at(i - 1) == "n" || at(i - 1) == "s";
            out.push_back(strong ? "ʁ" : "ɾ");
            continue;
        }
        if (l == "s") {
            const bool prev_vowel = i > 0 && is_letter_vowel(at(i - 1));
            if (i + 1 == ls.size()) { out.push_back("ʃ"); continue; }
            if (is_letter_vowel(next)) { out.push_back(prev_vowel ? "z" : "s"); continue; }
            static const std::set<std::string> voiced_letters = {"b", "d", "g", "v", "z",
                                                                 "m", "n", "l", "r", "j"};
            out.push_back(voiced_letters.count(next) ? "ʒ" : "ʃ");
            continue;
        }
        if (l == "t") { out.push_back("t"); continue; }
        if (l == "v") { out.push_back("v"); continue; }
        if (l == "x") { out.push_back("ʃ"); continue; }
        if (l == "z") { out.push_back(i + 1 == ls.size() ? "ʃ" : "z"); continue; }

        return std::nullopt; // no rule for this character
    }
    if (out.empty()) return std::nullopt;
    return out;
}

std::optional<std::vector<std::string>> ChainG2p::lookup(const std::string& word) const {
    if (auto hit = first_.lookup(word)) return hit;
    return second_.lookup(word);
}

// ---------------------------------------------------------------------------
// Step 1: sentence transcription with cross-word assimilation
// ---------------------------------------------------------------------------

std::vector<WordPhonemes> transcribe(const std::string& sentence, const Grapheme2Phoneme& g2p) {
    std::vector<WordPhonemes> result;
    for (const std::string& token : tokenize_sentence(sentence)) {
        auto ipa = g2p.lookup(token);
        if (!ipa) throw LookupError("no transcription for word \"" + token + "\"");
        for (auto& sym : *ipa) {
            sym = canonical_ipa(sym);
            if (!is_inventory_ipa(sym))
                throw ValidationError("transcription of \"" + token + "\" contains symbol \"" +
                                      sym + "\" outside the inventory");
        }
        result.push_back(WordPhonemes{token, std::move(*ipa)});
    }

    // Word-final sibilant sandhi: /S Z/ voice to [z] before a vowel and to
    // [Z] before a voiced consonant; the pre-pausal form keeps [S].
    for (std::size_t w = 0; w + 1 < result.size(); ++w) {
        auto& ipa = result[w].ipa;
        if (ipa.empty() || result[w + 1].ipa.empty()) continue;
        std::string& last = ipa.back();
        if (last != "ʃ" && last != "ʒ") continue;
        const std::string& next = result[w + 1].ipa.front();
        if (is_vowel_ipa(next)) last = "z";
        else if (is_voiced_ipa(next)) last = "ʒ";
        else last = "ʃ";
    }
    return result;
}

// ---------------------------------------------------------------------------
// Step 2: normalization
// ---------------------------------------------------------------------------

WordCodes normalize(const WordPhonemes& word) {
    WordCodes out;
    out.word = word.word;
    out.codes.reserve(word.ipa.size());
    for (const auto& sym : word.ipa) {
        const PhonemeInfo* p = find_by_ipa(sym);
        if (!p)
            throw LookupError("normalize: symbol \"" + sym + "\" in word \"" + word.word +
                              "\" has no ASCII code");
        out.codes.push_back(p->code);
    }
    return out;
}

std::vector<WordCodes> normalize(const std::vector<WordPhonemes>& words) {
    std::vector<WordCodes> out;
    out.reserve(words.size());
    for (const auto& w : words) out.push_back(normalize(w));
    return out;
}

// ---------------------------------------------------------------------------
// Step 3: syllabification
// ---------------------------------------------------------------------------

namespace {

bool legal_onset_cluster(const std::string& c1, const std::string& c2) {
    static const std::set<std::pair<std::string, std::string>> clusters = {
        {"p", "l"}, {"b", "l"}, {"k", "l"}, {"g", "l"}, {"f", "l"},
        {"p", "r"}, {"b", "r"}, {"t", "r"}, {"d", "r"}, {"k", "r"},
        {"g", "r"}, {"f", "r"}, {"v", "r"},
    };
    return clusters.count({c1, c2}) > 0;
}

} // namespace

SyllabifiedWord syllabify(const WordCodes& word) {
    if (word.codes.empty()) throw ValidationError("syllabify: empty word \"" + word.word + "\"");
    for (const auto& code : word.codes)
        if (!is_inventory_code(code))
            throw ValidationError("syllabify: unknown phoneme code \"" + code + "\" in word \"" +
                                  word.word + "\"");

    SyllabifiedWord out;
    out.word = word.word;

    std::vector<std::size_t> nuclei;
    for (std::size_t i = 0; i < word.codes.size(); ++i)
        if (is_vowel_code(word.codes[i])) nuclei.push_back(i);

    if (nuclei.empty()) {
        // No nucleus; keep the word as a single syllable rather than dropping it.
        out.syllables.push_back(word.codes);
        out.used_fallback = true;
        return out;
    }

    // Syllable boundaries: before each nucleus's maximal onset. Everything up
    // to the first nucleus joins the first syllable regardless of legality.
    std::vector<std::size_t> starts = {0};
    for (std::size_t n = 1; n < nuclei.size(); ++n) {
        const std::size_t prev_nucleus = nuclei[n - 1];
        const std::size_t this_nucleus = nuclei[n];
        const std::size_t consonants = this_nucleus - prev_nucleus - 1;
        std::size_t onset_len = 0;
        if (consonants >= 1) onset_len = 1;
        if (consonants >= 2 && legal_onset_cluster(word.codes[this_nucleus - 2],
                                                   word.codes[this_nucleus - 1]))
            onset_len = 2;
        starts.push_back(this_nucleus - onset_len);
    }
    starts.push_back(word.codes.size());

    for (std::size_t s = 0; s + 1 < starts.size(); ++s)
        out.syllables.emplace_back(word.codes.begin() + static_cast<std::ptrdiff_t>(starts[s]),
                                   word.codes.begin() + static_cast<std::ptrdiff_t>(starts[s + 1]));
    return out;
}

// ---------------------------------------------------------------------------
// Step 4: viseme mapping, pruning
// ---------------------------------------------------------------------------

char to_char(Viseme v) { return static_cast<char>(v); }

Viseme viseme_from_char(char c) {
    switch (c) {
        case 'A': case 'B': case 'C': case 'E': case 'F': case 'O': case 'U':
            return static_cast<Viseme>(c);
        default:
            throw ParseError(std::string("unknown viseme class \"") + c + "\"");
    }
}

VisemeMap VisemeMap::load(std::istream& source) {
    VisemeMap map;
    std::string line;
    std::size_t lineno = 0;
    bool header_seen = false;
    while (std::getline(source, line)) {
        ++lineno;
        if (!header_seen) {
            auto parts = split_ws(line);
            if (parts.size() != 2 || parts[0] != "#glossc-viseme-map")
                throw ParseError("viseme map line 1: expected \"#glossc-viseme-map v<N>\" header");
            header_seen = true;
            continue;
        }
        if (line.empty() || line[0] == '#') continue;
        auto parts = split_ws(line);
        if (parts.size() != 3)
            throw ParseError("viseme map line " + std::to_string(lineno) +
                             ": expected <code> <viseme> <C|V>");
        const std::string& code = parts[0];
        const PhonemeInfo* info = find_by_code(code);
        if (!info)
            throw ValidationError("viseme map line " + std::to_string(lineno) +
                                  ": unknown phoneme code \"" + code + "\"");
        if (parts[1].size() != 1)
            throw ParseError("viseme map line " + std::to_string(lineno) + ": bad viseme \"" +
                             parts[1] + "\"");
        Entry entry;
        entry.viseme = viseme_from_char(parts[1][0]);
        if (parts[2] == "C") entry.consonant = true;
        else if (parts[2] == "V") entry.consonant = false;
        else
            throw ParseError("viseme map line " + std::to_string(lineno) +
                             ": consonant flag must be C or V");
        if (entry.consonant != info->consonant)
            throw ValidationError("viseme map line " + std::to_string(lineno) + ": phoneme \"" +
                                  code + "\" flagged " + parts[2] +
                                  " but the inventory disagrees");
        if (!map.entries_.emplace(code, entry).second)
            throw ValidationError("viseme map line " + std::to_string(lineno) +
                                  ": duplicate phoneme code \"" + code + "\"");
    }
    if (!header_seen) throw ParseError("viseme map: empty file");
    for (const auto& p : phoneme_inventory())
        if (!map.entries_.count(p.code))
            throw ValidationError("viseme map: phoneme \"" + p.code + "\" has no mapping");
    return map;
}

VisemeMap VisemeMap::load_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path);
    return load(in);
}

const VisemeMap::Entry& VisemeMap::at(const std::string& code) const {
    auto it = entries_.find(code);
    if (it == entries_.end()) throw LookupError("no viseme mapping for phoneme \"" + code + "\"");
    return it->second;
}

VisemeSequence map_visemes(const SyllabifiedWord& word, const VisemeMap& map) {
    VisemeSequence seq;
    for (std::size_t s = 0; s < word.syllables.size(); ++s) {
        const auto& syllable = word.syllables[s];
        for (std::size_t i = 0; i < syllable.size(); ++i) {
            const VisemeMap::Entry& entry = map.at(syllable[i]);
            VisemeEvent ev;
            ev.viseme = entry.viseme;
            ev.syllable_index = s;
            ev.syllable_final = i + 1 == syllable.size();
            ev.consonant = entry.consonant;
            seq.events.push_back(ev);
        }
    }
    return seq;
}

VisemeSequence concat_visemes(const std::vector<VisemeSequence>& words) {
    VisemeSequence out;
    std::size_t syllable_offset = 0;
    for (const auto& word : words) {
        std::size_t max_syllable = 0;
        for (const auto& ev : word.events) {
            VisemeEvent shifted = ev;
            shifted.syllable_index += syllable_offset;
            max_syllable = std::max(max_syllable, ev.syllable_index + 1);
            out.events.push_back(shifted);
        }
        syllable_offset += max_syllable;
    }
    return out;
}

VisemeSequence prune(const VisemeSequence& sequence) {
    VisemeSequence out;
    out.events.reserve(sequence.events.size());
    // Rule 1: class-C consonants die in syllable-final position.
    for (const auto& ev : sequence.events) {
        if (ev.consonant && ev.viseme == Viseme::C && ev.syllable_final) continue;
        out.events.push_back(ev);
    }
    // Rule 2: collapse equal consecutive visemes, keeping the first.
    std::size_t kept = 0;
    for (std::size_t i = 0; i < out.events.size(); ++i) {
        if (kept > 0 && out.events[kept - 1].viseme == out.events[i].viseme) continue;
        out.events[kept++] = out.events[i];
    }
    out.events.resize(kept);
    return out;
}

std::vector<VisemeSequence> sentence_visemes(const std::string& sentence,
                                             const Grapheme2Phoneme& g2p, const VisemeMap& map) {
    std::vector<VisemeSequence> out;
    for (const WordPhonemes& word : transcribe(sentence, g2p))
        out.push_back(map_visemes(syllabify(normalize(word)), map));
    return out;
}

} // namespace glossc
