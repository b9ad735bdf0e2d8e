#include "glossc/gloss_sequence.hpp"

#include "glossc/errors.hpp"
#include "json_util.hpp"

#include <algorithm>
#include <istream>

namespace glossc {

using detail::json;

std::string utf8_lowercase(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
        unsigned char c = static_cast<unsigned char>(text[i]);
        if (c >= 'A' && c <= 'Z') {
            out += static_cast<char>(c - 'A' + 'a');
        } else if (c == 0xC3 && i + 1 < text.size()) {
            // U+00C0..U+00DE lowercase by +0x20 in the second byte (except the
            // multiplication sign, which never appears in words).
            unsigned char d = static_cast<unsigned char>(text[i + 1]);
            out += static_cast<char>(c);
            if (d >= 0x80 && d <= 0x9E && d != 0x97) d += 0x20;
            out += static_cast<char>(d);
            ++i;
        } else {
            out += static_cast<char>(c);
        }
    }
    return out;
}

std::vector<std::string> tokenize_sentence(const std::string& sentence) {
    static const std::string edge_punct = ".,;:!?\"'()[]";
    std::vector<std::string> tokens;
    std::size_t i = 0;
    while (i < sentence.size()) {
        while (i < sentence.size() && std::isspace(static_cast<unsigned char>(sentence[i]))) ++i;
        std::size_t j = i;
        while (j < sentence.size() && !std::isspace(static_cast<unsigned char>(sentence[j]))) ++j;
        if (j > i) {
            std::string w = sentence.substr(i, j - i);
            std::size_t b = 0, e = w.size();
            while (b < e && edge_punct.find(w[b]) != std::string::npos) ++b;
            while (e > b && edge_punct.find(w[e - 1]) != std::string::npos) --e;
            if (e > b) tokens.push_back(utf8_lowercase(w.substr(b, e - b)));
        }
        i = j;
    }
    return tokens;
}

void validate_gloss_sequence(const GlossSequence& seq) {
    const std::size_t n = seq.glosses.size();
    if (seq.word_alignment.size() != n)
        throw ValidationError("word alignment must cover every gloss");
    if (seq.negation_marks.size() != n)
        throw ValidationError("negation marks must cover every gloss");

    const std::size_t word_count = tokenize_sentence(seq.sentence).size();
    for (std::size_t g = 0; g < n; ++g)
        for (std::size_t w : seq.word_alignment[g])
            if (w >= word_count)
                throw ValidationError("alignment index " + std::to_string(w) + " for gloss \"" +
                                      seq.glosses[g] + "\" out of range (sentence has " +
                                      std::to_string(word_count) + " words)");

    auto spans = seq.composite_spans;
    std::sort(spans.begin(), spans.end());
    for (std::size_t s = 0; s < spans.size(); ++s) {
        auto [first, last] = spans[s];
        if (first >= last || last >= n)
            throw ValidationError("composite span [" + std::to_string(first) + "," +
                                  std::to_string(last) + "] is not a valid index range");
        if (s > 0 && first <= spans[s - 1].second)
            throw ValidationError("composite spans overlap");
    }
}

GlossSequence load_gloss_sequence(std::istream& source) {
    const json doc = detail::parse_json(source, "sentence document");
    const std::string format = detail::string_at(detail::field(doc, "format", "$"), "$.format");
    if (format != "glossc-sentence")
        throw ParseError("sentence document: unexpected format \"" + format + "\"");
    const auto version = detail::integer_at(detail::field(doc, "version", "$"), "$.version");
    if (version != 1)
        throw ParseError("sentence document: unsupported version " + std::to_string(version));

    GlossSequence seq;
    seq.sentence = detail::string_at(detail::field(doc, "sentence", "$"), "$.sentence");

    const json& jsigns = detail::array_at(detail::field(doc, "signs", "$"), "$.signs");
    for (std::size_t i = 0; i < jsigns.size(); ++i) {
        const std::string path = "signs[" + std::to_string(i) + "]";
        seq.glosses.push_back(
            detail::string_at(detail::field(jsigns[i], "gloss", path), path + ".gloss"));
        std::vector<std::size_t> words;
        if (auto it = jsigns[i].find("words"); it != jsigns[i].end()) {
            for (const auto& w : detail::array_at(*it, path + ".words")) {
                auto idx = detail::integer_at(w, path + ".words[]");
                if (idx < 0) throw ParseError(path + ".words[]: negative index");
                words.push_back(static_cast<std::size_t>(idx));
            }
        }
        seq.word_alignment.push_back(std::move(words));
    }
    seq.negation_marks.assign(seq.glosses.size(), false);

    if (auto it = doc.find("composites"); it != doc.end()) {
        for (const auto& jspan : detail::array_at(*it, "$.composites")) {
            const auto& pair = detail::array_at(jspan, "$.composites[]");
            if (pair.size() != 2) throw ParseError("$.composites[]: expected [first, last]");
            auto first = detail::integer_at(pair[0], "$.composites[][0]");
            auto last = detail::integer_at(pair[1], "$.composites[][1]");
            if (first < 0 || last < 0) throw ParseError("$.composites[]: negative index");
            seq.composite_spans.emplace_back(static_cast<std::size_t>(first),
                                             static_cast<std::size_t>(last));
        }
    }
    if (auto it = doc.find("negations"); it != doc.end()) {
        for (const auto& jneg : detail::array_at(*it, "$.negations")) {
            auto idx = detail::integer_at(jneg, "$.negations[]");
            if (idx < 0 || static_cast<std::size_t>(idx) >= seq.glosses.size())
                throw ValidationError("negation index " + std::to_string(idx) + " out of range");
            seq.negation_marks[static_cast<std::size_t>(idx)] = true;
        }
    }

    validate_gloss_sequence(seq);
    return seq;
}

GlossSequence load_gloss_sequence_file(const std::string& path) {
    auto in = detail::open_input(path);
    return load_gloss_sequence(in);
}

} // namespace glossc
