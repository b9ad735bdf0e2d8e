#include "glossc/metrics.hpp"

#include "glossc/errors.hpp"
#include "glossc/gloss_sequence.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <sstream>

namespace glossc {

namespace {

std::string norm_gloss(const std::string& gloss) { return utf8_lowercase(gloss); }

std::vector<std::string> split_ws(const std::string& text) {
    std::vector<std::string> parts;
    std::istringstream in(text);
    std::string part;
    while (in >> part) parts.push_back(part);
    return parts;
}

} // namespace

void SynonymTable::add(const std::string& a, const std::string& b) {
    std::string na = norm_gloss(a);
    std::string nb = norm_gloss(b);
    if (na == nb) return;
    if (nb < na) std::swap(na, nb);
    pairs_.emplace(std::move(na), std::move(nb));
}

bool SynonymTable::equivalent(const std::string& a, const std::string& b) const {
    std::string na = norm_gloss(a);
    std::string nb = norm_gloss(b);
    if (na == nb) return true;
    if (nb < na) std::swap(na, nb);
    return pairs_.count({na, nb}) > 0;
}

SynonymTable SynonymTable::load(std::istream& source) {
    SynonymTable table;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(source, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        auto parts = split_ws(line);
        if (parts.size() < 2)
            throw ParseError("synonym file line " + std::to_string(lineno) +
                             ": expected a gloss and at least one equivalent");
        for (std::size_t i = 1; i < parts.size(); ++i) table.add(parts[0], parts[i]);
    }
    return table;
}

SynonymTable SynonymTable::load_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path);
    return load(in);
}

double comprehension_score(const ResponseRecord& record, const SynonymTable& synonyms) {
    if (record.reference_glosses.empty())
        throw ValidationError("comprehension_score: reference glosses must be non-empty");

    const std::size_t nref = record.reference_glosses.size();
    const std::size_t nresp = record.response_glosses.size();

    // Maximum bipartite matching (augmenting paths). Sentences are a handful
    // of glosses, so the simple algorithm is plenty.
    std::vector<std::vector<std::size_t>> edges(nref);
    for (std::size_t r = 0; r < nref; ++r)
        for (std::size_t s = 0; s < nresp; ++s)
            if (synonyms.equivalent(record.reference_glosses[r], record.response_glosses[s]))
                edges[r].push_back(s);

    std::vector<std::ptrdiff_t> matched_ref_of(nresp, -1);
    std::vector<char> visited(nresp, 0);
    std::function<bool(std::size_t)> try_match = [&](std::size_t r) {
        for (std::size_t s : edges[r]) {
            if (visited[s]) continue;
            visited[s] = 1;
            if (matched_ref_of[s] < 0 || try_match(static_cast<std::size_t>(matched_ref_of[s]))) {
                matched_ref_of[s] = static_cast<std::ptrdiff_t>(r);
                return true;
            }
        }
        return false;
    };

    std::size_t matched = 0;
    for (std::size_t r = 0; r < nref; ++r) {
        std::fill(visited.begin(), visited.end(), 0);
        if (try_match(r)) ++matched;
    }
    return 100.0 * static_cast<double>(matched) / static_cast<double>(nref);
}

double speed_score(int likert) {
    if (likert < 1 || likert > 5)
        throw RangeError("speed likert value " + std::to_string(likert) + " outside 1..5");
    static const double by_distance[3] = {100.0, 66.67, 33.33};
    return by_distance[std::abs(likert - 3)];
}

double naturalness_score(int likert) {
    if (likert < 1 || likert > 5)
        throw RangeError("naturalness likert value " + std::to_string(likert) + " outside 1..5");
    return likert * 20.0;
}

Aggregate aggregate(const std::vector<double>& scores) {
    if (scores.empty()) throw ValidationError("aggregate: empty score list");
    Aggregate out;
    double sum = 0.0;
    for (double s : scores) sum += s;
    out.mean = sum / static_cast<double>(scores.size());
    if (scores.size() > 1) {
        double ss = 0.0;
        for (double s : scores) ss += (s - out.mean) * (s - out.mean);
        out.sample_sd = std::sqrt(ss / static_cast<double>(scores.size() - 1));
    }
    return out;
}

namespace {

std::vector<std::string> split_on(const std::string& line, char sep) {
    std::vector<std::string> fields;
    std::string field;
    for (char c : line) {
        if (c == sep) {
            fields.push_back(field);
            field.clear();
        } else {
            field += c;
        }
    }
    fields.push_back(field);
    return fields;
}

int parse_likert(const std::string& text, std::size_t lineno, const char* what) {
    int value = 0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    while (begin < end && *begin == ' ') ++begin;
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end)
        throw ParseError("responses line " + std::to_string(lineno) + ": bad " + what + " \"" +
                         text + "\"");
    return value;
}

} // namespace

std::vector<ResponseRecord> load_responses(std::istream& source) {
    std::vector<ResponseRecord> records;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(source, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        auto fields = split_on(line, ';');
        if (fields.size() != 4)
            throw ParseError("responses line " + std::to_string(lineno) +
                             ": expected 4 ';'-separated fields, got " +
                             std::to_string(fields.size()));
        ResponseRecord rec;
        rec.reference_glosses = split_ws(fields[0]);
        rec.response_glosses = split_ws(fields[1]);
        if (rec.reference_glosses.empty())
            throw ParseError("responses line " + std::to_string(lineno) +
                             ": reference glosses must be non-empty");
        rec.likert_speed = parse_likert(fields[2], lineno, "speed rating");
        rec.likert_naturalness = parse_likert(fields[3], lineno, "naturalness rating");
        if (rec.likert_speed < 1 || rec.likert_speed > 5 || rec.likert_naturalness < 1 ||
            rec.likert_naturalness > 5)
            throw ParseError("responses line " + std::to_string(lineno) +
                             ": likert values must be in 1..5");
        records.push_back(std::move(rec));
    }
    if (records.empty()) throw ParseError("responses: no records");
    return records;
}

std::vector<ResponseRecord> load_responses_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path);
    return load_responses(in);
}

ScoreReport score_responses(const std::vector<ResponseRecord>& records,
                            const SynonymTable& synonyms) {
    ScoreReport report;
    std::vector<double> comp, spd, nat;
    for (const auto& rec : records) {
        ScoreReport::Row row{};
        row.comprehension = comprehension_score(rec, synonyms);
        row.speed = speed_score(rec.likert_speed);
        row.naturalness = naturalness_score(rec.likert_naturalness);
        comp.push_back(row.comprehension);
        spd.push_back(row.speed);
        nat.push_back(row.naturalness);
        report.rows.push_back(row);
    }
    report.comprehension = aggregate(comp);
    report.speed = aggregate(spd);
    report.naturalness = aggregate(nat);
    return report;
}

namespace {

std::string fixed2(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, 2);
    return std::string(buf, res.ptr);
}

std::string sd_text(const std::optional<double>& sd) { return sd ? fixed2(*sd) : "-"; }

} // namespace

std::string format_report(const ScoreReport& report) {
    std::ostringstream out;
    out << "record\tcomprehension\tspeed\tnaturalness\n";
    for (std::size_t i = 0; i < report.rows.size(); ++i) {
        const auto& row = report.rows[i];
        out << (i + 1) << '\t' << fixed2(row.comprehension) << '\t' << fixed2(row.speed) << '\t'
            << fixed2(row.naturalness) << '\n';
    }
    out << "mean\t" << fixed2(report.comprehension.mean) << '\t' << fixed2(report.speed.mean)
        << '\t' << fixed2(report.naturalness.mean) << '\n';
    out << "sd\t" << sd_text(report.comprehension.sample_sd) << '\t'
        << sd_text(report.speed.sample_sd) << '\t' << sd_text(report.naturalness.sample_sd)
        << '\n';
    return out.str();
}

} // namespace glossc
