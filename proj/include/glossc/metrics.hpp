#pragma once

#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace glossc {

/// One study response: what the participant understood plus the two Likert
/// ratings they gave the sentence.
struct ResponseRecord {
    std::vector<std::string> reference_glosses; // non-empty
    std::vector<std::string> response_glosses;
    int likert_speed = 3;       // 1 = too slow .. 5 = too fast
    int likert_naturalness = 3; // 1 = robotic .. 5 = natural
};

/// Accepted gloss equivalents. Pairs are symmetric after load (a counts for b
/// iff b counts for a); equivalence is not transitive.
class SynonymTable {
public:
    static SynonymTable load(std::istream& source);
    static SynonymTable load_file(const std::string& path);

    void add(const std::string& a, const std::string& b);
    bool equivalent(const std::string& a, const std::string& b) const;
    std::size_t pair_count() const { return pairs_.size(); }

private:
    std::set<std::pair<std::string, std::string>> pairs_; // normalized, ordered
};

// Percentage of reference glosses found in the response, synonyms counting as
// correct. Matching is a maximum bipartite assignment, so each response gloss
// is consumed at most once and gloss order never changes the score. Matching
// is case-insensitive with diacritics preserved.
double comprehension_score(const ResponseRecord& record, const SynonymTable& synonyms);

// Likert -> percent tables from the study design.
double speed_score(int likert);       // 3 -> 100, 2/4 -> 66.67, 1/5 -> 33.33
double naturalness_score(int likert); // likert * 20

struct Aggregate {
    double mean = 0.0;
    std::optional<double> sample_sd; // n-1 denominator; empty when n == 1
};
Aggregate aggregate(const std::vector<double>& scores);

// Response file scoring (formats in docs/formats.md).
struct ScoreReport {
    struct Row {
        double comprehension;
        double speed;
        double naturalness;
    };
    std::vector<Row> rows;
    Aggregate comprehension;
    Aggregate speed;
    Aggregate naturalness;
};

std::vector<ResponseRecord> load_responses(std::istream& source);
std::vector<ResponseRecord> load_responses_file(const std::string& path);

ScoreReport score_responses(const std::vector<ResponseRecord>& records,
                            const SynonymTable& synonyms);

// Fixed-format text rendering of a report (two decimals, one row per record).
std::string format_report(const ScoreReport& report);

} // namespace glossc
