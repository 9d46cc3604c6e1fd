#pragma once

// Precision accounting for value-set analyses. Given the true reachable
// set and an analysis' predicted set, the over rate says how far past the
// truth the prediction spills (100% = exact cover) and the under rate how
// much of the truth it misses (0% = nothing lost). Counts stay integers;
// the percentages are derived views.

#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>

#include <json.hpp>

namespace qex::report {

struct ReportError : std::runtime_error {
    explicit ReportError(const std::string& msg) : std::runtime_error(msg) {}
};

struct Rates {
    std::uint64_t truth = 0;
    std::uint64_t predicted = 0;
    std::uint64_t false_positives = 0;  // predicted but unreachable
    std::uint64_t false_negatives = 0;  // reachable but missed

    double over_percent() const {
        return 100.0 * static_cast<double>(false_positives + truth) / static_cast<double>(truth);
    }
    double under_percent() const {
        return 100.0 * static_cast<double>(false_negatives) / static_cast<double>(truth);
    }
    bool exact() const { return false_positives == 0 && false_negatives == 0; }
    bool operator==(const Rates&) const = default;
};

inline Rates rates(const std::set<std::uint64_t>& truth,
                   const std::set<std::uint64_t>& predicted) {
    if (truth.empty()) throw ReportError("empty ground truth has no rate");
    Rates r;
    r.truth = truth.size();
    r.predicted = predicted.size();
    for (std::uint64_t v : predicted)
        if (!truth.count(v)) ++r.false_positives;
    for (std::uint64_t v : truth)
        if (!predicted.count(v)) ++r.false_negatives;
    return r;
}

inline nlohmann::json rates_json(const Rates& r) {
    return {{"truth", r.truth},
            {"predicted", r.predicted},
            {"false_positives", r.false_positives},
            {"false_negatives", r.false_negatives},
            {"over_percent", r.over_percent()},
            {"under_percent", r.under_percent()},
            {"exact", r.exact()}};
}

}  // namespace qex::report
