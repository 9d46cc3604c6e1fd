#pragma once

// Closed-form gate and depth budgets per operation at n wires per
// operand, independent of any concrete synthesis run. The counts track
// the ripple constructions with uncomputation priced in; an emitted
// circuit can undercut them when operands share structure. Combined with
// an operation tally they turn into whole-program budgets, which is how
// resource growth is projected to widths far past what simulation checks.

#include <cstdint>

#include <json.hpp>

#include "qex/report/approx.hpp"
#include "qex/synth/synthesize.hpp"

namespace qex::report {

struct CostModel {
    int n = 4;  // wires per operand

    std::uint64_t add_gates() const {
        const std::uint64_t k = static_cast<std::uint64_t>(n);
        return 3 * k * (k + 1) / 2;
    }
    std::uint64_t sub_gates() const { return add_gates(); }
    std::uint64_t mul_gates() const {
        const std::uint64_t k = static_cast<std::uint64_t>(n);
        return (11 * k * k * k - 16 * k * k + 5 * k) / 2;
    }
    std::uint64_t div_gates() const {
        const std::uint64_t k = static_cast<std::uint64_t>(n);
        return k * (28 * k * k + 4 * k + 4);
    }
    std::uint64_t if_else_gates() const {
        const std::uint64_t k = static_cast<std::uint64_t>(n);
        return 9 * k * (k + 1) + 1;
    }

    std::uint64_t add_depth() const { return 5 * static_cast<std::uint64_t>(n) - 2; }
    std::uint64_t sub_depth() const { return add_depth(); }
    std::uint64_t mul_depth() const {
        const std::uint64_t k = static_cast<std::uint64_t>(n);
        return (11 * k * k * k - 18 * k * k + 9 * k) / 2;
    }
    std::uint64_t div_depth() const {
        const std::uint64_t k = static_cast<std::uint64_t>(n);
        return 22 * k * k * k + 3 * k * k + 6 * k + 1;
    }
    std::uint64_t if_else_depth() const { return 10 * static_cast<std::uint64_t>(n) - 3; }
};

struct Estimate {
    std::uint64_t gates = 0;
    std::uint64_t depth = 0;  // sequential bound: stages sum
    bool operator==(const Estimate&) const = default;
};

inline Estimate estimate(const synth::Tally& t, int n) {
    if (n < 1) throw ReportError("cost model needs at least one wire");
    const CostModel m{n};
    Estimate e;
    e.gates = t.add * m.add_gates() + t.sub * m.sub_gates() + t.mul * m.mul_gates() +
              t.div * m.div_gates() + t.if_else * m.if_else_gates();
    e.depth = t.add * m.add_depth() + t.sub * m.sub_depth() + t.mul * m.mul_depth() +
              t.div * m.div_depth() + t.if_else * m.if_else_depth();
    return e;
}

inline nlohmann::json cost_row(int n) {
    const CostModel m{n};
    return {{"n", n},
            {"add", {{"gates", m.add_gates()}, {"depth", m.add_depth()}}},
            {"sub", {{"gates", m.sub_gates()}, {"depth", m.sub_depth()}}},
            {"mul", {{"gates", m.mul_gates()}, {"depth", m.mul_depth()}}},
            {"div", {{"gates", m.div_gates()}, {"depth", m.div_depth()}}},
            {"if_else", {{"gates", m.if_else_gates()}, {"depth", m.if_else_depth()}}}};
}

// Budget table over a width range, for scaling studies.
inline nlohmann::json scale_report(int n_lo, int n_hi) {
    if (n_lo < 1 || n_hi < n_lo) throw ReportError("bad width range");
    nlohmann::json rows = nlohmann::json::array();
    for (int n = n_lo; n <= n_hi; ++n) rows.push_back(cost_row(n));
    return rows;
}

}  // namespace qex::report
