#pragma once

// Program splitting for mixed execution. Pointer statements never reach the
// synthesizer, so a program that uses them is cut into a classical prefix
// (everything through the last pointer-touching statement) and a quantum
// suffix. plan() picks the cut and decides how prefix results are fed into
// the suffix circuit: exactly, by interpreting the prefix per input tuple,
// or abstractly, by running the prefix through the interval analysis.

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "qex/classical/domain.hpp"
#include "qex/classical/enumerate.hpp"
#include "qex/classical/split.hpp"
#include "qex/lang/ast.hpp"

namespace qex::hybrid {

struct HybridError : std::runtime_error {
    explicit HybridError(const std::string& msg) : std::runtime_error(msg) {}
};

// How prefix outcomes are loaded into the suffix circuit.
enum class Feed {
    tuples,     // interpret the prefix per input, load the exact joint states
    intervals,  // abstract the prefix, load each live variable's range
};

inline const char* feed_name(Feed f) { return f == Feed::tuples ? "tuples" : "intervals"; }

struct Plan {
    std::size_t cut = 0;  // index of the first suffix statement
    classical::SplitResult parts;
    Feed feed = Feed::tuples;
    std::uint64_t input_count = 0;  // tuples the exact feed would interpret
};

namespace detail {

inline bool touches_pointers(const lang::StmtPtr& s) {
    switch (s->kind) {
        case lang::Stmt::Kind::addr_of:
        case lang::Stmt::Kind::load:
        case lang::Stmt::Kind::store:
            return true;
        case lang::Stmt::Kind::branch:
        case lang::Stmt::Kind::loop:
            for (const auto& t : s->body)
                if (touches_pointers(t)) return true;
            for (const auto& t : s->else_body)
                if (touches_pointers(t)) return true;
            return false;
        default:
            return false;
    }
}

}  // namespace detail

// Index just past the last top-level statement that touches a pointer.
// Zero means the whole body is already synthesizer-clean.
inline std::size_t pointer_cut(const lang::Program& p) {
    std::size_t cut = 0;
    for (std::size_t i = 0; i < p.body.size(); ++i)
        if (detail::touches_pointers(p.body[i])) cut = i + 1;
    return cut;
}

// Tuples the exact feed would walk: the product of the input domain sizes.
// Pointer parameters hold addresses, not values, so they contribute no axis;
// their pointee cells do. Saturates at 2^63 so an overflowing product still
// compares sanely against any cap.
inline std::uint64_t input_count(const lang::Program& p, const classical::InputDomain& dom,
                                 int m) {
    constexpr std::uint64_t sat = std::uint64_t{1} << 63;
    std::uint64_t n = 1;
    for (const auto& prm : p.params) {
        const std::string cell = prm.pointer ? lang::pointee_cell(prm.name) : prm.name;
        std::uint64_t sz = classical::lookup(dom, cell).values(m).size();
        if (sz == 0) throw HybridError("empty domain for '" + cell + "'");
        n = (n > sat / sz) ? sat : n * sz;
    }
    return n;
}

// Splits p at `cut` and rejects cuts that leave pointer statements on the
// quantum side. The feed is exact when the input product fits under `cap`.
inline Plan plan_at(const lang::Program& p, const classical::InputDomain& dom, int m,
                    std::size_t cut, std::uint64_t cap) {
    Plan pl;
    pl.cut = cut;
    pl.parts = classical::split(p, cut);
    for (const auto& s : pl.parts.suffix.body)
        if (detail::touches_pointers(s))
            throw HybridError("cut at " + std::to_string(cut) +
                              " leaves pointer statements on the quantum side");
    pl.input_count = input_count(p, dom, m);
    pl.feed = pl.input_count <= cap ? Feed::tuples : Feed::intervals;
    return pl;
}

inline Plan plan(const lang::Program& p, const classical::InputDomain& dom, int m,
                 std::uint64_t cap = classical::default_cap) {
    return plan_at(p, dom, m, pointer_cut(p), cap);
}

}  // namespace qex::hybrid
