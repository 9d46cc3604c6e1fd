#pragma once

// Distribution extraction and seeded sampling. When the state is uniform
// over its support (the ripple pipeline guarantees this), distributions are
// reported as exact integer counts so they can be compared against the
// classical enumerator without any float tolerance.

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "qex/classical/enumerate.hpp"
#include "qex/sim/state.hpp"

namespace qex::sim {

inline std::map<std::uint64_t, double> marginal(const SparseState& st, const circuit::Register& r) {
    std::map<std::uint64_t, double> probs;
    for (const auto& [k, a] : st.amps) probs[SparseState::decode(k, r)] += std::norm(a);
    return probs;
}

namespace detail {

inline void require_uniform(const SparseState& st) {
    const double expect = 1.0 / static_cast<double>(st.support());
    for (const auto& [k, a] : st.amps)
        if (std::abs(std::norm(a) - expect) > norm_eps)
            throw SimError("state is not uniform over its support; no exact rational form");
}

}  // namespace detail

// Exact counts over the support size. Throws when amplitudes are not uniform.
inline classical::ValueDist marginal_rational(const SparseState& st, const circuit::Register& r) {
    detail::require_uniform(st);
    classical::ValueDist d;
    d.total = st.support();
    for (const auto& [k, a] : st.amps) ++d.counts[SparseState::decode(k, r)];
    return d;
}

inline classical::JointDist joint_rational(const SparseState& st,
                                           const std::vector<circuit::Register>& regs) {
    detail::require_uniform(st);
    classical::JointDist d;
    for (const auto& r : regs) d.vars.push_back(r.name);
    d.total = st.support();
    for (const auto& [k, a] : st.amps) {
        std::vector<std::uint64_t> tuple;
        tuple.reserve(regs.size());
        for (const auto& r : regs) tuple.push_back(SparseState::decode(k, r));
        ++d.counts[tuple];
    }
    return d;
}

// Seeded i.i.d. draws from the joint distribution of `regs`. The support is
// walked in basis order so equal seeds give equal counts on every platform.
inline std::map<std::vector<std::uint64_t>, std::uint64_t> sample(
    const SparseState& st, const std::vector<circuit::Register>& regs, std::uint64_t shots,
    std::uint64_t seed) {
    if (shots == 0) throw SimError("sample needs at least one shot");
    std::vector<std::pair<std::string, double>> cdf;
    cdf.reserve(st.support());
    for (const auto& [k, a] : st.amps) cdf.emplace_back(k, std::norm(a));
    std::sort(cdf.begin(), cdf.end());
    double acc = 0.0;
    for (auto& [k, p] : cdf) {
        acc += p;
        p = acc;
    }
    std::mt19937_64 rng(seed);
    std::map<std::vector<std::uint64_t>, std::uint64_t> counts;
    for (std::uint64_t s = 0; s < shots; ++s) {
        const double u = std::ldexp(static_cast<double>(rng()), -64);
        size_t lo = 0, hi = cdf.size() - 1;
        while (lo < hi) {
            size_t mid = (lo + hi) / 2;
            if (cdf[mid].second <= u)
                lo = mid + 1;
            else
                hi = mid;
        }
        std::vector<std::uint64_t> tuple;
        tuple.reserve(regs.size());
        for (const auto& r : regs) tuple.push_back(SparseState::decode(cdf[lo].first, r));
        ++counts[tuple];
    }
    return counts;
}

inline nlohmann::json dump_json(const SparseState& st) {
    std::vector<std::string> keys;
    keys.reserve(st.support());
    for (const auto& [k, a] : st.amps) keys.push_back(k);
    std::sort(keys.begin(), keys.end());
    nlohmann::json out = nlohmann::json::array();
    for (const auto& k : keys) {
        const Amplitude a = st.amps.at(k);
        out.push_back({{"basis", k}, {"re", a.real()}, {"im", a.imag()}});
    }
    return out;
}

inline nlohmann::json dist_json(const classical::ValueDist& d) {
    nlohmann::json out = nlohmann::json::object();
    for (const auto& [v, c] : d.counts)
        out[std::to_string(v)] = {{"num", c}, {"den", d.total}};
    return out;
}

}  // namespace qex::sim
