#pragma once

// Input domains: each program input is "full", an interval, or an
// explicit value set. JSON form:
//   {"x": "full", "y": {"interval": [2, 9]}, "z": {"set": [1, 3, 5]}}

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "qex/lang/ast.hpp"

namespace qex::classical {

struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct VarDomain {
    enum class Kind { full, interval, set };
    Kind kind = Kind::full;
    std::uint64_t lo = 0, hi = 0;        // interval
    std::vector<std::uint64_t> values_;  // set (sorted, unique)

    static VarDomain full() { return {}; }
    static VarDomain interval(std::uint64_t lo, std::uint64_t hi) {
        VarDomain d;
        d.kind = Kind::interval;
        d.lo = lo;
        d.hi = hi;
        return d;
    }
    static VarDomain set(std::vector<std::uint64_t> vs) {
        VarDomain d;
        d.kind = Kind::set;
        std::sort(vs.begin(), vs.end());
        vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
        d.values_ = std::move(vs);
        return d;
    }

    // Concrete values at width m. Full means [0, 2^m - 1]; intervals and
    // sets may reach the extra bit, up to 2^(m+1) - 1.
    std::vector<std::uint64_t> values(int m) const {
        std::uint64_t cell_max = (std::uint64_t{1} << (m + 1)) - 1;
        std::vector<std::uint64_t> out;
        switch (kind) {
            case Kind::full: {
                std::uint64_t top = (std::uint64_t{1} << m) - 1;
                out.reserve(top + 1);
                for (std::uint64_t v = 0; v <= top; ++v) out.push_back(v);
                return out;
            }
            case Kind::interval:
                if (lo > hi) throw DomainError("empty interval domain");
                if (hi > cell_max) throw DomainError("interval exceeds representable range");
                out.reserve(hi - lo + 1);
                for (std::uint64_t v = lo; v <= hi; ++v) out.push_back(v);
                return out;
            case Kind::set:
                if (values_.empty()) throw DomainError("empty set domain");
                for (auto v : values_)
                    if (v > cell_max) throw DomainError("set value exceeds representable range");
                return values_;
        }
        return out;
    }

    std::uint64_t size(int m) const {
        switch (kind) {
            case Kind::full: return std::uint64_t{1} << m;
            case Kind::interval: return hi - lo + 1;
            case Kind::set: return values_.size();
        }
        return 0;
    }
};

// Variable name -> domain. Variables without an entry default to full.
using InputDomain = std::map<std::string, VarDomain>;

inline InputDomain domain_from_json(const nlohmann::json& j) {
    InputDomain dom;
    if (!j.is_object()) throw DomainError("domain file must be a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        const auto& v = it.value();
        if (v.is_string()) {
            if (v.get<std::string>() != "full")
                throw DomainError("unknown domain kind '" + v.get<std::string>() + "'");
            dom[it.key()] = VarDomain::full();
        } else if (v.is_object() && v.contains("interval")) {
            auto iv = v["interval"];
            if (!iv.is_array() || iv.size() != 2)
                throw DomainError("interval must be [lo, hi]");
            dom[it.key()] = VarDomain::interval(iv[0].get<std::uint64_t>(),
                                                iv[1].get<std::uint64_t>());
        } else if (v.is_object() && v.contains("set")) {
            auto sv = v["set"];
            if (!sv.is_array() || sv.empty()) throw DomainError("set must be a non-empty array");
            std::vector<std::uint64_t> vals;
            for (const auto& x : sv) vals.push_back(x.get<std::uint64_t>());
            dom[it.key()] = VarDomain::set(std::move(vals));
        } else {
            throw DomainError("malformed domain for '" + it.key() + "'");
        }
    }
    return dom;
}

inline nlohmann::json domain_to_json(const InputDomain& dom) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [name, d] : dom) {
        switch (d.kind) {
            case VarDomain::Kind::full: j[name] = "full"; break;
            case VarDomain::Kind::interval: j[name] = {{"interval", {d.lo, d.hi}}}; break;
            case VarDomain::Kind::set: j[name] = {{"set", d.values_}}; break;
        }
    }
    return j;
}

// Input variables of a program in deterministic order: value parameters,
// then the implicit pointee cell of each pointer parameter.
inline std::vector<std::string> input_vars(const lang::Program& p) {
    std::vector<std::string> out;
    for (const auto& prm : p.params) {
        out.push_back(prm.name);
        if (prm.pointer) out.push_back(lang::pointee_cell(prm.name));
    }
    return out;
}

inline VarDomain lookup(const InputDomain& dom, const std::string& var) {
    auto it = dom.find(var);
    if (it != dom.end()) return it->second;
    // Pointee cells start at zero unless a domain says otherwise.
    if (!var.empty() && var.front() == '*') return VarDomain::set({0});
    return VarDomain::full();
}

}  // namespace qex::classical
