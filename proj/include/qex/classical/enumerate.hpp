#pragma once

// Brute-force enumeration over the input product space. Produces exact
// value distributions (integer counts over the product size), the
// ground truth the quantum results are compared against.

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "qex/classical/domain.hpp"
#include "qex/classical/interpret.hpp"

namespace qex::classical {

constexpr std::uint64_t default_cap = std::uint64_t{1} << 24;

// Exact distribution: counts over a common denominator `total`.
struct ValueDist {
    std::map<std::uint64_t, std::uint64_t> counts;
    std::uint64_t total = 0;

    std::vector<std::uint64_t> support() const {
        std::vector<std::uint64_t> out;
        out.reserve(counts.size());
        for (const auto& [v, c] : counts) out.push_back(v);
        return out;
    }
    bool operator==(const ValueDist& o) const = default;
};

struct JointDist {
    std::vector<std::string> vars;
    std::map<std::vector<std::uint64_t>, std::uint64_t> counts;
    std::uint64_t total = 0;
};

struct CapError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Enumeration {
    std::map<std::string, ValueDist> marginals;
    JointDist joint;  // filled when joint_vars was non-empty
    std::uint64_t total = 0;
};

// Enumerates p over dom. `targets` picks the variables whose marginals
// are collected (empty = every variable bound after the run).
// `joint_vars` optionally requests one joint distribution.
inline Enumeration enumerate(const lang::Program& p, const InputDomain& dom, int m,
                             std::vector<std::string> targets = {},
                             std::vector<std::string> joint_vars = {},
                             std::uint64_t cap = default_cap, unsigned threads = 0) {
    std::vector<std::string> inputs = input_vars(p);
    std::vector<std::vector<std::uint64_t>> values;
    std::uint64_t total = 1;
    for (const auto& v : inputs) {
        values.push_back(lookup(dom, v).values(m));
        std::uint64_t sz = values.back().size();
        if (sz == 0) throw DomainError("empty domain for '" + v + "'");
        if (total > cap / sz)
            throw CapError("input product exceeds cap (" + std::to_string(cap) + ")");
        total *= sz;
    }

    struct Acc {
        std::map<std::string, std::map<std::uint64_t, std::uint64_t>> marg;
        std::map<std::vector<std::uint64_t>, std::uint64_t> joint;
    };

    auto run_range = [&](std::uint64_t begin, std::uint64_t end, Acc& acc) {
        for (std::uint64_t idx = begin; idx < end; ++idx) {
            ConcreteEnv env;
            std::uint64_t rem = idx;
            for (size_t i = 0; i < inputs.size(); ++i) {
                const auto& vals = values[i];
                env.values[inputs[i]] = vals[rem % vals.size()];
                rem /= vals.size();
            }
            interpret(p, env, m);
            if (targets.empty()) {
                for (const auto& [name, val] : env.values) ++acc.marg[name][val];
            } else {
                for (const auto& t : targets) {
                    auto it = env.values.find(t);
                    if (it == env.values.end())
                        throw EvalError("target variable '" + t + "' never assigned");
                    ++acc.marg[t][it->second];
                }
            }
            if (!joint_vars.empty()) {
                std::vector<std::uint64_t> key;
                key.reserve(joint_vars.size());
                for (const auto& t : joint_vars) {
                    auto it = env.values.find(t);
                    if (it == env.values.end())
                        throw EvalError("joint variable '" + t + "' never assigned");
                    key.push_back(it->second);
                }
                ++acc.joint[key];
            }
        }
    };

    unsigned n_threads = threads ? threads : std::thread::hardware_concurrency();
    if (n_threads == 0) n_threads = 1;
    std::uint64_t chunk = total / n_threads + 1;
    if (n_threads <= 1 || total < 1024) {
        Acc acc;
        run_range(0, total, acc);
        Enumeration out;
        out.total = total;
        for (auto& [name, counts] : acc.marg) out.marginals[name] = {std::move(counts), total};
        if (!joint_vars.empty()) out.joint = {joint_vars, std::move(acc.joint), total};
        return out;
    }

    std::vector<Acc> accs(n_threads);
    std::vector<std::exception_ptr> errors(n_threads);
    std::vector<std::thread> workers;
    for (unsigned t = 0; t < n_threads; ++t) {
        std::uint64_t b = t * chunk, e = std::min(total, (t + 1) * chunk);
        if (b >= e) break;
        workers.emplace_back([&, b, e, t] {
            try {
                run_range(b, e, accs[t]);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto& w : workers) w.join();
    for (const auto& err : errors)
        if (err) std::rethrow_exception(err);

    // Merge in chunk order so results never depend on scheduling.
    Acc merged;
    for (const auto& acc : accs) {
        for (const auto& [name, counts] : acc.marg)
            for (const auto& [v, c] : counts) merged.marg[name][v] += c;
        for (const auto& [k, c] : acc.joint) merged.joint[k] += c;
    }
    Enumeration out;
    out.total = total;
    for (auto& [name, counts] : merged.marg) out.marginals[name] = {std::move(counts), total};
    if (!joint_vars.empty()) out.joint = {joint_vars, std::move(merged.joint), total};
    return out;
}

}  // namespace qex::classical
