#pragma once

// Exact sparse statevector simulation over the circuit IR. Basis states are
// kept as bitstrings keyed by qubit index, so permutation-style gates move
// amplitudes around without any floating point drift.

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "qex/circuit/circuit.hpp"

namespace qex::sim {

struct SimError : std::runtime_error {
    explicit SimError(const std::string& msg) : std::runtime_error(msg) {}
};

inline constexpr double prune_eps = 1e-12;
inline constexpr double norm_eps = 1e-9;

using Amplitude = std::complex<double>;

struct SparseState {
    int qubits = 0;
    // key[q] is '0' or '1' for qubit q
    std::unordered_map<std::string, Amplitude> amps;

    double norm_sq() const {
        double s = 0.0;
        for (const auto& [k, a] : amps) s += std::norm(a);
        return s;
    }

    size_t support() const { return amps.size(); }

    // Value held by a register on one basis string, least significant first.
    static std::uint64_t decode(const std::string& key, const circuit::Register& r) {
        std::uint64_t v = 0;
        for (size_t i = 0; i < r.qubits.size(); ++i)
            if (key[static_cast<size_t>(r.qubits[i])] == '1') v |= std::uint64_t{1} << i;
        return v;
    }

    void prune() {
        for (auto it = amps.begin(); it != amps.end();) {
            if (std::abs(it->second) < prune_eps)
                it = amps.erase(it);
            else
                ++it;
        }
    }
};

// One register initialized to a uniform superposition over `values`
// (a single value gives a basis state).
struct InitSpec {
    circuit::Register reg;
    std::vector<std::uint64_t> values;
};

inline void write_value(std::string& key, const circuit::Register& r, std::uint64_t v) {
    if (r.width() < 64 && v >> r.width())
        throw SimError("value " + std::to_string(v) + " does not fit register '" + r.name + "'");
    for (size_t i = 0; i < r.qubits.size(); ++i)
        key[static_cast<size_t>(r.qubits[i])] = (v >> i) & 1 ? '1' : '0';
}

inline SparseState init(int qubits, const std::vector<InitSpec>& specs) {
    std::vector<bool> used(static_cast<size_t>(qubits), false);
    for (const auto& s : specs) {
        if (s.values.empty()) throw SimError("empty value set for register '" + s.reg.name + "'");
        for (int q : s.reg.qubits) {
            if (q < 0 || q >= qubits) throw SimError("init register qubit out of range");
            if (used[static_cast<size_t>(q)])
                throw SimError("init registers overlap on qubit " + std::to_string(q));
            used[static_cast<size_t>(q)] = true;
        }
    }
    std::vector<std::string> keys{std::string(static_cast<size_t>(qubits), '0')};
    for (const auto& s : specs) {
        std::vector<std::string> next;
        next.reserve(keys.size() * s.values.size());
        for (const auto& k : keys) {
            for (std::uint64_t v : s.values) {
                std::string k2 = k;
                write_value(k2, s.reg, v);
                next.push_back(std::move(k2));
            }
        }
        keys = std::move(next);
    }
    SparseState st;
    st.qubits = qubits;
    const Amplitude a{1.0 / std::sqrt(static_cast<double>(keys.size())), 0.0};
    st.amps.reserve(keys.size());
    for (auto& k : keys) st.amps.emplace(std::move(k), a);
    return st;
}

// Joint initialization: one uniform term per value tuple, preserving
// cross-register correlations (used by the hybrid feed-forward path).
inline SparseState init_joint(int qubits, const std::vector<circuit::Register>& regs,
                              const std::vector<std::vector<std::uint64_t>>& tuples) {
    if (tuples.empty()) throw SimError("joint init needs at least one tuple");
    SparseState st;
    st.qubits = qubits;
    const Amplitude a{1.0 / std::sqrt(static_cast<double>(tuples.size())), 0.0};
    for (const auto& t : tuples) {
        if (t.size() != regs.size()) throw SimError("joint init tuple arity mismatch");
        std::string key(static_cast<size_t>(qubits), '0');
        for (size_t i = 0; i < regs.size(); ++i) write_value(key, regs[i], t[i]);
        auto [it, fresh] = st.amps.emplace(std::move(key), a);
        if (!fresh) throw SimError("joint init tuples collide on a basis state");
    }
    return st;
}

namespace detail {

inline bool controls_on(const std::string& key, const std::vector<int>& controls) {
    for (int c : controls)
        if (key[static_cast<size_t>(c)] != '1') return false;
    return true;
}

}  // namespace detail

inline void apply(SparseState& st, const circuit::Gate& g) {
    using circuit::Kind;
    for (int q : g.controls)
        if (q < 0 || q >= st.qubits) throw SimError("gate control out of range");
    for (int q : g.targets)
        if (q < 0 || q >= st.qubits) throw SimError("gate target out of range");

    switch (g.kind) {
        case Kind::x:
        case Kind::cx:
        case Kind::ccx:
        case Kind::mcx: {
            const size_t t = static_cast<size_t>(g.targets[0]);
            std::unordered_map<std::string, Amplitude> next;
            next.reserve(st.amps.size());
            for (auto& [k, a] : st.amps) {
                std::string k2 = k;
                if (detail::controls_on(k2, g.controls)) k2[t] = k2[t] == '0' ? '1' : '0';
                next.emplace(std::move(k2), a);
            }
            st.amps = std::move(next);
            return;
        }
        case Kind::swap_pair:
        case Kind::cswap: {
            const size_t ta = static_cast<size_t>(g.targets[0]);
            const size_t tb = static_cast<size_t>(g.targets[1]);
            std::unordered_map<std::string, Amplitude> next;
            next.reserve(st.amps.size());
            for (auto& [k, a] : st.amps) {
                std::string k2 = k;
                if (detail::controls_on(k2, g.controls)) std::swap(k2[ta], k2[tb]);
                next.emplace(std::move(k2), a);
            }
            st.amps = std::move(next);
            return;
        }
        case Kind::phase:
        case Kind::cphase: {
            const size_t t = static_cast<size_t>(g.targets[0]);
            const Amplitude rot = std::polar(1.0, g.params[0]);
            for (auto& [k, a] : st.amps)
                if (k[t] == '1' && detail::controls_on(k, g.controls)) a *= rot;
            return;
        }
        case Kind::h: {
            const size_t t = static_cast<size_t>(g.targets[0]);
            const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
            std::unordered_map<std::string, Amplitude> next;
            next.reserve(st.amps.size() * 2);
            for (const auto& [k, a] : st.amps) {
                std::string k0 = k, k1 = k;
                k0[t] = '0';
                k1[t] = '1';
                if (k[t] == '0') {
                    next[k0] += a * inv_sqrt2;
                    next[k1] += a * inv_sqrt2;
                } else {
                    next[k0] += a * inv_sqrt2;
                    next[k1] -= a * inv_sqrt2;
                }
            }
            st.amps = std::move(next);
            st.prune();
            return;
        }
        case Kind::u3: {
            const size_t t = static_cast<size_t>(g.targets[0]);
            const double th = g.params[0], ph = g.params[1], la = g.params[2];
            const double c = std::cos(th / 2.0), s = std::sin(th / 2.0);
            // column |0>: (c, e^{i phi} s); column |1>: (-e^{i la} s, e^{i(phi+la)} c)
            const Amplitude m00{c, 0.0};
            const Amplitude m10 = std::polar(s, ph);
            const Amplitude m01 = -std::polar(s, la);
            const Amplitude m11 = std::polar(c, ph + la);
            std::unordered_map<std::string, Amplitude> next;
            next.reserve(st.amps.size() * 2);
            for (const auto& [k, a] : st.amps) {
                std::string k0 = k, k1 = k;
                k0[t] = '0';
                k1[t] = '1';
                if (k[t] == '0') {
                    next[k0] += a * m00;
                    next[k1] += a * m10;
                } else {
                    next[k0] += a * m01;
                    next[k1] += a * m11;
                }
            }
            st.amps = std::move(next);
            st.prune();
            return;
        }
    }
    throw SimError("unsupported gate kind");
}

inline SparseState run(const circuit::Circuit& c, SparseState st) {
    if (c.qubits != st.qubits)
        throw SimError("circuit acts on " + std::to_string(c.qubits) + " qubits but state has " +
                       std::to_string(st.qubits));
    for (const auto& g : c.gates) {
        apply(st, g);
        if (std::abs(st.norm_sq() - 1.0) > norm_eps)
            throw SimError("state norm drifted past tolerance");
    }
    return st;
}

}  // namespace qex::sim
