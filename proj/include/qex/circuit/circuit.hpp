#pragma once

// Quantum circuit intermediate representation: registers over globally
// indexed qubits, a flat gate list, composition, inversion and metrics.

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace qex::circuit {

struct CircuitError : std::runtime_error {
    explicit CircuitError(const std::string& msg) : std::runtime_error(msg) {}
};

enum class Role { value, sign, control, immediate, scratch };

inline std::string role_name(Role r) {
    switch (r) {
        case Role::value: return "value";
        case Role::sign: return "sign";
        case Role::control: return "control";
        case Role::immediate: return "immediate";
        case Role::scratch: return "scratch";
    }
    throw CircuitError("bad role");
}

inline Role role_from(const std::string& s) {
    if (s == "value") return Role::value;
    if (s == "sign") return Role::sign;
    if (s == "control") return Role::control;
    if (s == "immediate") return Role::immediate;
    if (s == "scratch") return Role::scratch;
    throw CircuitError("unknown register role '" + s + "'");
}

// A register is a named view over qubit indices, least significant first.
struct Register {
    std::string name;
    std::vector<int> qubits;
    Role role = Role::scratch;

    int width() const { return static_cast<int>(qubits.size()); }
    bool operator==(const Register&) const = default;
};

enum class Kind { h, x, cx, ccx, mcx, swap_pair, cswap, phase, cphase, u3 };

inline std::string kind_name(Kind k) {
    switch (k) {
        case Kind::h: return "H";
        case Kind::x: return "X";
        case Kind::cx: return "CX";
        case Kind::ccx: return "CCX";
        case Kind::mcx: return "MCX";
        case Kind::swap_pair: return "SWAP";
        case Kind::cswap: return "CSWAP";
        case Kind::phase: return "PHASE";
        case Kind::cphase: return "CPHASE";
        case Kind::u3: return "U3";
    }
    throw CircuitError("bad gate kind");
}

inline Kind kind_from(const std::string& s) {
    if (s == "H") return Kind::h;
    if (s == "X") return Kind::x;
    if (s == "CX") return Kind::cx;
    if (s == "CCX") return Kind::ccx;
    if (s == "MCX") return Kind::mcx;
    if (s == "SWAP") return Kind::swap_pair;
    if (s == "CSWAP") return Kind::cswap;
    if (s == "PHASE") return Kind::phase;
    if (s == "CPHASE") return Kind::cphase;
    if (s == "U3") return Kind::u3;
    throw CircuitError("unknown gate kind '" + s + "'");
}

struct Gate {
    Kind kind;
    std::vector<int> controls;
    std::vector<int> targets;
    std::vector<double> params;
    int src = -1;  // id of the source statement this gate interprets

    bool operator==(const Gate&) const = default;
};

inline Gate h(int q) { return {Kind::h, {}, {q}, {}, -1}; }
inline Gate x(int q) { return {Kind::x, {}, {q}, {}, -1}; }
inline Gate cx(int c, int t) { return {Kind::cx, {c}, {t}, {}, -1}; }
inline Gate ccx(int c1, int c2, int t) { return {Kind::ccx, {c1, c2}, {t}, {}, -1}; }
inline Gate mcx(std::vector<int> cs, int t) { return {Kind::mcx, std::move(cs), {t}, {}, -1}; }
inline Gate swap_pair(int a, int b) { return {Kind::swap_pair, {}, {a, b}, {}, -1}; }
inline Gate cswap(int c, int a, int b) { return {Kind::cswap, {c}, {a, b}, {}, -1}; }
inline Gate phase(int q, double theta) { return {Kind::phase, {}, {q}, {theta}, -1}; }
inline Gate cphase(int c, int t, double theta) { return {Kind::cphase, {c}, {t}, {theta}, -1}; }
inline Gate u3(int q, double theta, double phi, double lambda) {
    return {Kind::u3, {}, {q}, {theta, phi, lambda}, -1};
}

inline void check_shape(const Gate& g) {
    size_t nc = g.controls.size(), nt = g.targets.size(), np = g.params.size();
    auto want = [&](size_t c, size_t t, size_t p) {
        if (nc != c || nt != t || np != p)
            throw CircuitError(kind_name(g.kind) + " gate has wrong operand shape");
    };
    switch (g.kind) {
        case Kind::h:
        case Kind::x: want(0, 1, 0); break;
        case Kind::cx: want(1, 1, 0); break;
        case Kind::ccx: want(2, 1, 0); break;
        case Kind::mcx:
            if (nc < 1 || nt != 1 || np != 0) throw CircuitError("MCX gate has wrong operand shape");
            break;
        case Kind::swap_pair: want(0, 2, 0); break;
        case Kind::cswap: want(1, 2, 0); break;
        case Kind::phase: want(0, 1, 1); break;
        case Kind::cphase: want(1, 1, 1); break;
        case Kind::u3: want(0, 1, 3); break;
    }
    std::set<int> seen;
    for (int q : g.controls) {
        if (!seen.insert(q).second) throw CircuitError("duplicate qubit in gate");
    }
    for (int q : g.targets) {
        if (!seen.insert(q).second)
            throw CircuitError("controls and targets of a gate must be disjoint");
    }
}

inline Gate inverse_of(Gate g) {
    switch (g.kind) {
        case Kind::phase:
        case Kind::cphase:
            g.params[0] = -g.params[0];
            return g;
        case Kind::u3: {
            double th = g.params[0], ph = g.params[1], la = g.params[2];
            g.params = {-th, -la, -ph};
            return g;
        }
        default:
            return g;  // self inverse
    }
}

struct Circuit {
    int qubits = 0;
    std::vector<Register> registers;
    std::vector<Gate> gates;

    // Allocates `width` fresh qubits at the top of the index space.
    Register& add_register(const std::string& name, int width, Role role) {
        if (width <= 0) throw CircuitError("register width must be positive");
        if (find_register(name)) throw CircuitError("duplicate register name '" + name + "'");
        Register r{name, {}, role};
        for (int i = 0; i < width; ++i) r.qubits.push_back(qubits + i);
        qubits += width;
        registers.push_back(std::move(r));
        return registers.back();
    }

    // Installs a register as a view over explicit qubit indices (import path).
    Register& add_register_view(const std::string& name, std::vector<int> qs, Role role) {
        if (find_register(name)) throw CircuitError("duplicate register name '" + name + "'");
        std::set<int> used;
        for (const auto& r : registers) used.insert(r.qubits.begin(), r.qubits.end());
        for (int q : qs) {
            if (q < 0 || q >= qubits) throw CircuitError("register qubit out of range");
            if (!used.insert(q).second)
                throw CircuitError("register '" + name + "' overlaps another register");
        }
        registers.push_back(Register{name, std::move(qs), role});
        return registers.back();
    }

    const Register* find_register(const std::string& name) const {
        for (const auto& r : registers)
            if (r.name == name) return &r;
        return nullptr;
    }

    const Register& reg(const std::string& name) const {
        const Register* r = find_register(name);
        if (!r) throw CircuitError("no register named '" + name + "'");
        return *r;
    }

    void append(Gate g) {
        check_shape(g);
        for (int q : g.controls)
            if (q < 0 || q >= qubits) throw CircuitError("gate control out of range");
        for (int q : g.targets)
            if (q < 0 || q >= qubits) throw CircuitError("gate target out of range");
        gates.push_back(std::move(g));
    }

    void append_all(const std::vector<Gate>& gs) {
        for (const auto& g : gs) append(g);
    }

    size_t gate_count() const { return gates.size(); }

    std::map<std::string, size_t> gate_histogram() const {
        std::map<std::string, size_t> h;
        for (const auto& g : gates) ++h[kind_name(g.kind)];
        return h;
    }

    // Greedy front-to-back layering: a gate joins the earliest layer after
    // every layer that touches one of its qubits.
    int depth() const {
        std::vector<int> busy(qubits, 0);
        int layers = 0;
        for (const auto& g : gates) {
            int level = 0;
            for (int q : g.controls) level = std::max(level, busy[q]);
            for (int q : g.targets) level = std::max(level, busy[q]);
            ++level;
            for (int q : g.controls) busy[q] = level;
            for (int q : g.targets) busy[q] = level;
            layers = std::max(layers, level);
        }
        return layers;
    }

    Circuit inverted() const {
        Circuit inv;
        inv.qubits = qubits;
        inv.registers = registers;
        inv.gates.reserve(gates.size());
        for (auto it = gates.rbegin(); it != gates.rend(); ++it) inv.gates.push_back(inverse_of(*it));
        return inv;
    }

    bool operator==(const Circuit&) const = default;
};

// Appends b's gates to a copy of a. `wiring` maps register names of b to
// register names of a; unwired registers of b are allocated fresh. Qubits of
// b outside any register are also allocated fresh.
inline Circuit compose(const Circuit& a, const Circuit& b,
                       const std::map<std::string, std::string>& wiring = {}) {
    Circuit out = a;
    std::vector<int> remap(b.qubits, -1);
    for (const auto& br : b.registers) {
        auto it = wiring.find(br.name);
        if (it != wiring.end()) {
            const Register& ar = out.reg(it->second);
            if (ar.width() != br.width())
                throw CircuitError("wiring width mismatch on register '" + br.name + "'");
            for (int i = 0; i < br.width(); ++i) remap[br.qubits[i]] = ar.qubits[i];
        } else {
            std::string name = br.name;
            for (int suffix = 2; out.find_register(name); ++suffix)
                name = br.name + "#" + std::to_string(suffix);
            const Register& fresh = out.add_register(name, br.width(), br.role);
            for (int i = 0; i < br.width(); ++i) remap[br.qubits[i]] = fresh.qubits[i];
        }
    }
    for (int q = 0; q < b.qubits; ++q) {
        if (remap[q] < 0) {
            remap[q] = out.qubits;
            ++out.qubits;
        }
    }
    for (Gate g : b.gates) {
        for (int& q : g.controls) q = remap[q];
        for (int& q : g.targets) q = remap[q];
        out.append(std::move(g));
    }
    return out;
}

}  // namespace qex::circuit
