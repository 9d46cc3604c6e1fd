#pragma once

// Circuit serialization. JSON round-trips exactly; the QASM-like text form
// is export-only.

#include <sstream>
#include <string>

#include <json.hpp>

#include "qex/circuit/circuit.hpp"

namespace qex::circuit {

inline nlohmann::json to_json(const Circuit& c) {
    nlohmann::json j;
    j["qubits"] = c.qubits;
    j["registers"] = nlohmann::json::array();
    for (const auto& r : c.registers)
        j["registers"].push_back({{"name", r.name}, {"role", role_name(r.role)}, {"qubits", r.qubits}});
    j["gates"] = nlohmann::json::array();
    for (const auto& g : c.gates) {
        nlohmann::json jg;
        jg["kind"] = kind_name(g.kind);
        if (!g.controls.empty()) jg["controls"] = g.controls;
        jg["targets"] = g.targets;
        if (!g.params.empty()) jg["params"] = g.params;
        if (g.src >= 0) jg["src"] = std::to_string(g.src);
        j["gates"].push_back(std::move(jg));
    }
    return j;
}

inline Circuit from_json(const nlohmann::json& j) {
    Circuit c;
    if (!j.is_object() || !j.contains("qubits"))
        throw CircuitError("circuit json: missing 'qubits'");
    c.qubits = j.at("qubits").get<int>();
    if (c.qubits < 0) throw CircuitError("circuit json: negative qubit count");
    if (j.contains("registers")) {
        for (const auto& jr : j.at("registers"))
            c.add_register_view(jr.at("name").get<std::string>(),
                                jr.at("qubits").get<std::vector<int>>(),
                                role_from(jr.at("role").get<std::string>()));
    }
    if (j.contains("gates")) {
        size_t pos = 0;
        for (const auto& jg : j.at("gates")) {
            Gate g;
            g.kind = kind_from(jg.at("kind").get<std::string>());
            if (jg.contains("controls")) g.controls = jg.at("controls").get<std::vector<int>>();
            g.targets = jg.at("targets").get<std::vector<int>>();
            if (jg.contains("params")) g.params = jg.at("params").get<std::vector<double>>();
            if (jg.contains("src")) g.src = std::stoi(jg.at("src").get<std::string>());
            try {
                c.append(std::move(g));
            } catch (const CircuitError& e) {
                throw CircuitError("circuit json: gate " + std::to_string(pos) + ": " + e.what());
            }
            ++pos;
        }
    }
    return c;
}

inline std::string export_json(const Circuit& c) { return to_json(c).dump(2); }

inline Circuit import_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text, nullptr, true, true);
    return from_json(j);
}

// One gate per line, `ccx q[0],q[1],q[2];` style. Controls precede targets.
inline std::string export_text(const Circuit& c) {
    std::ostringstream out;
    out << "qubits " << c.qubits << ";\n";
    for (const auto& g : c.gates) {
        std::string mnemonic;
        switch (g.kind) {
            case Kind::h: mnemonic = "h"; break;
            case Kind::x: mnemonic = "x"; break;
            case Kind::cx: mnemonic = "cx"; break;
            case Kind::ccx: mnemonic = "ccx"; break;
            case Kind::mcx: mnemonic = "mcx"; break;
            case Kind::swap_pair: mnemonic = "swap"; break;
            case Kind::cswap: mnemonic = "cswap"; break;
            case Kind::phase: mnemonic = "p"; break;
            case Kind::cphase: mnemonic = "cp"; break;
            case Kind::u3: mnemonic = "u3"; break;
        }
        out << mnemonic;
        if (!g.params.empty()) {
            out << "(";
            for (size_t i = 0; i < g.params.size(); ++i) {
                if (i) out << ",";
                std::ostringstream p;
                p.precision(17);
                p << g.params[i];
                out << p.str();
            }
            out << ")";
        }
        out << " ";
        bool first = true;
        for (int q : g.controls) {
            if (!first) out << ",";
            out << "q[" << q << "]";
            first = false;
        }
        for (int q : g.targets) {
            if (!first) out << ",";
            out << "q[" << q << "]";
            first = false;
        }
        out << ";\n";
    }
    return out.str();
}

}  // namespace qex::circuit
