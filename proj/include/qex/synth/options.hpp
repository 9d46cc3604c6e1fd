#pragma once

// Knobs for circuit synthesis. Width m is the literal width; registers
// carry m value bits plus one sign bit so arithmetic runs mod 2^(m+1).

#include <stdexcept>
#include <string>

namespace qex::synth {

struct SynthError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Backend { ripple, fourier };

inline std::string backend_name(Backend b) {
    return b == Backend::ripple ? "ripple" : "fourier";
}

inline Backend backend_from(const std::string& s) {
    if (s == "ripple") return Backend::ripple;
    if (s == "fourier") return Backend::fourier;
    throw SynthError("unknown backend '" + s + "'");
}

struct SynthOptions {
    int m = 3;               // literal width in bits
    int k = 8;               // loop unrolling bound
    Backend backend = Backend::ripple;

    // Optimizations. All default off; the plain pipeline allocates a
    // fresh register per value and keeps every scratch bit live.
    bool uncompute = false;         // invert predicate scratch, pool and reuse it
    bool share_immediates = false;  // one immediate register, morphed between uses
    bool parallel_copy = false;     // duplicate shared reads so branch arms interleave

    int qubit_cap = 4096;    // hard ceiling on allocated qubits

    int width() const { return m + 1; }  // register width incl. sign bit
};

}  // namespace qex::synth
