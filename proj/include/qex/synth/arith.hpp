#pragma once

// Reversible arithmetic blocks. Every emitter writes plain gates through
// an Emitter, which can lift the whole block under extra controls and
// stamps each gate with the statement id it came from. Qubit vectors are
// least significant first; operands are always preserved.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "qex/circuit/circuit.hpp"
#include "qex/synth/options.hpp"

namespace qex::synth {

// Routes gates into a circuit, adding lift controls to each one. Only
// gates from {X, CX, CCX, MCX, SWAP, CSWAP} can be lifted; a lifted
// phase-family gate has no representation in the gate set and throws.
struct Emitter {
    circuit::Circuit& c;
    std::vector<int> lift;
    int src = -1;

    Emitter with(int extra_control) const {
        Emitter e{c, lift, src};
        e.lift.push_back(extra_control);
        return e;
    }

    void g(circuit::Gate gate) {
        if (gate.src == -1) gate.src = src;
        if (lift.empty()) {
            c.append(std::move(gate));
            return;
        }
        using K = circuit::Kind;
        switch (gate.kind) {
            case K::x:
            case K::cx:
            case K::ccx:
            case K::mcx: {
                std::vector<int> cs = lift;
                cs.insert(cs.end(), gate.controls.begin(), gate.controls.end());
                c.append(make_mcx_like(std::move(cs), gate.targets[0], gate.src));
                return;
            }
            case K::swap_pair:
            case K::cswap: {
                // swap(a,b) = cx(b,a); ccx(a...,b); cx(b,a), with the
                // middle gate picking up the lift and any swap control.
                std::vector<int> cs = lift;
                cs.insert(cs.end(), gate.controls.begin(), gate.controls.end());
                int a = gate.targets[0], b = gate.targets[1];
                cs.push_back(a);
                circuit::Gate pre = circuit::cx(b, a);
                pre.src = gate.src;
                c.append(pre);
                c.append(make_mcx_like(std::move(cs), b, gate.src));
                c.append(pre);
                return;
            }
            default:
                throw SynthError("gate kind '" + circuit::kind_name(gate.kind) +
                                 "' cannot be placed under branch controls");
        }
    }

    void all(const std::vector<circuit::Gate>& gs) {
        for (const auto& gate : gs) g(gate);
    }

  private:
    static circuit::Gate make_mcx_like(std::vector<int> cs, int t, int src) {
        circuit::Gate out = cs.size() == 1   ? circuit::cx(cs[0], t)
                            : cs.size() == 2 ? circuit::ccx(cs[0], cs[1], t)
                                             : circuit::mcx(std::move(cs), t);
        out.src = src;
        return out;
    }
};

namespace rev {

// r := a + b mod 2^w into a fresh zeroed register; a and b preserved.
// Each non-final bit runs the five gate carry block; the final bit only
// needs the three gate sum since its carry is discarded. 5w-2 gates.
inline void add_into(Emitter& em, const std::vector<int>& a, const std::vector<int>& b,
                     const std::vector<int>& r) {
    const int w = static_cast<int>(a.size());
    for (int i = 0; i < w; ++i) {
        if (i + 1 < w) {
            em.g(circuit::ccx(a[i], b[i], r[i + 1]));
            em.g(circuit::cx(a[i], b[i]));
            em.g(circuit::ccx(b[i], r[i], r[i + 1]));
            em.g(circuit::cx(b[i], r[i]));
            em.g(circuit::cx(a[i], b[i]));
        } else {
            em.g(circuit::cx(a[i], b[i]));
            em.g(circuit::cx(b[i], r[i]));
            em.g(circuit::cx(a[i], b[i]));
        }
    }
}

// r := a + b mod 2^w with the carry-out landing on `carry`. 5w gates.
inline void add_carry_into(Emitter& em, const std::vector<int>& a, const std::vector<int>& b,
                           const std::vector<int>& r, int carry) {
    const int w = static_cast<int>(a.size());
    for (int i = 0; i < w; ++i) {
        int hi = i + 1 < w ? r[i + 1] : carry;
        em.g(circuit::ccx(a[i], b[i], hi));
        em.g(circuit::cx(a[i], b[i]));
        em.g(circuit::ccx(b[i], r[i], hi));
        em.g(circuit::cx(b[i], r[i]));
        em.g(circuit::cx(a[i], b[i]));
    }
}

// r := a - b mod 2^w via r = ~(~a + b); a and b preserved.
inline void sub_into(Emitter& em, const std::vector<int>& a, const std::vector<int>& b,
                     const std::vector<int>& r) {
    for (int q : a) em.g(circuit::x(q));
    add_into(em, a, b, r);
    for (int q : a) em.g(circuit::x(q));
    for (int q : r) em.g(circuit::x(q));
}

// diff := a - b mod 2^w and borrow := [a < b]; the borrow is exactly the
// carry-out of ~a + b, so it needs no final correction.
inline void sub_borrow_into(Emitter& em, const std::vector<int>& a, const std::vector<int>& b,
                            const std::vector<int>& diff, int borrow) {
    for (int q : a) em.g(circuit::x(q));
    add_carry_into(em, a, b, diff, borrow);
    for (int q : a) em.g(circuit::x(q));
    for (int q : diff) em.g(circuit::x(q));
}

// target := target + operand mod 2^w, in place. Carries ride the operand
// wires (restored on the way back down); anc is the borrowed carry-in
// seat and comes back zero. 6w gates.
inline void add_inplace(Emitter& em, const std::vector<int>& target,
                        const std::vector<int>& operand, int anc) {
    const int w = static_cast<int>(target.size());
    auto carry = [&](int i) { return i == 0 ? anc : operand[i - 1]; };
    for (int i = 0; i < w; ++i) {
        em.g(circuit::cx(operand[i], target[i]));
        em.g(circuit::cx(operand[i], carry(i)));
        em.g(circuit::ccx(carry(i), target[i], operand[i]));
    }
    for (int i = w - 1; i >= 0; --i) {
        em.g(circuit::ccx(carry(i), target[i], operand[i]));
        em.g(circuit::cx(operand[i], carry(i)));
        em.g(circuit::cx(carry(i), target[i]));
    }
}

// target := target - operand mod 2^w, in place (complement conjugation).
inline void sub_inplace(Emitter& em, const std::vector<int>& target,
                        const std::vector<int>& operand, int anc) {
    for (int q : target) em.g(circuit::x(q));
    add_inplace(em, target, operand, anc);
    for (int q : target) em.g(circuit::x(q));
}

// r := a * b mod 2^w into a fresh zeroed register: for each set bit of b,
// add the correspondingly shifted slice of a into the upper slice of r.
inline void mul_into(Emitter& em, const std::vector<int>& a, const std::vector<int>& b,
                     const std::vector<int>& r, int anc) {
    const int w = static_cast<int>(a.size());
    for (int i = 0; i < w; ++i) {
        std::vector<int> dst(r.begin() + i, r.end());
        std::vector<int> src(a.begin(), a.begin() + (w - i));
        Emitter lifted = em.with(b[i]);
        add_inplace(lifted, dst, src, anc);
    }
}

// q := a / b mod 2^w by restoring long division, with q := 0 when b is 0.
// rem (w+1 wide) and bank (w wide) start zeroed and keep their garbage;
// bz starts zeroed and is returned to zero; bpad is a shared zero qubit
// that width-extends b and is only read; anc as in add_inplace.
inline void div_into(Emitter& em, const std::vector<int>& a, const std::vector<int>& b,
                     const std::vector<int>& q, const std::vector<int>& rem,
                     const std::vector<int>& bank, int bz, int bpad, int anc) {
    const int w = static_cast<int>(a.size());
    auto mark_b_zero = [&] {
        for (int i : b) em.g(circuit::x(i));
        em.g(circuit::mcx(b, bz));
        for (int i : b) em.g(circuit::x(i));
    };
    mark_b_zero();

    std::vector<int> bext = b;
    bext.push_back(bpad);

    for (int i = w - 1; i >= 0; --i) {
        // Shift the partial remainder up one bit; its top bit is zero
        // before the shift, so this fills position zero with zero.
        for (int j = w; j >= 1; --j) em.g(circuit::swap_pair(rem[j], rem[j - 1]));
        em.g(circuit::cx(a[i], rem[0]));

        sub_inplace(em, rem, bext, anc);
        em.g(circuit::cx(rem[w], bank[i]));
        {
            Emitter addback = em.with(bank[i]);
            add_inplace(addback, rem, bext, anc);
        }
        // q_i := !bank_i and !bz
        em.g(circuit::x(bank[i]));
        em.g(circuit::x(bz));
        em.g(circuit::ccx(bank[i], bz, q[i]));
        em.g(circuit::x(bz));
        em.g(circuit::x(bank[i]));
    }
    mark_b_zero();  // self inverse, so bz lands back on zero
}

}  // namespace rev

namespace fourier {

// Phase ladder that takes a register to the phase basis. Qubit j ends up
// carrying the phase (pi / 2^j) * value, so additions become controlled
// phase kicks and no bit reversal is needed.
inline std::vector<circuit::Gate> qft_gates(const std::vector<int>& a) {
    std::vector<circuit::Gate> out;
    const int w = static_cast<int>(a.size());
    for (int j = w - 1; j >= 0; --j) {
        out.push_back(circuit::h(a[j]));
        for (int k = j - 1; k >= 0; --k)
            out.push_back(circuit::cphase(a[k], a[j], std::numbers::pi / double(1 << (j - k))));
    }
    return out;
}

inline std::vector<circuit::Gate> inverted(std::vector<circuit::Gate> gs) {
    std::reverse(gs.begin(), gs.end());
    for (auto& g : gs) g = circuit::inverse_of(g);
    return gs;
}

// Phase kicks adding (or subtracting) `operand` onto a register already
// in the phase basis.
inline std::vector<circuit::Gate> kick_gates(const std::vector<int>& target,
                                             const std::vector<int>& operand, double sign) {
    std::vector<circuit::Gate> out;
    const int w = static_cast<int>(target.size());
    for (int j = w - 1; j >= 0; --j)
        for (int k = j; k >= 0; --k)
            out.push_back(circuit::cphase(operand[k], target[j],
                                          sign * std::numbers::pi / double(1 << (j - k))));
    return out;
}

// target := target +/- operand mod 2^w, in place: QFT, kick, inverse QFT.
// 3/2 * w(w+1) gates.
inline void add_inplace(Emitter& em, const std::vector<int>& target,
                        const std::vector<int>& operand, double sign = 1.0) {
    auto fwd = qft_gates(target);
    em.all(fwd);
    em.all(kick_gates(target, operand, sign));
    em.all(inverted(fwd));
}

// r := a + b mod 2^w (minus for sign < 0) into a fresh zeroed register:
// one transform, two kicks.
inline void add_into(Emitter& em, const std::vector<int>& a, const std::vector<int>& b,
                     const std::vector<int>& r, double sign_b = 1.0) {
    auto fwd = qft_gates(r);
    em.all(fwd);
    em.all(kick_gates(r, a, 1.0));
    em.all(kick_gates(r, b, sign_b));
    em.all(inverted(fwd));
}

}  // namespace fourier

}  // namespace qex::synth
