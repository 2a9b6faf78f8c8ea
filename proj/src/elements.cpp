#include "spenla/elements.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace spenla {
namespace {

// Enough for the photon numbers this protocol can produce.
constexpr int kMaxPhotons = 16;

const std::array<double, kMaxPhotons + 1>& factorials() {
    static const auto table = [] {
        std::array<double, kMaxPhotons + 1> f{};
        f[0] = 1.0;
        for (int n = 1; n <= kMaxPhotons; ++n) f[n] = f[n - 1] * n;
        return f;
    }();
    return table;
}

// Integer power by repeated multiplication; keeps real coefficients exactly
// real, unlike std::pow on complex arguments.
Complex ipow(Complex base, int exponent) {
    Complex r = 1.0;
    for (int i = 0; i < exponent; ++i) r *= base;
    return r;
}

// Substitutes a_src -> sum_j coeff_j a_target_j in every term.
//
// A ket with n photons in src and base_j photons in target j contributes,
// for every split (m_1..m_k) of n,
//   amp * sqrt(n!) / prod(m_j!) * prod(coeff_j^m_j)
//       * sqrt(prod (base_j + m_j)! / base_j!)
// to the ket with src emptied and target counts base_j + m_j.  The square
// roots are the usual |n> = (a^dag)^n / sqrt(n!) |0> bookkeeping; they make
// the map exactly unitary whenever the coefficient rows are orthonormal.
PureState apply_slot_map(const PureState& s, std::size_t src,
                         const std::vector<std::pair<std::size_t, Complex>>& targets) {
    const auto& fact = factorials();
    PureState out(s.registry_ptr());

    std::vector<int> split(targets.size(), 0);
    for (const auto& [ket, amp] : s.terms()) {
        const int n = ket.count(src);
        if (n == 0) {
            out.add_term(ket, amp);
            continue;
        }
        if (n > kMaxPhotons)
            throw std::invalid_argument("photon number too large for element application");

        BasisKet base = ket;
        base.set_count(src, 0);

        // Walk all ways to distribute n photons over the targets.
        auto recurse = [&](auto&& self, std::size_t idx, int remaining, Complex coeff) -> void {
            if (idx + 1 == targets.size()) {
                split[idx] = remaining;
                Complex c = coeff * ipow(targets[idx].second, remaining) / fact[remaining];
                BasisKet next = base;
                double boson = fact[n];
                for (std::size_t j = 0; j < targets.size(); ++j) {
                    const int was = next.count(targets[j].first);
                    next.set_count(targets[j].first, was + split[j]);
                    boson *= fact[was + split[j]] / fact[was];
                }
                out.add_term(next, amp * c * std::sqrt(boson));
                return;
            }
            for (int m = 0; m <= remaining; ++m) {
                split[idx] = m;
                self(self, idx + 1, remaining - m,
                     coeff * ipow(targets[idx].second, m) / fact[m]);
            }
        };
        recurse(recurse, 0, n, 1.0);
    }
    out.prune();
    return out;
}

void require_distinct(const std::string& a, const std::string& b, const char* what) {
    if (a == b) throw std::invalid_argument(std::string(what) + " must use distinct labels");
}

void require_empty_outputs(const PureState& s, std::initializer_list<std::string> labels,
                           const char* what) {
    for (const auto& label : labels) {
        for (Pol pol : {Pol::H, Pol::V}) {
            const std::size_t slot = s.registry().slot(label, pol);
            for (const auto& [ket, amp] : s.terms()) {
                (void)amp;
                if (ket.count(slot) != 0)
                    throw std::invalid_argument(std::string(what) +
                                                " output already holds photons: " + label);
            }
        }
    }
}

constexpr double kInvSqrt2 = 0.70710678118654752440;

}  // namespace

PureState vbs_apply(const PureState& s, const std::string& in, const std::string& out_t,
                    const std::string& out_r, double t) {
    if (!(t >= 0.0 && t <= 1.0))
        throw std::invalid_argument("beam splitter transmissivity must be in [0, 1]");
    require_distinct(in, out_t, "vbs");
    require_distinct(in, out_r, "vbs");
    require_distinct(out_t, out_r, "vbs");
    require_empty_outputs(s, {out_t, out_r}, "vbs");

    const double ct = std::sqrt(t);
    const double cr = std::sqrt(1.0 - t);
    PureState out = s;
    for (Pol pol : {Pol::H, Pol::V}) {
        out = apply_slot_map(out, out.registry().slot(in, pol),
                             {{out.registry().slot(out_t, pol), ct},
                              {out.registry().slot(out_r, pol), cr}});
    }
    return out;
}

PureState bs50_apply(const PureState& s, const std::string& in1, const std::string& in2,
                     const std::string& out1, const std::string& out2) {
    require_distinct(in1, in2, "bs50");
    require_distinct(out1, out2, "bs50");
    for (const auto& in : {in1, in2})
        for (const auto& o : {out1, out2}) require_distinct(in, o, "bs50");
    require_empty_outputs(s, {out1, out2}, "bs50");

    PureState out = s;
    for (Pol pol : {Pol::H, Pol::V}) {
        out = apply_slot_map(out, out.registry().slot(in1, pol),
                             {{out.registry().slot(out1, pol), kInvSqrt2},
                              {out.registry().slot(out2, pol), kInvSqrt2}});
        out = apply_slot_map(out, out.registry().slot(in2, pol),
                             {{out.registry().slot(out1, pol), kInvSqrt2},
                              {out.registry().slot(out2, pol), -kInvSqrt2}});
    }
    return out;
}

PureState pbs_apply(const PureState& s, const std::string& in, const std::string& out_h,
                    const std::string& out_v) {
    require_distinct(in, out_h, "pbs");
    require_distinct(in, out_v, "pbs");
    require_distinct(out_h, out_v, "pbs");

    PureState out = s;
    out = apply_slot_map(out, out.registry().slot(in, Pol::H),
                         {{out.registry().slot(out_h, Pol::H), 1.0}});
    out = apply_slot_map(out, out.registry().slot(in, Pol::V),
                         {{out.registry().slot(out_v, Pol::V), 1.0}});
    return out;
}

PureState pol_phase_flip(const PureState& s, const std::string& spatial, Pol axis) {
    const std::size_t slot = s.registry().slot(spatial, axis);
    PureState out(s.registry_ptr());
    for (const auto& [ket, amp] : s.terms())
        out.add_term(ket, ket.count(slot) % 2 ? -amp : amp);
    return out;
}

PureState mode_phase(const PureState& s, const std::string& spatial, double phase) {
    const std::size_t slot_h = s.registry().slot(spatial, Pol::H);
    const std::size_t slot_v = s.registry().slot(spatial, Pol::V);
    PureState out(s.registry_ptr());
    for (const auto& [ket, amp] : s.terms()) {
        const int n = ket.count(slot_h) + ket.count(slot_v);
        out.add_term(ket, amp * std::polar(1.0, phase * n));
    }
    return out;
}

OpticalElement OpticalElement::vbs(std::string in, std::string out_t, std::string out_r,
                                   double t) {
    return {Kind::Vbs, {std::move(in)}, {std::move(out_t), std::move(out_r)}, t, Pol::H};
}

OpticalElement OpticalElement::bs50(std::string in1, std::string in2, std::string out1,
                                    std::string out2) {
    return {Kind::Bs50,
            {std::move(in1), std::move(in2)},
            {std::move(out1), std::move(out2)},
            0.0,
            Pol::H};
}

OpticalElement OpticalElement::pbs(std::string in, std::string out_h, std::string out_v) {
    return {Kind::Pbs, {std::move(in)}, {std::move(out_h), std::move(out_v)}, 0.0, Pol::H};
}

OpticalElement OpticalElement::pol_flip(std::string spatial, Pol axis) {
    return {Kind::PolFlip, {spatial}, {spatial}, 0.0, axis};
}

OpticalElement OpticalElement::phase(std::string spatial, double phase) {
    return {Kind::ModePhase, {spatial}, {spatial}, phase, Pol::H};
}

PureState OpticalElement::apply(const PureState& s) const {
    switch (kind) {
        case Kind::Vbs:
            return vbs_apply(s, inputs[0], outputs[0], outputs[1], parameter);
        case Kind::Bs50:
            return bs50_apply(s, inputs[0], inputs[1], outputs[0], outputs[1]);
        case Kind::Pbs:
            return pbs_apply(s, inputs[0], outputs[0], outputs[1]);
        case Kind::PolFlip:
            return pol_phase_flip(s, inputs[0], axis);
        case Kind::ModePhase:
            return mode_phase(s, inputs[0], parameter);
    }
    throw std::logic_error("unreachable element kind");
}

std::vector<std::vector<Complex>> OpticalElement::mode_matrix() const {
    switch (kind) {
        case Kind::Vbs: {
            // Second row is the idle port, included so the matrix is square.
            const double ct = std::sqrt(parameter);
            const double cr = std::sqrt(1.0 - parameter);
            return {{ct, cr}, {cr, -ct}};
        }
        case Kind::Bs50:
            return {{kInvSqrt2, kInvSqrt2}, {kInvSqrt2, -kInvSqrt2}};
        case Kind::Pbs:
            // (in,H) -> (out_h,H), (in,V) -> (out_v,V): a permutation.
            return {{1.0, 0.0}, {0.0, 1.0}};
        case Kind::PolFlip:
            return {{-1.0}};
        case Kind::ModePhase:
            return {{std::polar(1.0, parameter), 0.0}, {0.0, std::polar(1.0, parameter)}};
    }
    throw std::logic_error("unreachable element kind");
}

}  // namespace spenla
