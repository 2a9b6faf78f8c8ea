#pragma once

// Linear optical elements acting on sparse Fock states.
//
// Every element is a linear map on creation operators.  Applying one to a
// state rewrites each basis ket as a creation-operator monomial, substitutes
// the transformed operators and expands multinomially, so multi-photon
// bosonic factors (stimulated amplitudes, Hong-Ou-Mandel bunching) come out
// exactly rather than through dense mode unitaries.

#include <vector>

#include "spenla/fock.hpp"

namespace spenla {

// Variable beam splitter with transmissivity t in [0, 1]:
//   a_in -> sqrt(t) a_out_t + sqrt(1-t) a_out_r
// applied to both polarization slots of the input label.  The unused second
// port carries the orthogonal row (sqrt(1-t), -sqrt(t)); see OpticalElement.
// Requires out_t/out_r to hold no photons yet.
PureState vbs_apply(const PureState& s, const std::string& in, const std::string& out_t,
                    const std::string& out_r, double t);

// Balanced beam splitter on two spatial inputs, polarization preserving:
//   a_in1 -> (a_out1 + a_out2)/sqrt(2),  a_in2 -> (a_out1 - a_out2)/sqrt(2)
// Requires out1/out2 to hold no photons yet.
PureState bs50_apply(const PureState& s, const std::string& in1, const std::string& in2,
                     const std::string& out1, const std::string& out2);

// Polarizing beam splitter: H photons of `in` go to out_h, V photons to out_v.
PureState pbs_apply(const PureState& s, const std::string& in, const std::string& out_h,
                    const std::string& out_v);

// Sign flip of one polarization component: amplitude * (-1)^(count of axis photons).
PureState pol_phase_flip(const PureState& s, const std::string& spatial, Pol axis);

// Spatial-mode phase: amplitude * exp(i * phase * n) with n the total photon
// number (both polarizations) in the label.
PureState mode_phase(const PureState& s, const std::string& spatial, double phase);

// Descriptor carrying an element's kind, wiring and parameter.  apply()
// dispatches to the functions above; mode_matrix() exposes the induced
// single-photon matrix (input ports x output ports) for unitarity checks.
struct OpticalElement {
    enum class Kind { Vbs, Bs50, Pbs, PolFlip, ModePhase };

    Kind kind;
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;
    double parameter = 0.0;  // t for Vbs, phase for ModePhase
    Pol axis = Pol::H;       // PolFlip only

    static OpticalElement vbs(std::string in, std::string out_t, std::string out_r, double t);
    static OpticalElement bs50(std::string in1, std::string in2, std::string out1,
                               std::string out2);
    static OpticalElement pbs(std::string in, std::string out_h, std::string out_v);
    static OpticalElement pol_flip(std::string spatial, Pol axis);
    static OpticalElement phase(std::string spatial, double phase);

    PureState apply(const PureState& s) const;
    std::vector<std::vector<Complex>> mode_matrix() const;
};

}  // namespace spenla
