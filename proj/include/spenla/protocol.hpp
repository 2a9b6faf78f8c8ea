#pragma once

// The heralded amplification + concentration protocol end to end.
//
// Wiring (one arm shown, the b/d arm mirrors it): the signal photon enters at
// a1 and meets the transmitted half of an H+V ancilla pair (c1 split by a
// variable beam splitter into c2/c3) on a balanced beam splitter; the two BS
// outputs are polarization-resolved onto four detectors.  A fourfold
// coincidence with one click on each side heralds success and leaves the
// state of the retained arms c3/d3 as the protocol output.

#include <optional>
#include <string>
#include <vector>

#include "spenla/detection.hpp"
#include "spenla/elements.hpp"
#include "spenla/fock.hpp"

namespace spenla {

struct ProtocolParams {
    double eta;    // probability the input photon survived the lossy channel
    double a;      // amplitude of the "photon with Alice" branch; b = sqrt(1-a^2)
    double alpha;  // polarization encoding, alpha^2 + beta^2 = 1
    double beta;
    double t1;                // first splitter transmissivity, in (0, 1)
    std::optional<double> t2; // second splitter; empty means matched to t1

    double b() const;
    void validate() const;  // throws std::domain_error on violations
};

// Transmissivity that balances the two retained arms:
//   t2 = t1 (1-a^2) / (a^2 - 2 a^2 t1 + t1)
// Requires a strictly between 0 and 1.
double t2_matched(double t1, double a);

// params.t2 if set, otherwise t2_matched(t1, a).
double resolve_t2(const ProtocolParams& params);

// All twenty spatial labels of the interferometer, sources included.
const std::vector<std::string>& protocol_labels();

// The retained output arms.
const std::vector<std::string>& output_labels();

// Pure entangled input a(alpha|H>+beta|V>)_a1 |0>_b1 + b|0>_a1 (alpha|H>+beta|V>)_b1
// over the registry [a1, b1].
PureState entangled_input(double a, double alpha, double beta);

// Lossy-channel input: weight eta on the entangled state, 1-eta on vacuum.
EnsembleState build_input(double eta, double a, double alpha, double beta);

// Four ancilla photons (H and V at c1, H and V at d1) routed through the two
// variable splitters; lives on [c1, c2, c3, d1, d2, d3].
PureState prepare_ancilla(double t1, double t2);

// State of the full interferometer just before detection, for the branch
// where the signal photon survived / was lost.  eta plays no role here.
PureState evolve_signal_branch(const ProtocolParams& params);
PureState evolve_vacuum_branch(const ProtocolParams& params);

// The state every heralded pattern must be steered to (normalized):
//   a t2 sqrt(t1(1-t1)) (alpha|H>+beta|V>)_c3 |0>_d3
//     + b t1 sqrt(t2(1-t2)) |0>_c3 (alpha|H>+beta|V>)_d3
// With matched t2 the two branch weights are equal.
PureState signal_output_target(const ProtocolParams& params);

struct CorrectionOp {
    enum class Kind { PolFlip, ModePhasePi };
    Kind kind;
    std::string spatial;
    Pol axis = Pol::H;  // PolFlip only

    std::string describe() const;
};

using Correction = std::vector<CorrectionOp>;

PureState apply_correction(const PureState& s, const Correction& correction);

std::string describe(const Correction& correction);

// One composition of phase flips per success pattern, aligned with
// success_patterns() order.
struct CorrectionTable {
    std::vector<Correction> by_pattern;
};

// Finds, for every pattern, the smallest composition of polarization flips on
// c3/d3 (a pi mode-phase on d3 standing in for flipping both d3 components)
// that maps the heralded state onto signal_output_target, by checking
// fidelity 1 against three polarization test vectors.  The result does not
// depend on the protocol parameters; a failed search throws std::logic_error
// since it can only mean the element conventions are inconsistent.
CorrectionTable derive_correction_table();

// Shared table, derived once on first use.
const CorrectionTable& correction_table();

struct PatternOutcome {
    DetectionPattern pattern;
    double p_signal;          // probability within the signal branch
    double p_vacuum;          // probability within the photon-lost branch
    double p_total;           // eta-weighted combination
    EnsembleState posterior;  // corrected, Bayes-reweighted output on [c3, d3]
};

struct ProtocolOutcome {
    ProtocolParams params;  // t2 resolved to its numeric value
    double t2;
    double p1;       // summed signal-branch success probability
    double p2;       // summed photon-lost success probability
    double p_total;  // eta p1 + (1-eta) p2
    double eta_out;  // eta p1 / p_total
    std::optional<double> gain;  // eta_out / eta; empty when eta = 0
    std::vector<PatternOutcome> per_pattern;
    // Heralded output: weight eta_out on the corrected signal state, the rest
    // on vacuum.  All sixteen corrected pattern states agree, so a single
    // representative branch is kept (whether the lab relabels coherently or
    // mixes classically is unobservable downstream).  Empty if p_total = 0.
    std::optional<EnsembleState> output_state;
};

// Simulates both branches, projects all sixteen heralding patterns, applies
// the corrections and aggregates the success metrics.
ProtocolOutcome run(const ProtocolParams& params);

}  // namespace spenla
