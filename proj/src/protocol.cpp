#include "spenla/protocol.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

namespace spenla {
namespace {

// Below this, the weakest heralded amplitude (t1 t2 / 4 from the photon-lost
// branch) sinks toward the prune tolerance and the simulation would silently
// lose terms.  The closed forms remain available in that regime.
constexpr double kMinHeraldAmplitude = 100.0 * kPruneTol;

void check_unit_interval_open(double x, const char* name) {
    if (!(x > 0.0 && x < 1.0))
        throw std::domain_error(std::string(name) + " must lie strictly between 0 and 1");
}

PureState kept_vacuum() {
    return PureState::vacuum(ModeRegistry::make(output_labels()));
}

}  // namespace

double ProtocolParams::b() const { return std::sqrt(1.0 - a * a); }

void ProtocolParams::validate() const {
    if (!(eta >= 0.0 && eta <= 1.0))
        throw std::domain_error("eta must lie in [0, 1]");
    if (!(a >= 0.0 && a <= 1.0))
        throw std::domain_error("a must lie in [0, 1]");
    if (std::abs(alpha * alpha + beta * beta - 1.0) > 1e-12)
        throw std::domain_error("polarization encoding must satisfy alpha^2 + beta^2 = 1");
    check_unit_interval_open(t1, "t1");
    if (t2) check_unit_interval_open(*t2, "t2");
    else if (!(a > 0.0 && a < 1.0))
        throw std::domain_error("matched t2 needs a strictly between 0 and 1; "
                                "pass t2 explicitly for a one-sided input");
}

double t2_matched(double t1, double a) {
    check_unit_interval_open(t1, "t1");
    if (!(a > 0.0 && a < 1.0))
        throw std::domain_error("matched t2 needs a strictly between 0 and 1");
    const double a2 = a * a;
    return t1 * (1.0 - a2) / (a2 - 2.0 * a2 * t1 + t1);
}

double resolve_t2(const ProtocolParams& params) {
    return params.t2 ? *params.t2 : t2_matched(params.t1, params.a);
}

const std::vector<std::string>& protocol_labels() {
    static const std::vector<std::string> labels = {
        "a1", "a2", "a3", "a4", "a5", "a6", "a7",
        "b1", "b2", "b3", "b4", "b5", "b6", "b7",
        "c1", "c2", "c3", "d1", "d2", "d3"};
    return labels;
}

const std::vector<std::string>& output_labels() {
    static const std::vector<std::string> labels = {"c3", "d3"};
    return labels;
}

PureState entangled_input(double a, double alpha, double beta) {
    RegistryPtr reg = ModeRegistry::make({"a1", "b1"});
    const double b = std::sqrt(1.0 - a * a);
    PureState s(reg);
    auto put = [&](const std::string& label, Pol pol, double amp) {
        if (amp == 0.0) return;
        BasisKet ket(reg->slot_count());
        ket.set_count(reg->slot(label, pol), 1);
        s.add_term(ket, amp);
    };
    put("a1", Pol::H, a * alpha);
    put("a1", Pol::V, a * beta);
    put("b1", Pol::H, b * alpha);
    put("b1", Pol::V, b * beta);
    s.prune();
    return s;
}

EnsembleState build_input(double eta, double a, double alpha, double beta) {
    std::vector<WeightedBranch> branches;
    if (eta > 0.0) branches.push_back({eta, entangled_input(a, alpha, beta)});
    if (eta < 1.0)
        branches.push_back({1.0 - eta, PureState::vacuum(ModeRegistry::make({"a1", "b1"}))});
    return EnsembleState(std::move(branches));
}

PureState prepare_ancilla(double t1, double t2) {
    if (!(t1 >= 0.0 && t1 <= 1.0 && t2 >= 0.0 && t2 <= 1.0))
        throw std::domain_error("transmissivities must lie in [0, 1]");
    PureState s = PureState::vacuum(ModeRegistry::make({"c1", "c2", "c3", "d1", "d2", "d3"}));
    s = create_photon(s, {"c1", Pol::H});
    s = create_photon(s, {"c1", Pol::V});
    s = create_photon(s, {"d1", Pol::H});
    s = create_photon(s, {"d1", Pol::V});
    s = vbs_apply(s, "c1", "c2", "c3", t1);
    s = vbs_apply(s, "d1", "d2", "d3", t2);
    return s;
}

namespace {

// Tensors an [a1, b1] input with the ancilla and the empty interferometer
// arms, then runs the optical train shared by both branches.
PureState evolve(const PureState& input, double t1, double t2) {
    std::vector<std::string> rest;
    for (const auto& label : protocol_labels())
        if (label != "a1" && label != "b1" && label[0] != 'c' && label[0] != 'd')
            rest.push_back(label);

    PureState s = tensor(input, prepare_ancilla(t1, t2));
    s = tensor(s, PureState::vacuum(ModeRegistry::make(rest)));

    s = bs50_apply(s, "a1", "c2", "a2", "a3");
    s = bs50_apply(s, "b1", "d2", "b2", "b3");
    s = pbs_apply(s, "a2", "a4", "a5");
    s = pbs_apply(s, "a3", "a6", "a7");
    s = pbs_apply(s, "b2", "b4", "b5");
    s = pbs_apply(s, "b3", "b6", "b7");
    return s;
}

}  // namespace

PureState evolve_signal_branch(const ProtocolParams& params) {
    return evolve(entangled_input(params.a, params.alpha, params.beta), params.t1,
                  resolve_t2(params));
}

PureState evolve_vacuum_branch(const ProtocolParams& params) {
    return evolve(PureState::vacuum(ModeRegistry::make({"a1", "b1"})), params.t1,
                  resolve_t2(params));
}

PureState signal_output_target(const ProtocolParams& params) {
    const double t1 = params.t1;
    const double t2 = resolve_t2(params);
    const double amp_c = params.a * t2 * std::sqrt(t1 * (1.0 - t1));
    const double amp_d = params.b() * t1 * std::sqrt(t2 * (1.0 - t2));

    RegistryPtr reg = ModeRegistry::make(output_labels());
    PureState s(reg);
    auto put = [&](const std::string& label, Pol pol, double amp) {
        if (amp == 0.0) return;
        BasisKet ket(reg->slot_count());
        ket.set_count(reg->slot(label, pol), 1);
        s.add_term(ket, amp);
    };
    put("c3", Pol::H, amp_c * params.alpha);
    put("c3", Pol::V, amp_c * params.beta);
    put("d3", Pol::H, amp_d * params.alpha);
    put("d3", Pol::V, amp_d * params.beta);
    return normalize(s);
}

std::string CorrectionOp::describe() const {
    if (kind == Kind::ModePhasePi) return "phase_pi(" + spatial + ")";
    return std::string("flip(") + spatial + "," + pol_name(axis) + ")";
}

PureState apply_correction(const PureState& s, const Correction& correction) {
    PureState out = s;
    for (const auto& op : correction) {
        if (op.kind == CorrectionOp::Kind::PolFlip)
            out = pol_phase_flip(out, op.spatial, op.axis);
        else
            out = mode_phase(out, op.spatial, std::numbers::pi);
    }
    return out;
}

std::string describe(const Correction& correction) {
    if (correction.empty()) return "identity";
    std::string out;
    for (const auto& op : correction) {
        if (!out.empty()) out += " + ";
        out += op.describe();
    }
    return out;
}

namespace {

// Candidate compositions: every subset of sign flips on the four output
// slots.  Flipping both d3 components is expressed as the pi mode phase.
Correction composition_for_mask(unsigned mask) {
    Correction ops;
    if (mask & 1u) ops.push_back({CorrectionOp::Kind::PolFlip, "c3", Pol::H});
    if (mask & 2u) ops.push_back({CorrectionOp::Kind::PolFlip, "c3", Pol::V});
    const bool d3h = mask & 4u;
    const bool d3v = mask & 8u;
    if (d3h && d3v)
        ops.push_back({CorrectionOp::Kind::ModePhasePi, "d3", Pol::H});
    else if (d3h)
        ops.push_back({CorrectionOp::Kind::PolFlip, "d3", Pol::H});
    else if (d3v)
        ops.push_back({CorrectionOp::Kind::PolFlip, "d3", Pol::V});
    return ops;
}

}  // namespace

CorrectionTable derive_correction_table() {
    // Any interior parameter point works; the heralded signs depend only on
    // which detectors clicked.  Asymmetric a pins both arms, and the three
    // test vectors pin both polarization components per arm.
    const double a = std::sqrt(0.3);
    const double t1 = 0.2;
    const std::array<std::pair<double, double>, 3> vectors = {
        {{1.0, 0.0}, {0.0, 1.0}, {0.6, 0.8}}};

    const DetectorMap dmap = DetectorMap::standard();
    const auto& patterns = success_patterns();

    std::vector<std::vector<PureState>> collapses(patterns.size());
    std::vector<PureState> targets;
    for (const auto& [alpha, beta] : vectors) {
        ProtocolParams params{1.0, a, alpha, beta, t1, std::nullopt};
        PureState evolved = evolve_signal_branch(params);
        targets.push_back(signal_output_target(params));
        for (std::size_t i = 0; i < patterns.size(); ++i) {
            OutcomeRecord rec = project(evolved, patterns[i], dmap, output_labels());
            if (rec.probability <= 0.0)
                throw std::logic_error("heralding pattern " + patterns[i].name() +
                                       " has zero probability at the reference point");
            collapses[i].push_back(std::move(rec.collapsed));
        }
    }

    // Try the shortest compositions first so the table stays minimal.
    std::vector<unsigned> masks(16);
    for (unsigned m = 0; m < 16; ++m) masks[m] = m;
    std::stable_sort(masks.begin(), masks.end(), [](unsigned lhs, unsigned rhs) {
        return composition_for_mask(lhs).size() < composition_for_mask(rhs).size();
    });

    CorrectionTable table;
    for (std::size_t i = 0; i < patterns.size(); ++i) {
        bool found = false;
        for (unsigned mask : masks) {
            Correction candidate = composition_for_mask(mask);
            bool all_match = true;
            for (std::size_t v = 0; v < targets.size(); ++v) {
                if (fidelity(targets[v], apply_correction(collapses[i][v], candidate)) <
                    1.0 - kCompareTol) {
                    all_match = false;
                    break;
                }
            }
            if (all_match) {
                table.by_pattern.push_back(std::move(candidate));
                found = true;
                break;
            }
        }
        if (!found)
            throw std::logic_error("no phase-flip composition corrects pattern " +
                                   patterns[i].name() +
                                   "; the beam splitter conventions must be inconsistent");
    }
    return table;
}

const CorrectionTable& correction_table() {
    static const CorrectionTable table = derive_correction_table();
    return table;
}

ProtocolOutcome run(const ProtocolParams& params) {
    params.validate();
    ProtocolParams resolved = params;
    const double t2 = resolve_t2(params);
    resolved.t2 = t2;

    if (params.t1 * t2 / 4.0 < kMinHeraldAmplitude)
        throw std::domain_error("t1*t2 too small: heralded amplitudes would fall below the "
                                "prune tolerance; use the closed forms in this regime");

    const DetectorMap dmap = DetectorMap::standard();
    const auto& patterns = success_patterns();
    const CorrectionTable& table = correction_table();

    const PureState signal = evolve_signal_branch(resolved);
    const PureState lost = evolve_vacuum_branch(resolved);
    const PureState vac_out = kept_vacuum();

    ProtocolOutcome outcome;
    outcome.params = resolved;
    outcome.t2 = t2;
    outcome.p1 = 0.0;
    outcome.p2 = 0.0;

    std::optional<PureState> corrected_output;
    for (std::size_t i = 0; i < patterns.size(); ++i) {
        OutcomeRecord rec_s = project(signal, patterns[i], dmap, output_labels());
        OutcomeRecord rec_v = project(lost, patterns[i], dmap, output_labels());
        outcome.p1 += rec_s.probability;
        outcome.p2 += rec_v.probability;

        PureState corrected = rec_s.probability > 0.0
                                  ? apply_correction(rec_s.collapsed, table.by_pattern[i])
                                  : rec_s.collapsed;
        if (!corrected_output && rec_s.probability > 0.0) corrected_output = corrected;

        const double joint_s = params.eta * rec_s.probability;
        const double joint_v = (1.0 - params.eta) * rec_v.probability;
        const double total = joint_s + joint_v;
        if (total <= 0.0)
            throw std::domain_error("pattern " + patterns[i].name() +
                                    " has zero probability; parameters are degenerate");

        std::vector<WeightedBranch> posterior;
        if (joint_s > 0.0) posterior.push_back({joint_s / total, corrected});
        if (joint_v > 0.0) posterior.push_back({joint_v / total, rec_v.collapsed});
        outcome.per_pattern.push_back({patterns[i], rec_s.probability, rec_v.probability,
                                       total, EnsembleState(std::move(posterior))});
    }

    outcome.p_total = params.eta * outcome.p1 + (1.0 - params.eta) * outcome.p2;
    if (outcome.p_total > 0.0) {
        outcome.eta_out = params.eta * outcome.p1 / outcome.p_total;
        if (params.eta > 0.0) outcome.gain = outcome.eta_out / params.eta;

        std::vector<WeightedBranch> output;
        if (outcome.eta_out > 0.0 && corrected_output)
            output.push_back({outcome.eta_out, *corrected_output});
        if (outcome.eta_out < 1.0) output.push_back({1.0 - outcome.eta_out, vac_out});
        outcome.output_state = EnsembleState(std::move(output));
    } else {
        outcome.eta_out = 0.0;
    }
    return outcome;
}

}  // namespace spenla
