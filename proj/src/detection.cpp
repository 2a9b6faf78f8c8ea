#include "spenla/detection.hpp"

#include <algorithm>
#include <stdexcept>

namespace spenla {

DetectorMap DetectorMap::standard() {
    DetectorMap map;
    map.detectors_ = {
        {"D1a", {"a4", Pol::H}}, {"D2a", {"a5", Pol::V}},
        {"D3a", {"a6", Pol::H}}, {"D4a", {"a7", Pol::V}},
        {"D1b", {"b4", Pol::H}}, {"D2b", {"b5", Pol::V}},
        {"D3b", {"b6", Pol::H}}, {"D4b", {"b7", Pol::V}},
    };
    return map;
}

const DetectorAssignment& DetectorMap::at(const std::string& name) const {
    for (const auto& d : detectors_)
        if (d.name == name) return d;
    throw std::invalid_argument("unknown detector: " + name);
}

std::vector<std::string> DetectorMap::spatial_labels() const {
    std::vector<std::string> labels;
    for (const auto& d : detectors_) labels.push_back(d.mode.spatial);
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
    return labels;
}

std::string DetectionPattern::name() const {
    std::string out;
    for (const auto& d : detectors) out += d;
    return out;
}

const std::vector<DetectionPattern>& success_patterns() {
    static const std::vector<DetectionPattern> patterns = [] {
        // The four pair choices that keep one H-type and one V-type detector.
        const std::array<std::array<int, 2>, 4> pairs = {{{1, 2}, {1, 4}, {2, 3}, {3, 4}}};
        std::vector<DetectionPattern> out;
        for (const auto& ap : pairs) {
            for (const auto& bp : pairs) {
                DetectionPattern p;
                p.detectors = {"D" + std::to_string(ap[0]) + "a",
                               "D" + std::to_string(ap[1]) + "a",
                               "D" + std::to_string(bp[0]) + "b",
                               "D" + std::to_string(bp[1]) + "b"};
                out.push_back(std::move(p));
            }
        }
        return out;
    }();
    return patterns;
}

OutcomeRecord project(const PureState& s, const DetectionPattern& pattern,
                      const DetectorMap& map, const std::vector<std::string>& keep) {
    const ModeRegistry& reg = s.registry();

    // Required count per detector slot: 1 for the pattern's detectors, 0 else.
    std::vector<std::pair<std::size_t, int>> required;
    for (const auto& d : map.detectors()) {
        const bool clicked = std::find(pattern.detectors.begin(), pattern.detectors.end(),
                                       d.name) != pattern.detectors.end();
        required.emplace_back(reg.slot(d.mode), clicked ? 1 : 0);
    }

    RegistryPtr out_reg = ModeRegistry::make(keep);
    std::vector<std::size_t> keep_slots(out_reg->slot_count());
    for (std::size_t i = 0; i < keep_slots.size(); ++i)
        keep_slots[i] = reg.slot(out_reg->mode_at(i));

    // Slots that a matching term may legitimately occupy.
    std::vector<bool> accounted(reg.slot_count(), false);
    for (const auto& [slot, cnt] : required) {
        (void)cnt;
        accounted[slot] = true;
    }
    for (auto slot : keep_slots) accounted[slot] = true;

    PureState collapsed(out_reg);
    double probability = 0.0;
    for (const auto& [ket, amp] : s.terms()) {
        bool match = true;
        for (const auto& [slot, cnt] : required) {
            if (ket.count(slot) != cnt) {
                match = false;
                break;
            }
        }
        if (!match) continue;
        for (std::size_t slot = 0; slot < reg.slot_count(); ++slot) {
            if (!accounted[slot] && ket.count(slot) != 0)
                throw std::logic_error("projection found photons outside the detectors and "
                                       "kept modes; check the element wiring");
        }
        probability += std::norm(amp);
        BasisKet kept(out_reg->slot_count());
        for (std::size_t i = 0; i < keep_slots.size(); ++i)
            kept.set_count(i, ket.count(keep_slots[i]));
        collapsed.add_term(kept, amp);
    }

    if (probability > 0.0) collapsed = normalize(collapsed);
    return OutcomeRecord{pattern, probability, std::move(collapsed)};
}

EnsembleOutcome project_ensemble(const EnsembleState& rho, const DetectionPattern& pattern,
                                 const DetectorMap& map,
                                 const std::vector<std::string>& keep) {
    double total = 0.0;
    std::vector<WeightedBranch> posterior;
    for (const auto& branch : rho.branches()) {
        OutcomeRecord rec = project(branch.state, pattern, map, keep);
        const double joint = branch.weight * rec.probability;
        if (joint == 0.0) continue;
        total += joint;
        posterior.push_back({joint, std::move(rec.collapsed)});
    }
    if (total == 0.0)
        throw std::domain_error("detection pattern has zero probability in every branch");
    for (auto& branch : posterior) branch.weight /= total;
    return EnsembleOutcome{pattern, total, EnsembleState(std::move(posterior))};
}

std::map<std::vector<int>, double> outcome_distribution(const PureState& s,
                                                        const DetectorMap& map) {
    const ModeRegistry& reg = s.registry();
    std::vector<std::size_t> slots;
    for (const auto& d : map.detectors()) slots.push_back(reg.slot(d.mode));

    std::map<std::vector<int>, double> dist;
    std::vector<int> signature(slots.size());
    for (const auto& [ket, amp] : s.terms()) {
        for (std::size_t i = 0; i < slots.size(); ++i) signature[i] = ket.count(slots[i]);
        dist[signature] += std::norm(amp);
    }
    return dist;
}

}  // namespace spenla
