#pragma once

// Heralding: which single-photon detectors may fire together, and what the
// surviving state looks like when they do.

#include <array>
#include <map>
#include <string>
#include <vector>

#include "spenla/fock.hpp"

namespace spenla {

struct DetectorAssignment {
    std::string name;  // "D1a" .. "D4b"
    ModeId mode;       // slot watched by this detector
};

// The eight polarization-resolved detectors behind the output ports.
class DetectorMap {
  public:
    // Standard wiring: D1a..D4a watch (a4,H),(a5,V),(a6,H),(a7,V) and
    // D1b..D4b watch (b4,H),(b5,V),(b6,H),(b7,V).
    static DetectorMap standard();

    const std::vector<DetectorAssignment>& detectors() const { return detectors_; }
    const DetectorAssignment& at(const std::string& name) const;
    std::vector<std::string> spatial_labels() const;

  private:
    std::vector<DetectorAssignment> detectors_;
};

// A fourfold coincidence: two detectors on the a side, two on the b side,
// each required to see exactly one photon (all other detectors silent).
struct DetectionPattern {
    std::array<std::string, 4> detectors;
    std::string name() const;
};

// The sixteen coincidences that herald success: {D1D2, D1D4, D2D3, D3D4} on
// the a side crossed with the same four pairs on the b side, in that order.
const std::vector<DetectionPattern>& success_patterns();

struct OutcomeRecord {
    DetectionPattern pattern;
    double probability;
    // Normalized state of the kept modes; the zero state when probability is 0.
    PureState collapsed;
};

// Projects onto "exactly one photon in each detector of `pattern`, none in any
// other detector".  The collapsed state is expressed over a registry holding
// only `keep` (the protocol passes the retained output arms).  Any matching
// term with photons outside keep + detectors indicates a wiring bug and throws.
OutcomeRecord project(const PureState& s, const DetectionPattern& pattern,
                      const DetectorMap& map, const std::vector<std::string>& keep);

struct EnsembleOutcome {
    DetectionPattern pattern;
    double probability;       // summed over branches
    EnsembleState posterior;  // branches reweighted by Bayes' rule
};

// Throws std::domain_error if no branch gives the pattern nonzero probability.
EnsembleOutcome project_ensemble(const EnsembleState& rho, const DetectionPattern& pattern,
                                 const DetectorMap& map, const std::vector<std::string>& keep);

// Probability of every detector-count signature occurring in `s`, keyed by the
// counts at the detector slots in DetectorMap order.  Sums to <s|s>, which is
// the completeness check for a normalized input.
std::map<std::vector<int>, double> outcome_distribution(const PureState& s,
                                                        const DetectorMap& map);

}  // namespace spenla
