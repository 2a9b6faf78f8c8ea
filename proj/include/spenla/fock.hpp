#pragma once

// Sparse Fock-space states over a fixed set of named optical modes.
//
// A "mode" is a spatial label ("a1", "c3", ...) together with a polarization
// slot (H or V).  States are kept as sparse maps from occupation-number basis
// kets to complex amplitudes, which is exact for the photon numbers that occur
// here (a handful of photons spread over a few dozen slots).

#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace spenla {

using Complex = std::complex<double>;

// Amplitudes below this magnitude are dropped when a state is pruned.
inline constexpr double kPruneTol = 1e-12;

// Default tolerance for comparing amplitudes, probabilities and fidelities.
inline constexpr double kCompareTol = 1e-10;

// Closed-form evaluation refuses transmissivities closer than this to 0 or 1.
inline constexpr double kBoundaryTol = 1e-9;

enum class Pol : std::uint8_t { H = 0, V = 1 };

inline char pol_name(Pol p) { return p == Pol::H ? 'H' : 'V'; }

struct ModeId {
    std::string spatial;
    Pol pol;
};

// Immutable, ordered set of spatial labels.  Every label owns two slots, one
// per polarization.  The canonical slot order is lexicographic in the label
// with H before V; all kets, serializations and tensor products use it.
class ModeRegistry {
  public:
    // Sorts the labels, rejects duplicates and empty names.
    static std::shared_ptr<const ModeRegistry> make(std::vector<std::string> labels);

    std::size_t label_count() const { return labels_.size(); }
    std::size_t slot_count() const { return 2 * labels_.size(); }
    const std::vector<std::string>& labels() const { return labels_; }

    bool has_label(const std::string& spatial) const;
    std::size_t label_index(const std::string& spatial) const;  // throws if unknown

    std::size_t slot(const std::string& spatial, Pol pol) const;
    std::size_t slot(const ModeId& mode) const { return slot(mode.spatial, mode.pol); }
    ModeId mode_at(std::size_t slot) const;

    bool same_as(const ModeRegistry& other) const { return labels_ == other.labels_; }
    bool disjoint_from(const ModeRegistry& other) const;

  private:
    explicit ModeRegistry(std::vector<std::string> labels) : labels_(std::move(labels)) {}
    std::vector<std::string> labels_;
};

using RegistryPtr = std::shared_ptr<const ModeRegistry>;

// Occupation numbers for every slot of some registry, in canonical slot order.
class BasisKet {
  public:
    BasisKet() = default;
    explicit BasisKet(std::size_t slot_count) : counts_(slot_count, 0) {}

    std::size_t size() const { return counts_.size(); }
    int count(std::size_t slot) const { return counts_[slot]; }
    void set_count(std::size_t slot, int n);
    int total_photons() const;

    bool operator==(const BasisKet& other) const { return counts_ == other.counts_; }
    bool operator<(const BasisKet& other) const { return counts_ < other.counts_; }

    const std::vector<std::uint8_t>& counts() const { return counts_; }

  private:
    std::vector<std::uint8_t> counts_;
};

// Sparse superposition of occupation-number kets over one registry.
// Value type; operations return new states and never mutate their inputs.
class PureState {
  public:
    explicit PureState(RegistryPtr registry);

    static PureState vacuum(RegistryPtr registry);

    const ModeRegistry& registry() const { return *registry_; }
    const RegistryPtr& registry_ptr() const { return registry_; }

    std::size_t term_count() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }
    const std::map<BasisKet, Complex>& terms() const { return terms_; }

    // Amplitude of a ket, zero if absent.
    Complex amplitude(const BasisKet& ket) const;

    // Accumulates amplitude onto a ket.  Callers building states by hand
    // should prune() when done to restore the no-tiny-amplitudes invariant.
    void add_term(const BasisKet& ket, Complex amp);

    void prune(double tol = kPruneTol);

  private:
    RegistryPtr registry_;
    std::map<BasisKet, Complex> terms_;
};

PureState operator*(Complex scale, const PureState& s);
PureState operator+(const PureState& lhs, const PureState& rhs);

// <lhs|rhs>; both states must live on the same registry.
Complex inner(const PureState& lhs, const PureState& rhs);

double norm(const PureState& s);

// Throws std::domain_error on the zero state.
PureState normalize(const PureState& s);

// |<lhs|rhs>|^2 for normalized inputs.
double fidelity(const PureState& lhs, const PureState& rhs);

// Applies the creation operator of one mode: |n> -> sqrt(n+1)|n+1>.
// The result is intentionally not re-normalized.
PureState create_photon(const PureState& s, const ModeId& mode);

// Product state over the merged registry; the two registries must be disjoint.
PureState tensor(const PureState& lhs, const PureState& rhs);

// One line per term: comma-separated slot counts, real part, imaginary part.
// Terms appear in canonical ket order; used by golden-file tests.
std::string to_debug_string(const PureState& s);

struct WeightedBranch {
    double weight;
    PureState state;
};

// Classical mixture of pure states.  Exact for this protocol because the
// branches (signal present / photon lost) never interfere.
class EnsembleState {
  public:
    // Branches with weight 0 are dropped; remaining weights must be positive
    // and sum to 1 within 1e-12, and every branch must be normalized.
    explicit EnsembleState(std::vector<WeightedBranch> branches);

    const std::vector<WeightedBranch>& branches() const { return branches_; }
    std::size_t branch_count() const { return branches_.size(); }

  private:
    std::vector<WeightedBranch> branches_;
};

}  // namespace spenla
