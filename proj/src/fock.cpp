#include "spenla/fock.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace spenla {

std::shared_ptr<const ModeRegistry> ModeRegistry::make(std::vector<std::string> labels) {
    std::sort(labels.begin(), labels.end());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i].empty())
            throw std::invalid_argument("mode label must not be empty");
        if (i > 0 && labels[i] == labels[i - 1])
            throw std::invalid_argument("duplicate mode label: " + labels[i]);
    }
    return std::shared_ptr<const ModeRegistry>(new ModeRegistry(std::move(labels)));
}

bool ModeRegistry::has_label(const std::string& spatial) const {
    return std::binary_search(labels_.begin(), labels_.end(), spatial);
}

std::size_t ModeRegistry::label_index(const std::string& spatial) const {
    auto it = std::lower_bound(labels_.begin(), labels_.end(), spatial);
    if (it == labels_.end() || *it != spatial)
        throw std::invalid_argument("mode label not registered: " + spatial);
    return static_cast<std::size_t>(it - labels_.begin());
}

std::size_t ModeRegistry::slot(const std::string& spatial, Pol pol) const {
    return 2 * label_index(spatial) + (pol == Pol::V ? 1 : 0);
}

ModeId ModeRegistry::mode_at(std::size_t slot) const {
    if (slot >= slot_count())
        throw std::out_of_range("slot index out of range");
    return ModeId{labels_[slot / 2], slot % 2 == 0 ? Pol::H : Pol::V};
}

bool ModeRegistry::disjoint_from(const ModeRegistry& other) const {
    for (const auto& label : other.labels_)
        if (has_label(label)) return false;
    return true;
}

void BasisKet::set_count(std::size_t slot, int n) {
    if (n < 0 || n > 255)
        throw std::invalid_argument("occupation number out of range");
    counts_[slot] = static_cast<std::uint8_t>(n);
}

int BasisKet::total_photons() const {
    int total = 0;
    for (auto c : counts_) total += c;
    return total;
}

PureState::PureState(RegistryPtr registry) : registry_(std::move(registry)) {
    if (!registry_)
        throw std::invalid_argument("PureState requires a registry");
}

PureState PureState::vacuum(RegistryPtr registry) {
    PureState s(std::move(registry));
    s.add_term(BasisKet(s.registry().slot_count()), 1.0);
    return s;
}

Complex PureState::amplitude(const BasisKet& ket) const {
    auto it = terms_.find(ket);
    return it == terms_.end() ? Complex(0.0) : it->second;
}

void PureState::add_term(const BasisKet& ket, Complex amp) {
    if (ket.size() != registry_->slot_count())
        throw std::invalid_argument("ket size does not match registry");
    auto [it, inserted] = terms_.try_emplace(ket, amp);
    if (!inserted) it->second += amp;
}

void PureState::prune(double tol) {
    for (auto it = terms_.begin(); it != terms_.end();) {
        if (std::abs(it->second) < tol)
            it = terms_.erase(it);
        else
            ++it;
    }
}

PureState operator*(Complex scale, const PureState& s) {
    PureState out(s.registry_ptr());
    for (const auto& [ket, amp] : s.terms()) out.add_term(ket, scale * amp);
    out.prune();
    return out;
}

PureState operator+(const PureState& lhs, const PureState& rhs) {
    if (!lhs.registry().same_as(rhs.registry()))
        throw std::invalid_argument("cannot add states over different registries");
    PureState out(lhs.registry_ptr());
    for (const auto& [ket, amp] : lhs.terms()) out.add_term(ket, amp);
    for (const auto& [ket, amp] : rhs.terms()) out.add_term(ket, amp);
    out.prune();
    return out;
}

Complex inner(const PureState& lhs, const PureState& rhs) {
    if (!lhs.registry().same_as(rhs.registry()))
        throw std::invalid_argument("inner product requires a common registry");
    // Iterate the smaller map.
    const PureState& small = lhs.term_count() <= rhs.term_count() ? lhs : rhs;
    const PureState& large = lhs.term_count() <= rhs.term_count() ? rhs : lhs;
    const bool small_is_lhs = &small == &lhs;
    Complex acc = 0.0;
    for (const auto& [ket, amp] : small.terms()) {
        Complex other = large.amplitude(ket);
        acc += small_is_lhs ? std::conj(amp) * other : std::conj(other) * amp;
    }
    return acc;
}

double norm(const PureState& s) {
    double acc = 0.0;
    for (const auto& [ket, amp] : s.terms()) acc += std::norm(amp);
    return std::sqrt(acc);
}

PureState normalize(const PureState& s) {
    double n = norm(s);
    if (n == 0.0)
        throw std::domain_error("cannot normalize the zero state");
    return Complex(1.0 / n) * s;
}

double fidelity(const PureState& lhs, const PureState& rhs) {
    return std::norm(inner(lhs, rhs));
}

PureState create_photon(const PureState& s, const ModeId& mode) {
    const std::size_t slot = s.registry().slot(mode);
    PureState out(s.registry_ptr());
    for (const auto& [ket, amp] : s.terms()) {
        BasisKet raised = ket;
        const int n = ket.count(slot);
        raised.set_count(slot, n + 1);
        out.add_term(raised, amp * std::sqrt(static_cast<double>(n + 1)));
    }
    out.prune();
    return out;
}

PureState tensor(const PureState& lhs, const PureState& rhs) {
    const ModeRegistry& lr = lhs.registry();
    const ModeRegistry& rr = rhs.registry();
    if (!lr.disjoint_from(rr))
        throw std::invalid_argument("tensor requires disjoint spatial labels");

    std::vector<std::string> merged = lr.labels();
    merged.insert(merged.end(), rr.labels().begin(), rr.labels().end());
    RegistryPtr reg = ModeRegistry::make(std::move(merged));

    // Slot translation tables into the merged registry.
    auto slot_map = [&reg](const ModeRegistry& src) {
        std::vector<std::size_t> map(src.slot_count());
        for (std::size_t s = 0; s < src.slot_count(); ++s)
            map[s] = reg->slot(src.mode_at(s));
        return map;
    };
    const auto lmap = slot_map(lr);
    const auto rmap = slot_map(rr);

    PureState out(reg);
    for (const auto& [lket, lamp] : lhs.terms()) {
        for (const auto& [rket, ramp] : rhs.terms()) {
            BasisKet ket(reg->slot_count());
            for (std::size_t s = 0; s < lket.size(); ++s)
                if (lket.count(s)) ket.set_count(lmap[s], lket.count(s));
            for (std::size_t s = 0; s < rket.size(); ++s)
                if (rket.count(s)) ket.set_count(rmap[s], rket.count(s));
            out.add_term(ket, lamp * ramp);
        }
    }
    out.prune();
    return out;
}

std::string to_debug_string(const PureState& s) {
    std::ostringstream os;
    char buf[64];
    for (const auto& [ket, amp] : s.terms()) {
        for (std::size_t i = 0; i < ket.size(); ++i) {
            if (i) os << ',';
            os << ket.count(i);
        }
        std::snprintf(buf, sizeof buf, " %.17g %.17g", amp.real(), amp.imag());
        os << buf << '\n';
    }
    return os.str();
}

EnsembleState::EnsembleState(std::vector<WeightedBranch> branches) {
    double total = 0.0;
    for (auto& branch : branches) {
        if (branch.weight < 0.0)
            throw std::invalid_argument("ensemble weight must be non-negative");
        if (branch.weight == 0.0) continue;
        if (std::abs(norm(branch.state) - 1.0) > 1e-10)
            throw std::invalid_argument("ensemble branch is not normalized");
        total += branch.weight;
        branches_.push_back(std::move(branch));
    }
    if (branches_.empty())
        throw std::invalid_argument("ensemble needs at least one branch with weight > 0");
    if (std::abs(total - 1.0) > 1e-12)
        throw std::invalid_argument("ensemble weights must sum to 1");
}

}  // namespace spenla
