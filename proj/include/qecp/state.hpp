// Pure-state algebra over registers of labeled spatial-mode photons.
//
// States are sparse: a map from basis labels (one mode index per register) to
// complex amplitudes. All values are immutable after construction and every
// operation returns a fresh state, so states can be shared freely across
// threads.

#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qecp/complex_matrix.hpp"

namespace qecp {

// Numerical policy: these keep six-photon states (3^6 = 729 labels) exact to
// rounding while never discarding protocol amplitudes.
inline constexpr double kNormTol = 1e-12;
inline constexpr double kUnitaryTol = 1e-10;
inline constexpr double kPruneTol = 1e-15;

struct Register {
    std::string name;
    int dim = 3;
};

inline bool operator==(const Register& a, const Register& b) {
    return a.name == b.name && a.dim == b.dim;
}

// Schmidt coefficients (alpha, beta, gamma) of the partially entangled pair.
// Complex values are admitted; |alpha|^2+|beta|^2+|gamma|^2 must be 1.
struct SchmidtTriple {
    Cx alpha, beta, gamma;

    double norm2() const {
        return std::norm(alpha) + std::norm(beta) + std::norm(gamma);
    }
    bool normalized(double tol = kNormTol) const {
        return std::abs(norm2() - 1.0) <= tol;
    }
};

using BasisLabel = std::vector<int>;  // one mode index per register, in register order
using AmplitudeMap = std::map<BasisLabel, Cx>;  // ordered keys -> deterministic iteration

class PureState {
public:
    PureState() = default;

    PureState(std::vector<Register> registers, AmplitudeMap amps)
        : registers_(std::move(registers)) {
        for (size_t i = 0; i < registers_.size(); ++i) {
            if (registers_[i].dim < 2)
                throw std::invalid_argument("PureState: register dimension < 2");
            for (size_t j = i + 1; j < registers_.size(); ++j)
                if (registers_[i].name == registers_[j].name)
                    throw std::invalid_argument("PureState: duplicate register name '" +
                                                registers_[i].name + "'");
        }
        for (auto& [label, amp] : amps) {
            if (label.size() != registers_.size())
                throw std::invalid_argument("PureState: label length != register count");
            for (size_t i = 0; i < label.size(); ++i)
                if (label[i] < 0 || label[i] >= registers_[i].dim)
                    throw std::invalid_argument("PureState: mode index out of range");
            if (!std::isfinite(amp.real()) || !std::isfinite(amp.imag()))
                throw std::invalid_argument("PureState: non-finite amplitude");
            if (std::abs(amp) >= kPruneTol) amps_.emplace(label, amp);
        }
    }

    static PureState basis(std::vector<Register> registers, BasisLabel label) {
        AmplitudeMap m;
        m.emplace(std::move(label), Cx{1.0, 0.0});
        return PureState(std::move(registers), std::move(m));
    }

    const std::vector<Register>& registers() const { return registers_; }
    const AmplitudeMap& amps() const { return amps_; }
    size_t term_count() const { return amps_.size(); }

    Cx amplitude(const BasisLabel& label) const {
        auto it = amps_.find(label);
        return it == amps_.end() ? Cx{} : it->second;
    }

    int register_index(const std::string& name) const {
        for (size_t i = 0; i < registers_.size(); ++i)
            if (registers_[i].name == name) return static_cast<int>(i);
        throw std::invalid_argument("PureState: no register named '" + name + "'");
    }

    double norm2() const {
        double s = 0.0;
        for (const auto& [label, amp] : amps_) s += std::norm(amp);
        return s;
    }

    bool is_normalized(double tol = kNormTol) const {
        return std::abs(norm2() - 1.0) <= tol;
    }

    PureState normalized() const {
        const double n = std::sqrt(norm2());
        if (n == 0.0) throw std::invalid_argument("PureState: cannot normalize zero state");
        AmplitudeMap m = amps_;
        for (auto& [label, amp] : m) amp /= n;
        return PureState(registers_, std::move(m));
    }

    bool same_layout(const PureState& other) const {
        return registers_.size() == other.registers_.size() &&
               std::equal(registers_.begin(), registers_.end(), other.registers_.begin());
    }

private:
    std::vector<Register> registers_;
    AmplitudeMap amps_;
};

// alpha|00> + beta|11> + gamma|22> on (regA, regB).   Coefficients must be
// normalized; both registers must be qutrits.
inline PureState make_pair_state(const SchmidtTriple& coeffs, const Register& reg_a,
                                 const Register& reg_b) {
    if (!coeffs.normalized())
        throw std::invalid_argument("make_pair_state: coefficients not normalized");
    if (reg_a.dim < 3 || reg_b.dim < 3)
        throw std::invalid_argument("make_pair_state: qutrit registers required");
    AmplitudeMap m;
    const Cx cs[3] = {coeffs.alpha, coeffs.beta, coeffs.gamma};
    for (int i = 0; i < 3; ++i) m.emplace(BasisLabel{i, i}, cs[i]);
    return PureState({reg_a, reg_b}, std::move(m));
}

inline PureState tensor(const PureState& s1, const PureState& s2) {
    std::vector<Register> regs = s1.registers();
    for (const auto& r : s2.registers()) {
        for (const auto& q : regs)
            if (q.name == r.name)
                throw std::invalid_argument("tensor: register name collision '" + r.name + "'");
        regs.push_back(r);
    }
    AmplitudeMap m;
    for (const auto& [l1, a1] : s1.amps())
        for (const auto& [l2, a2] : s2.amps()) {
            BasisLabel l = l1;
            l.insert(l.end(), l2.begin(), l2.end());
            m.emplace(std::move(l), a1 * a2);
        }
    return PureState(std::move(regs), std::move(m));
}

// Linear action of u on the mode index of one register.
inline PureState apply_unitary(const PureState& s, const std::string& reg, const Matrix& u) {
    const int ri = s.register_index(reg);
    const int dim = s.registers()[ri].dim;
    if (u.rows() != dim || u.cols() != dim)
        throw std::invalid_argument("apply_unitary: matrix dimension != register dimension");
    AmplitudeMap m;
    for (const auto& [label, amp] : s.amps()) {
        const int j = label[ri];
        for (int i = 0; i < dim; ++i) {
            const Cx uij = u(i, j);
            if (uij == Cx{}) continue;
            BasisLabel l = label;
            l[ri] = i;
            m[l] += uij * amp;
        }
    }
    return PureState(s.registers(), std::move(m));
}

// Projects one register onto <vec| and removes it.  Returns the un-normalized
// residual together with the outcome probability (the residual's squared
// norm); over an orthonormal basis the probabilities sum to the input norm^2.
inline std::pair<PureState, double> project(const PureState& s, const std::string& reg,
                                            const std::vector<Cx>& vec) {
    const int ri = s.register_index(reg);
    const int dim = s.registers()[ri].dim;
    if (static_cast<int>(vec.size()) != dim)
        throw std::invalid_argument("project: vector length != register dimension");
    double v2 = 0.0;
    for (const Cx& c : vec) v2 += std::norm(c);
    if (std::abs(v2 - 1.0) > kNormTol)
        throw std::invalid_argument("project: projection vector not normalized");

    std::vector<Register> regs;
    for (int i = 0; i < static_cast<int>(s.registers().size()); ++i)
        if (i != ri) regs.push_back(s.registers()[i]);
    AmplitudeMap m;
    for (const auto& [label, amp] : s.amps()) {
        BasisLabel l;
        l.reserve(label.size() - 1);
        for (int i = 0; i < static_cast<int>(label.size()); ++i)
            if (i != ri) l.push_back(label[i]);
        m[l] += std::conj(vec[label[ri]]) * amp;
    }
    // Accumulate before pruning so cancellations below the threshold drop out.
    PureState residual(std::move(regs), std::move(m));
    return {residual, residual.norm2()};
}

inline Cx inner_product(const PureState& s1, const PureState& s2) {
    if (!s1.same_layout(s2))
        throw std::invalid_argument("inner_product: register layout mismatch");
    // Iterate over the smaller map.
    const PureState& a = s1.term_count() <= s2.term_count() ? s1 : s2;
    const PureState& b = s1.term_count() <= s2.term_count() ? s2 : s1;
    Cx acc{};
    for (const auto& [label, amp] : a.amps()) {
        const Cx other = b.amplitude(label);
        if (&a == &s1)
            acc += std::conj(amp) * other;
        else
            acc += std::conj(other) * amp;
    }
    return acc;
}

// |<s1|s2>|^2 for normalized states with identical register layout.
inline double fidelity(const PureState& s1, const PureState& s2) {
    if (!s1.is_normalized() || !s2.is_normalized())
        throw std::invalid_argument("fidelity: states must be normalized");
    return std::norm(inner_product(s1, s2));
}

}  // namespace qecp
