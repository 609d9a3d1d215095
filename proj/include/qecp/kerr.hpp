// Cross-Kerr probe bookkeeping.  The two coherent probes are tracked
// symbolically as integer phase-multiplier pairs (p, q) in units of theta and
// theta': the protocol only ever branches on integer multiples, so this is
// exact and keeps the simulator finite.  Gaussian statistics enter only at
// measurement time (homodyne.hpp).

#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "qecp/state.hpp"

namespace qecp {

struct ProbePhasePair {
    int p = 0;  // multiplier of theta on probe 1
    int q = 0;  // multiplier of theta' on probe 2

    friend bool operator==(const ProbePhasePair&, const ProbePhasePair&) = default;
    friend auto operator<=>(const ProbePhasePair&, const ProbePhasePair&) = default;
};

// Phase multiplier picked up by the probe per signal mode on one register.
// The protocol uses multipliers in {-1, 0, 1, 2}: probe 1 follows the stated
// rule (-1, 0, 2); probe 2 is keyed (0, +1, +2) so branch labels land on the
// published ledger (the sign of the mode-1 shift is flipped relative to the
// prose rule; the ledger and the post-interaction state both use +theta').
struct KerrRule {
    std::string register_name;
    std::vector<int> multipliers;  // indexed by mode

    void validate() const {
        if (multipliers.empty()) throw std::invalid_argument("KerrRule: empty multipliers");
        for (int m : multipliers)
            if (m < -1 || m > 2)
                throw std::invalid_argument("KerrRule: multiplier outside {-1,0,1,2}");
    }
};

// A state split into coherent-probe branches; branch squared norms sum to the
// input norm^2 (amplitudes are re-binned, never scaled).
struct AnnotatedState {
    std::map<ProbePhasePair, PureState> branches;

    double total_norm2() const {
        double s = 0.0;
        for (const auto& [pair, st] : branches) s += st.norm2();
        return s;
    }
};

inline AnnotatedState annotate(const PureState& s) {
    AnnotatedState a;
    a.branches.emplace(ProbePhasePair{0, 0}, s);
    return a;
}

// Each basis term migrates to the branch whose phase pair is incremented by
// the rule's multiplier for that term's mode; amplitudes are unchanged.
inline AnnotatedState kerr_apply(const AnnotatedState& s, const KerrRule& rule, int probe) {
    rule.validate();
    if (probe != 1 && probe != 2) throw std::invalid_argument("kerr_apply: probe must be 1 or 2");
    AnnotatedState out;
    std::map<ProbePhasePair, AmplitudeMap> buckets;
    std::map<ProbePhasePair, const PureState*> layout_src;
    for (const auto& [pair, st] : s.branches) {
        const int ri = st.register_index(rule.register_name);
        const int dim = st.registers()[ri].dim;
        if (static_cast<int>(rule.multipliers.size()) < dim)
            throw std::invalid_argument("kerr_apply: rule does not cover register modes");
        for (const auto& [label, amp] : st.amps()) {
            const int mult = rule.multipliers[label[ri]];
            ProbePhasePair np = pair;
            (probe == 1 ? np.p : np.q) += mult;
            buckets[np][label] += amp;
            layout_src.emplace(np, &st);
        }
    }
    for (auto& [pair, amps] : buckets)
        out.branches.emplace(pair, PureState(layout_src.at(pair)->registers(), std::move(amps)));
    return out;
}

struct BranchRow {
    ProbePhasePair pair;
    std::string monomial;  // e.g. "a2b" for alpha^2 beta, "-" if not monomial-shaped
    double norm2 = 0.0;
};

// Monomial id from exponent counts (n_alpha, n_beta, n_gamma), e.g. (2,1,0) -> "a2b".
inline std::string monomial_id(int na, int nb, int ng) {
    std::string s;
    const char letters[3] = {'a', 'b', 'g'};
    const int exps[3] = {na, nb, ng};
    for (int i = 0; i < 3; ++i) {
        if (exps[i] == 0) continue;
        s += letters[i];
        if (exps[i] > 1) s += static_cast<char>('0' + exps[i]);
    }
    return s.empty() ? "-" : s;
}

// One row per nonempty branch.  The monomial is recovered by counting the
// modes carried by the pair-leading registers (default a, c, e of the
// three-pair protocol); branches whose terms disagree get "-".
inline std::vector<BranchRow> branch_table(
    const AnnotatedState& s,
    const std::vector<std::string>& pair_leads = {"a", "c", "e"}) {
    std::vector<BranchRow> rows;
    for (const auto& [pair, st] : s.branches) {
        BranchRow row{pair, "-", st.norm2()};
        if (st.term_count() == 0) continue;
        bool consistent = true;
        int counts[3] = {0, 0, 0};
        bool first = true;
        std::vector<int> lead_idx;
        for (const auto& name : pair_leads) lead_idx.push_back(st.register_index(name));
        for (const auto& [label, amp] : st.amps()) {
            int c[3] = {0, 0, 0};
            bool ok = true;
            for (int li : lead_idx) {
                if (label[li] > 2) { ok = false; break; }
                ++c[label[li]];
            }
            if (!ok) { consistent = false; break; }
            if (first) {
                counts[0] = c[0]; counts[1] = c[1]; counts[2] = c[2];
                first = false;
            } else if (c[0] != counts[0] || c[1] != counts[1] || c[2] != counts[2]) {
                consistent = false;
                break;
            }
        }
        if (consistent) row.monomial = monomial_id(counts[0], counts[1], counts[2]);
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace qecp
