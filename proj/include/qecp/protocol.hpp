// The unknown-parameter qutrit entanglement-concentration pipeline: initial
// three-pair state, the two probe interactions, homodyne branch selection,
// Fourier-port measurement of photons c,d,e,f, feed-forward correction and
// output classification.
//
// Everything here is derived by exact enumeration over the 3^4 measurement
// outcomes; published tables are treated as regression fixtures to diff
// against, not as inputs.

#pragma once

#include <array>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qecp/kerr.hpp"
#include "qecp/qutrit.hpp"
#include "qecp/state.hpp"

namespace qecp {

struct EmptyBranchError : std::runtime_error {
    explicit EmptyBranchError(const std::string& what) : std::runtime_error(what) {}
};

enum class OutcomeTag {
    kMaximal,      // Psi_4_0
    kQubitAB,      // Psi_4_1: 2:1 on {|00>,|11>}
    kQubitBA,      // Psi_4_2: 1:2 on {|00>,|11>}
    kQubitAC,      // Psi_4_3: 2:1 on {|00>,|22>}
    kQubitCA,      // Psi_4_4: 1:2 on {|00>,|22>}
    kQubitBCMinor, // Psi_4_5: 1:2 on {|11>,|22>}
    kQubitCB,      // Psi_4_6: 2:1 on {|11>,|22>}
    kProduct0,     // Psi_4_7
    kProduct1,     // Psi_4_8
    kProduct2,     // Psi_4_9
    kUnclassifiable,
};

enum class Subpattern { kNone, kRatio21, kRatio11, kCollapsed };

struct OutcomeClass {
    OutcomeTag tag = OutcomeTag::kUnclassifiable;
    Subpattern subpattern = Subpattern::kNone;

    friend bool operator==(const OutcomeClass&, const OutcomeClass&) = default;
};

inline bool is_qubit_tag(OutcomeTag t) {
    switch (t) {
        case OutcomeTag::kQubitAB:
        case OutcomeTag::kQubitBA:
        case OutcomeTag::kQubitAC:
        case OutcomeTag::kQubitCA:
        case OutcomeTag::kQubitBCMinor:
        case OutcomeTag::kQubitCB:
            return true;
        default:
            return false;
    }
}

inline const char* to_string(OutcomeTag t) {
    switch (t) {
        case OutcomeTag::kMaximal: return "MAXIMAL";
        case OutcomeTag::kQubitAB: return "QUBIT_AB";
        case OutcomeTag::kQubitBA: return "QUBIT_BA";
        case OutcomeTag::kQubitAC: return "QUBIT_AC";
        case OutcomeTag::kQubitCA: return "QUBIT_CA";
        case OutcomeTag::kQubitBCMinor: return "QUBIT_BC_minor";
        case OutcomeTag::kQubitCB: return "QUBIT_CB";
        case OutcomeTag::kProduct0: return "PRODUCT_0";
        case OutcomeTag::kProduct1: return "PRODUCT_1";
        case OutcomeTag::kProduct2: return "PRODUCT_2";
        default: return "UNCLASSIFIABLE";
    }
}

inline const char* to_string(Subpattern s) {
    switch (s) {
        case Subpattern::kRatio21: return "RATIO_2_1";
        case Subpattern::kRatio11: return "RATIO_1_1";
        case Subpattern::kCollapsed: return "COLLAPSED";
        default: return "";
    }
}

// Measurement outcomes for photons c, e, d, f (port indices 0..2 each).
struct FourierOutcome {
    int k = 0, l = 0, m = 0, n = 0;

    int index() const { return ((k * 3 + l) * 3 + m) * 3 + n; }
    static FourierOutcome from_index(int idx) {
        return {idx / 27, (idx / 9) % 3, (idx / 3) % 3, idx % 3};
    }
    friend bool operator==(const FourierOutcome&, const FourierOutcome&) = default;
};

// ------------------------------------------------------------------------
// Branch ledger: monomial <-> probe phase pair <-> output family.

struct LedgerRow {
    const char* monomial;
    ProbePhasePair pair;
    OutcomeTag tag;
};

inline const std::array<LedgerRow, 10>& branch_ledger() {
    static const std::array<LedgerRow, 10> rows{{
        {"a3", {-3, 0}, OutcomeTag::kProduct0},
        {"a2b", {-2, 1}, OutcomeTag::kQubitAB},
        {"ab2", {-1, 2}, OutcomeTag::kQubitBA},
        {"abg", {1, 3}, OutcomeTag::kMaximal},
        {"a2g", {0, 2}, OutcomeTag::kQubitAC},
        {"ag2", {3, 4}, OutcomeTag::kQubitCA},
        {"bg2", {4, 5}, OutcomeTag::kQubitBCMinor},
        {"b2g", {2, 4}, OutcomeTag::kQubitCB},
        {"b3", {0, 3}, OutcomeTag::kProduct1},
        {"g3", {6, 6}, OutcomeTag::kProduct2},
    }};
    return rows;
}

inline const LedgerRow* ledger_lookup(const ProbePhasePair& pair) {
    for (const auto& row : branch_ledger())
        if (row.pair == pair) return &row;
    return nullptr;
}

// ------------------------------------------------------------------------
// Pipeline steps.

// |Psi_0> = |psi>_ab (x) |psi'>_cd (x) |psi''>_ef  (27 terms).
inline PureState build_initial(const SchmidtTriple& coeffs) {
    const PureState ab = make_pair_state(coeffs, {"a", 3}, {"b", 3});
    const PureState cd = make_pair_state(coeffs, {"c", 3}, {"d", 3});
    const PureState ef = make_pair_state(coeffs, {"e", 3}, {"f", 3});
    return tensor(tensor(ab, cd), ef);
}

// Probe 1: modes (0,1,2) shift the first probe by (-1, 0, +2) theta.
inline KerrRule probe1_rule(const std::string& reg) { return {reg, {-1, 0, 2}}; }

// Probe 2: keyed (0, +1, +2) theta' so that branch labels reproduce the
// published ledger (the prose states -theta' for mode 1; the ledger and the
// post-interaction state carry +theta', so the positive sign is used).
inline KerrRule probe2_rule(const std::string& reg) { return {reg, {0, 1, 2}}; }

// Runs both probes over photons b, d, f; generic coefficients yield exactly
// the ten ledger branches.
inline AnnotatedState evolve_probes(const PureState& s) {
    AnnotatedState a = annotate(s);
    for (const char* reg : {"b", "d", "f"}) a = kerr_apply(a, probe1_rule(reg), 1);
    for (const char* reg : {"b", "d", "f"}) a = kerr_apply(a, probe2_rule(reg), 2);
    return a;
}

// Normalized branch state and its probability.
inline std::pair<PureState, double> homodyne_select(const AnnotatedState& a,
                                                    const ProbePhasePair& pair) {
    auto it = a.branches.find(pair);
    if (it == a.branches.end() || it->second.term_count() == 0)
        throw EmptyBranchError("homodyne_select: branch (" + std::to_string(pair.p) + "," +
                               std::to_string(pair.q) + ") is empty");
    const double prob = it->second.norm2();
    return {it->second.normalized(), prob};
}

struct BranchInfo {
    double prob = 0.0;
    OutcomeTag tag = OutcomeTag::kUnclassifiable;
    std::string monomial;
};

// Exact enumeration of branch probabilities for a normalized triple.
inline std::map<ProbePhasePair, BranchInfo> enumerate_branches(const SchmidtTriple& coeffs) {
    const AnnotatedState evolved = evolve_probes(build_initial(coeffs));
    std::map<ProbePhasePair, BranchInfo> out;
    for (const auto& [pair, st] : evolved.branches) {
        const double p = st.norm2();
        if (p == 0.0) continue;
        const LedgerRow* row = ledger_lookup(pair);
        BranchInfo info;
        info.prob = p;
        info.tag = row ? row->tag : OutcomeTag::kUnclassifiable;
        info.monomial = row ? row->monomial : "-";
        out.emplace(pair, info);
    }
    return out;
}

// ------------------------------------------------------------------------
// Classification.

// Canonical two-photon output states on registers (a, b); register a may be
// wider than a qutrit (the known-parameter scheme uses 5 modes).
inline PureState canonical_state(const OutcomeClass& cls, const Register& reg_a = {"a", 3},
                                 const Register& reg_b = {"b", 3}) {
    AmplitudeMap m;
    const double r5 = 1.0 / std::sqrt(5.0);
    const double r2 = 1.0 / std::sqrt(2.0);
    const double r3 = 1.0 / std::sqrt(3.0);
    auto two_term = [&](int i, int j, double wi, double wj) {
        m.emplace(BasisLabel{i, i}, Cx{wi, 0});
        m.emplace(BasisLabel{j, j}, Cx{wj, 0});
    };
    const bool balanced = cls.subpattern == Subpattern::kRatio11;
    switch (cls.tag) {
        case OutcomeTag::kMaximal:
            for (int i = 0; i < 3; ++i) m.emplace(BasisLabel{i, i}, Cx{r3, 0});
            break;
        case OutcomeTag::kQubitAB:
            balanced ? two_term(0, 1, r2, r2) : two_term(0, 1, 2 * r5, r5);
            break;
        case OutcomeTag::kQubitBA:
            balanced ? two_term(0, 1, r2, r2) : two_term(0, 1, r5, 2 * r5);
            break;
        case OutcomeTag::kQubitAC:
            balanced ? two_term(0, 2, r2, r2) : two_term(0, 2, 2 * r5, r5);
            break;
        case OutcomeTag::kQubitCA:
            balanced ? two_term(0, 2, r2, r2) : two_term(0, 2, r5, 2 * r5);
            break;
        case OutcomeTag::kQubitBCMinor:
            balanced ? two_term(1, 2, r2, r2) : two_term(1, 2, r5, 2 * r5);
            break;
        case OutcomeTag::kQubitCB:
            balanced ? two_term(1, 2, r2, r2) : two_term(1, 2, 2 * r5, r5);
            break;
        case OutcomeTag::kProduct0: m.emplace(BasisLabel{0, 0}, Cx{1, 0}); break;
        case OutcomeTag::kProduct1: m.emplace(BasisLabel{1, 1}, Cx{1, 0}); break;
        case OutcomeTag::kProduct2: m.emplace(BasisLabel{2, 2}, Cx{1, 0}); break;
        default:
            throw std::invalid_argument("canonical_state: no canonical form for this class");
    }
    return PureState({reg_a, reg_b}, std::move(m));
}

// Matches a normalized (a,b) state against the canonical families up to
// per-term phases; tolerance on amplitude magnitudes.  Balanced two-term
// states are tagged by the family whose heavy side is the lower mode
// (QUBIT_AB, QUBIT_AC, QUBIT_CB).
inline OutcomeClass classify_output(const PureState& s, double tol = 1e-9) {
    if (s.registers().size() != 2)
        throw std::invalid_argument("classify_output: two-register state required");
    double mag[3] = {0, 0, 0};
    for (const auto& [label, amp] : s.amps()) {
        if (std::abs(amp) <= tol) continue;
        if (label[0] != label[1] || label[0] > 2) return {OutcomeTag::kUnclassifiable};
        mag[label[0]] = std::abs(amp);
    }
    std::vector<int> support;
    for (int i = 0; i < 3; ++i)
        if (mag[i] > tol) support.push_back(i);

    const double r5 = 1.0 / std::sqrt(5.0);
    const double r2 = 1.0 / std::sqrt(2.0);
    const double r3 = 1.0 / std::sqrt(3.0);
    auto near = [tol](double x, double y) { return std::abs(x - y) <= tol; };

    if (support.size() == 3) {
        if (near(mag[0], r3) && near(mag[1], r3) && near(mag[2], r3))
            return {OutcomeTag::kMaximal};
        return {OutcomeTag::kUnclassifiable};
    }
    if (support.size() == 2) {
        const int i = support[0], j = support[1];
        OutcomeTag heavy_lo, heavy_hi;
        if (i == 0 && j == 1) { heavy_lo = OutcomeTag::kQubitAB; heavy_hi = OutcomeTag::kQubitBA; }
        else if (i == 0 && j == 2) { heavy_lo = OutcomeTag::kQubitAC; heavy_hi = OutcomeTag::kQubitCA; }
        else { heavy_lo = OutcomeTag::kQubitCB; heavy_hi = OutcomeTag::kQubitBCMinor; }
        if (near(mag[i], 2 * r5) && near(mag[j], r5)) return {heavy_lo, Subpattern::kRatio21};
        if (near(mag[i], r5) && near(mag[j], 2 * r5)) return {heavy_hi, Subpattern::kRatio21};
        if (near(mag[i], r2) && near(mag[j], r2)) return {heavy_lo, Subpattern::kRatio11};
        return {OutcomeTag::kUnclassifiable};
    }
    if (support.size() == 1 && near(mag[support[0]], 1.0)) {
        switch (support[0]) {
            case 0: return {OutcomeTag::kProduct0};
            case 1: return {OutcomeTag::kProduct1};
            default: return {OutcomeTag::kProduct2};
        }
    }
    return {OutcomeTag::kUnclassifiable};
}

// ------------------------------------------------------------------------
// Feed-forward derivation.

struct FeedForwardEntry {
    ProbePhasePair branch;
    FourierOutcome outcome;
    Matrix correction;          // 3x3 diagonal unitary acting on photon a
    std::string correction_id;  // "U0".."U4" or "diag(t0,t1,t2)"
    OutcomeClass final_class;
    double cond_prob = 0.0;     // conditional on the branch; sums to 1 over 81
    bool flagged = false;       // correction fell outside the expected family
    PureState corrected;        // normalized (a,b) state after correction
};

namespace detail {

// Token for a unit phase in the group {±1, ±w, ±w^2}; falls back to the
// numeric angle (should not happen for protocol branches).
inline std::string phase_token(Cx v) {
    static const std::pair<Cx, const char*> table[] = {
        {omega3(0), "1"},  {omega3(1), "w"},   {omega3(2), "w2"},
        {-omega3(0), "-1"}, {-omega3(1), "-w"}, {-omega3(2), "-w2"},
    };
    for (const auto& [val, tok] : table)
        if (std::abs(v - val) < 1e-9) return tok;
    char buf[40];
    std::snprintf(buf, sizeof(buf), "e^i%.9f", std::arg(v));
    return buf;
}

inline std::string diag_id(const Matrix& d) {
    return "diag(" + phase_token(d(0, 0)) + "," + phase_token(d(1, 1)) + "," +
           phase_token(d(2, 2)) + ")";
}

}  // namespace detail

// Normalized branch state for one ledger pair.  The normalized branch states
// do not depend on the Schmidt coefficients, so only the phase pair is
// needed.
inline PureState ledger_branch_state(const ProbePhasePair& branch) {
    if (!ledger_lookup(branch))
        throw EmptyBranchError("branch (" + std::to_string(branch.p) + "," +
                               std::to_string(branch.q) + ") not in the ledger");
    const double r3 = 1.0 / std::sqrt(3.0);
    const SchmidtTriple balanced{r3, r3, r3};
    return homodyne_select(evolve_probes(build_initial(balanced)), branch).first;
}

using PortVectors = std::array<std::vector<Cx>, 3>;

inline PortVectors ideal_ports() {
    return {fourier_port(0), fourier_port(1), fourier_port(2)};
}

// Un-normalized (a,b) residual of a branch state after detecting photons
// c,e,d,f at ports (k,l,m,n); second element is the outcome probability
// conditional on the branch.
inline std::pair<PureState, double> measure_ports(const PureState& branch_state,
                                                  const FourierOutcome& oc,
                                                  const PortVectors& ports) {
    auto [s1, p1] = project(branch_state, "c", ports[static_cast<size_t>(oc.k)]);
    auto [s2, p2] = project(s1, "e", ports[static_cast<size_t>(oc.l)]);
    auto [s3, p3] = project(s2, "d", ports[static_cast<size_t>(oc.m)]);
    return project(s3, "f", ports[static_cast<size_t>(oc.n)]);
}

// Brute-force feed-forward table for one ledger branch: all 81 outcomes of
// the Fourier-port measurement on photons c,e,d,f, each with its correction
// (restricted to U_0..U_4 on the maximal branch, a derived diagonal phase
// unitary elsewhere), final class and conditional probability.
inline std::vector<FeedForwardEntry> derive_feedforward(const ProbePhasePair& branch) {
    const LedgerRow* row = ledger_lookup(branch);
    if (!row)
        throw EmptyBranchError("derive_feedforward: branch (" + std::to_string(branch.p) + "," +
                               std::to_string(branch.q) + ") not in the ledger");
    const PureState branch_state = ledger_branch_state(branch);
    const PortVectors ports = ideal_ports();

    const auto us = correction_unitaries();
    const PureState omega_0 = canonical_state({OutcomeTag::kMaximal});

    std::vector<FeedForwardEntry> entries;
    entries.reserve(81);
    for (int idx = 0; idx < 81; ++idx) {
        const FourierOutcome oc = FourierOutcome::from_index(idx);
        auto [s4, cond] = measure_ports(branch_state, oc, ports);
        FeedForwardEntry e;
        e.branch = branch;
        e.outcome = oc;
        e.cond_prob = cond;
        const PureState residual = s4.normalized();

        if (row->tag == OutcomeTag::kMaximal) {
            // Prefer the unitary that lands exactly on +Omega_0; the outcomes
            // whose residual is -Omega_0 fall back to the unique fidelity-1
            // candidate (U_0).
            int exact = -1, fid1 = -1;
            for (int u = 0; u < 5 && exact < 0; ++u) {
                const PureState c = apply_unitary(residual, "a", us[u]);
                double dev = 0.0;
                for (const auto& [label, amp] : c.amps())
                    dev = std::max(dev, std::abs(amp - omega_0.amplitude(label)));
                if (c.term_count() == 3 && dev < 1e-10) exact = u;
                if (fid1 < 0 && std::abs(fidelity(c, omega_0) - 1.0) < 1e-10) fid1 = u;
            }
            const int pick = exact >= 0 ? exact : fid1;
            if (pick < 0) {
                // Loud failure path: derive the diagonal that would work and flag it.
                Matrix d = Matrix::identity(3);
                for (const auto& [label, amp] : residual.amps())
                    d(label[0], label[0]) = std::conj(amp) / std::abs(amp);
                e.correction = d;
                e.correction_id = detail::diag_id(d);
                e.flagged = true;
            } else {
                e.correction = us[pick];
                e.correction_id = "U" + std::to_string(pick);
            }
        } else {
            // Diagonal phase correction rotating every occupied term to the
            // positive real axis.
            Matrix d = Matrix::identity(3);
            for (const auto& [label, amp] : residual.amps())
                d(label[0], label[0]) = std::conj(amp) / std::abs(amp);
            e.correction = d;
            e.correction_id = detail::diag_id(d);
        }
        e.corrected = apply_unitary(residual, "a", e.correction);
        e.final_class = classify_output(e.corrected);
        if (e.final_class.tag == OutcomeTag::kUnclassifiable) e.flagged = true;
        entries.push_back(std::move(e));
    }
    return entries;
}

}  // namespace qecp
