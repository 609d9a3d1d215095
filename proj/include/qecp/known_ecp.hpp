// Known-parameter linear-optics concentration: two unbalanced beam splitters
// route the excess of the two larger Schmidt coefficients into monitored loss
// modes; success is heralded by neither detector firing.
//
// Photon a is a 5-mode register {0, 1, 2, 0', 1'} (indices 3 and 4 are the
// loss modes watched by detectors D1 and D2); everything is exact state
// arithmetic, no sampling.

#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "qecp/complex_matrix.hpp"
#include "qecp/state.hpp"

namespace qecp {

struct DegenerateRankError : std::invalid_argument {
    explicit DegenerateRankError(const std::string& what) : std::invalid_argument(what) {}
};

struct UbsSpec {
    double reflectivity = 1.0;  // in (0, 1]
    int source_mode = 0;
    int loss_mode = 3;
};

// |source> -> r|source> + sqrt(1-r^2)|loss>, identity elsewhere; completed to
// a rotation so the transform is exactly unitary.
inline Matrix ubs_transform(const UbsSpec& u, int dim) {
    if (!(u.reflectivity > 0.0) || u.reflectivity > 1.0)
        throw std::invalid_argument("ubs_transform: reflectivity outside (0,1]");
    if (u.source_mode == u.loss_mode || u.source_mode < 0 || u.loss_mode < 0 ||
        u.source_mode >= dim || u.loss_mode >= dim)
        throw std::invalid_argument("ubs_transform: bad mode indices");
    const double r = u.reflectivity;
    const double t = std::sqrt(std::max(0.0, 1.0 - r * r));
    Matrix m = Matrix::identity(dim);
    m(u.source_mode, u.source_mode) = r;
    m(u.loss_mode, u.source_mode) = t;
    m(u.source_mode, u.loss_mode) = -t;
    m(u.loss_mode, u.loss_mode) = r;
    return m;
}

struct KnownEcpResult {
    double success_prob = 0.0;   // simulated: no detector fires
    double paper_claimed = 0.0;  // the published |gamma|^2/3 figure, for comparison
    PureState heralded;          // normalized post-selection state
    std::array<double, 2> detector_probs{0.0, 0.0};
    double fidelity_to_maximal = 0.0;
};

inline constexpr int kLossMode0 = 3;  // 0'
inline constexpr int kLossMode1 = 4;  // 1'

// Requires real non-negative coefficients with |alpha| >= |beta| >= |gamma| > 0
// (equal magnitudes degenerate to identity beam splitters).
inline KnownEcpResult run_known(const SchmidtTriple& coeffs) {
    if (!coeffs.normalized())
        throw std::invalid_argument("run_known: coefficients not normalized");
    const Cx cs[3] = {coeffs.alpha, coeffs.beta, coeffs.gamma};
    for (const Cx& c : cs)
        if (std::abs(c.imag()) > kNormTol || c.real() < 0.0)
            throw std::invalid_argument("run_known: real non-negative coefficients required");
    const double a = cs[0].real(), b = cs[1].real(), g = cs[2].real();
    if (g <= 0.0) throw DegenerateRankError("run_known: gamma = 0 (Schmidt rank < 3)");
    if (a < b || b < g) throw std::invalid_argument("run_known: need alpha >= beta >= gamma");

    const Register reg_a{"a", 5}, reg_b{"b", 3};
    AmplitudeMap m;
    for (int i = 0; i < 3; ++i) m.emplace(BasisLabel{i, i}, cs[i]);
    PureState state({reg_a, reg_b}, std::move(m));

    state = apply_unitary(state, "a", ubs_transform({g / a, 0, kLossMode0}, 5));
    state = apply_unitary(state, "a", ubs_transform({g / b, 1, kLossMode1}, 5));

    KnownEcpResult out;
    AmplitudeMap kept;
    for (const auto& [label, amp] : state.amps()) {
        if (label[0] == kLossMode0)
            out.detector_probs[0] += std::norm(amp);
        else if (label[0] == kLossMode1)
            out.detector_probs[1] += std::norm(amp);
        else {
            out.success_prob += std::norm(amp);
            kept.emplace(label, amp);
        }
    }
    out.paper_claimed = g * g / 3.0;
    out.heralded = PureState({reg_a, reg_b}, std::move(kept)).normalized();

    AmplitudeMap target;
    for (int i = 0; i < 3; ++i) target.emplace(BasisLabel{i, i}, Cx{1.0 / std::sqrt(3.0), 0.0});
    out.fidelity_to_maximal = fidelity(out.heralded, PureState({reg_a, reg_b}, std::move(target)));
    return out;
}

}  // namespace qecp
