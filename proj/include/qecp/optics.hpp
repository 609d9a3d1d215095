// Linear-optics layer: 50:50 beam splitters and phase shifters (ideal and
// imperfect), the variable-beam-splitter block realized as an MZI, the
// three-block qutrit Fourier network, and the block fidelity under component
// imperfections.

#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "qecp/complex_matrix.hpp"
#include "qecp/qutrit.hpp"

namespace qecp {

struct ImperfectionParams {
    double eps = 0.0;      // BS transmission deviation
    double d_omega = 0.0;  // phase error on the internal 2*omega shifter
    double d_phi = 0.0;    // phase error on the input phi shifter
};

struct BlockParams {
    double phi = 0.0;    // varphi_mn (radians)
    double omega = 0.0;  // omega_mn (radians)
    std::pair<int, int> modes{0, 1};
};

// 50:50 beam splitter; with a transmission deviation eps the matrix stays
// exactly unitary for every eps > -1.
inline Matrix bs(std::optional<ImperfectionParams> imp = std::nullopt) {
    const double eps = imp ? imp->eps : 0.0;
    if (eps <= -1.0) throw std::invalid_argument("bs: eps <= -1");
    const double d = std::sqrt((1.0 + eps) * (1.0 + eps) + 1.0);
    const Cx t{(1.0 + eps) / d, 0.0};
    const Cx r{0.0, 1.0 / d};
    return Matrix{{t, r}, {r, t}};
}

// diag(e^{i(phi-delta)}, 1)
inline Matrix phase_shifter(double phi, double delta = 0.0) {
    return Matrix{{phase(phi - delta), 0}, {0, 1}};
}

// Variable beam splitter realized as BS . P_{2 omega} . BS . P_phi (rightmost
// acts first).  This is the unique placement of the four components that
// reproduces the published ideal output coefficient pair; see
// verify_mzi_convention().
inline Matrix mzi_block(const BlockParams& p, std::optional<ImperfectionParams> imp = std::nullopt) {
    const ImperfectionParams ip = imp.value_or(ImperfectionParams{});
    return bs(ip) * phase_shifter(2.0 * p.omega, 2.0 * ip.d_omega) * bs(ip) *
           phase_shifter(p.phi, ip.d_phi);
}

// Abstract variable-BS pattern [[e^{i phi} sin w, cos w], [e^{i phi} cos w, -sin w]].
// The ideal MZI equals i e^{i omega} times this.
inline Matrix variable_bs_subblock(double phi, double omega) {
    const Cx e = phase(phi);
    const double s = std::sin(omega), c = std::cos(omega);
    return Matrix{{e * s, c}, {e * c, -s}};
}

// MZI gauged by the block's ideal scalar i e^{i omega}; at zero imperfection
// this is exactly the variable-BS matrix, so the composed network reproduces
// the published three-block product.
inline Matrix gauged_block(const BlockParams& p, std::optional<ImperfectionParams> imp = std::nullopt) {
    const Cx scalar = Cx{0.0, 1.0} * phase(p.omega);
    return (Cx{1.0, 0.0} / scalar) * mzi_block(p, imp);
}

// Places b on rows/cols {m, n} (sorted ascending), identity elsewhere.
inline Matrix embed_block(const Matrix& b, std::pair<int, int> modes, int dim) {
    if (b.rows() != 2 || b.cols() != 2) throw std::invalid_argument("embed_block: need 2x2 block");
    const int lo = std::min(modes.first, modes.second);
    const int hi = std::max(modes.first, modes.second);
    if (lo < 0 || hi >= dim || lo == hi)
        throw std::invalid_argument("embed_block: modes out of range");
    Matrix m = Matrix::identity(dim);
    m(lo, lo) = b(0, 0);
    m(lo, hi) = b(0, 1);
    m(hi, lo) = b(1, 0);
    m(hi, hi) = b(1, 1);
    return m;
}

// The three blocks of the Fourier network, in application order (T_21 first).
inline std::array<BlockParams, 3> fourier_block_params() {
    return {BlockParams{kPi / 3.0, kPi / 4.0, {2, 1}},
            BlockParams{2.0 * kPi / 3.0, std::atan(std::sqrt(2.0)), {2, 0}},
            BlockParams{3.0 * kPi / 2.0, kPi / 4.0, {1, 0}}};
}

inline std::array<double, 3> fourier_output_phases() {
    return {kPi / 2.0, 4.0 * kPi / 3.0, 2.0 * kPi / 3.0};
}

// How a composed network relates to U_F: network = Pi . D . U_F with Pi a row
// permutation and D per-row phases, up to `residual` (max element deviation).
// `deviation_from_uf` probes exact equality with U_F for reference.
struct EquivalenceReport {
    std::array<int, 3> permutation{0, 1, 2};  // row i of the network ~ row permutation[i] of U_F
    std::array<double, 3> output_phases{0, 0, 0};  // arg of the per-row factors (radians)
    double residual = 0.0;
    double deviation_from_uf = 0.0;

    bool equivalent(double tol = 1e-10) const { return residual < tol; }
};

// Best (permutation, diagonal) fit of m against U_F; phases are solved from
// the first column and all six permutations are tried.
inline EquivalenceReport fourier_equivalence(const Matrix& m) {
    if (m.rows() != 3 || m.cols() != 3)
        throw std::invalid_argument("fourier_equivalence: 3x3 matrix required");
    const Matrix uf = fourier_matrix();
    static constexpr std::array<std::array<int, 3>, 6> kPerms{{
        {0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
    EquivalenceReport best;
    bool first = true;
    for (const auto& perm : kPerms) {
        std::array<Cx, 3> d;
        for (int i = 0; i < 3; ++i) d[i] = m(i, 0) / uf(perm[i], 0);
        double res = 0.0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                res = std::max(res, std::abs(m(i, j) - d[i] * uf(perm[i], j)));
        if (first || res < best.residual) {
            first = false;
            best.permutation = perm;
            for (int i = 0; i < 3; ++i) best.output_phases[i] = std::arg(d[i]);
            best.residual = res;
        }
    }
    best.deviation_from_uf = max_abs_diff(m, uf);
    return best;
}

// Composes the three embedded blocks (published parameters) and the output
// phase shifters, then reports the measurement-equivalence fit against U_F.
// The ideal network matches U_F only up to a row permutation and per-row
// phases; the report carries that relation instead of hiding it.
inline std::pair<Matrix, EquivalenceReport> compose_fourier(
    std::optional<ImperfectionParams> imp = std::nullopt) {
    const auto params = fourier_block_params();
    Matrix net = Matrix::identity(3);
    for (const auto& p : params) net = embed_block(gauged_block(p, imp), p.modes, 3) * net;
    const auto thetas = fourier_output_phases();
    Matrix pout(3, 3);
    for (int i = 0; i < 3; ++i) pout(i, i) = phase(thetas[i]);
    net = pout * net;
    return {net, fourier_equivalence(net)};
}

// Ideal output coefficients of the variable-BS block on cos(chi)|0> + sin(chi)|1>.
inline std::array<Cx, 2> vbs_output_ideal(double chi, double omega, double phi) {
    const Cx e2w = phase(2.0 * omega);
    const Cx ep = phase(phi);
    const Cx i{0.0, 1.0};
    const double c = std::cos(chi), s = std::sin(chi);
    return {0.5 * ((e2w - 1.0) * ep * c + i * (e2w + 1.0) * s),
            0.5 * (i * (e2w + 1.0) * ep * c + (1.0 - e2w) * s)};
}

// Real (imperfect) output coefficients of the block.
inline std::array<Cx, 2> vbs_output_real(double chi, double omega, double phi,
                                         const ImperfectionParams& ip) {
    const double t = 1.0 + ip.eps;
    const Cx e2w = phase(2.0 * (omega - ip.d_omega));
    const Cx ep = phase(phi - ip.d_phi);
    const Cx i{0.0, 1.0};
    const double c = std::cos(chi), s = std::sin(chi);
    const double den = t * t + 1.0;
    return {((t * t * e2w - 1.0) * ep * c + i * t * (e2w + 1.0) * s) / den,
            (i * t * (e2w + 1.0) * ep * c + (t * t - e2w) * s) / den};
}

// Startup self-test: the component order fixed in mzi_block must reproduce
// the closed-form ideal output at 8 sample points.
inline bool verify_mzi_convention() {
    unsigned long long lcg = 0x9E3779B97F4A7C15ull;
    auto next = [&lcg]() {
        lcg = lcg * 6364136223846793005ull + 1442695040888963407ull;
        return static_cast<double>(lcg >> 11) / 9007199254740992.0;  // [0,1)
    };
    for (int k = 0; k < 8; ++k) {
        const double chi = 2.0 * kPi * next();
        const double omega = kPi * next();
        const double phi = 2.0 * kPi * next();
        const Matrix m = mzi_block({phi, omega, {0, 1}});
        const auto want = vbs_output_ideal(chi, omega, phi);
        const Cx got0 = m(0, 0) * std::cos(chi) + m(0, 1) * std::sin(chi);
        const Cx got1 = m(1, 0) * std::cos(chi) + m(1, 1) * std::sin(chi);
        if (std::abs(got0 - want[0]) > 1e-12 || std::abs(got1 - want[1]) > 1e-12) return false;
    }
    return true;
}

// Average overlap fidelity between the ideal and imperfect block over the
// input mixing angle.  The integrand is a low-degree trigonometric
// polynomial, so the fixed 2048-point uniform rule is exact to rounding.
inline double block_fidelity(const BlockParams& p, const ImperfectionParams& ip) {
    const Matrix ideal = mzi_block(p);
    const Matrix real = mzi_block(p, ip);
    constexpr int kN = 2048;
    double acc = 0.0;
    for (int k = 0; k < kN; ++k) {
        const double chi = 2.0 * kPi * k / kN;
        const double c = std::cos(chi), s = std::sin(chi);
        Cx overlap{};
        for (int i = 0; i < 2; ++i) {
            const Cx vi = ideal(i, 0) * c + ideal(i, 1) * s;
            const Cx vr = real(i, 0) * c + real(i, 1) * s;
            overlap += std::conj(vi) * vr;
        }
        acc += std::norm(overlap);
    }
    return acc / kN;
}

struct FidelitySurface {
    std::vector<double> eps_values;
    std::vector<double> delta_values;
    std::vector<double> fidelity;  // row-major in eps: fidelity[ie * ndelta + id]

    double at(size_t ie, size_t id) const { return fidelity[ie * delta_values.size() + id]; }
};

// Grid of block_fidelity values with d_omega = d_phi = delta.
inline FidelitySurface fidelity_surface(const std::vector<double>& eps_values,
                                        const std::vector<double>& delta_values,
                                        const BlockParams& p) {
    if (eps_values.empty() || delta_values.empty())
        throw std::invalid_argument("fidelity_surface: empty range");
    FidelitySurface surf{eps_values, delta_values, {}};
    surf.fidelity.reserve(eps_values.size() * delta_values.size());
    for (double e : eps_values)
        for (double d : delta_values)
            surf.fidelity.push_back(block_fidelity(p, ImperfectionParams{e, d, d}));
    return surf;
}

inline std::vector<double> linspace(double lo, double hi, int n) {
    if (n <= 0) throw std::invalid_argument("linspace: n <= 0");
    std::vector<double> v(n);
    if (n == 1) {
        v[0] = lo;
        return v;
    }
    for (int i = 0; i < n; ++i) v[i] = lo + (hi - lo) * i / (n - 1);
    return v;
}

}  // namespace qecp
