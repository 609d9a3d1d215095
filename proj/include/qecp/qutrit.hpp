// Qutrit-specific fixtures: the spatial Fourier basis, the detector-port
// vectors of the Fourier network, and the five feed-forward correction
// unitaries U_0..U_4.

#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "qecp/complex_matrix.hpp"
#include "qecp/state.hpp"

namespace qecp {

inline constexpr double kPi = std::numbers::pi;

// e^{i 2*pi*k/3}
inline Cx omega3(int k) {
    const int r = ((k % 3) + 3) % 3;
    switch (r) {
        case 0: return {1.0, 0.0};
        case 1: return {-0.5, std::sqrt(3.0) / 2.0};
        default: return {-0.5, -std::sqrt(3.0) / 2.0};
    }
}

inline Cx phase(double radians) { return {std::cos(radians), std::sin(radians)}; }

// |phi_k> = (1/sqrt3) sum_j w^{kj} |j>, the rows of U_F.
inline std::array<std::vector<Cx>, 3> fourier_basis() {
    const double s = 1.0 / std::sqrt(3.0);
    std::array<std::vector<Cx>, 3> basis;
    for (int k = 0; k < 3; ++k) {
        basis[k].resize(3);
        for (int j = 0; j < 3; ++j) basis[k][j] = s * omega3(k * j);
    }
    return basis;
}

inline Matrix fourier_matrix() {
    Matrix u(3, 3);
    const auto basis = fourier_basis();
    for (int k = 0; k < 3; ++k)
        for (int j = 0; j < 3; ++j) u(k, j) = basis[k][j];
    return u;
}

// State heralded by a click at output port k of the Fourier network: a photon
// in |phi_k*> = conj(|phi_k>) exits at port k.  Outcome labels throughout the
// protocol are port indices, which reproduces the k(+)m, l(+)n structure of
// the measured residuals.
inline std::vector<Cx> fourier_port(int k) {
    auto v = fourier_basis()[k];
    for (Cx& c : v) c = std::conj(c);
    return v;
}

// Diagonal single-qutrit corrections; U_3 and U_4 carry the -1 entry.
inline std::array<Matrix, 5> correction_unitaries() {
    std::array<Matrix, 5> us;
    us[0] = Matrix::identity(3);
    us[1] = Matrix{{1, 0, 0}, {0, omega3(1), 0}, {0, 0, omega3(2)}};
    us[2] = Matrix{{1, 0, 0}, {0, omega3(2), 0}, {0, 0, omega3(1)}};
    us[3] = Matrix{{-1, 0, 0}, {0, phase(kPi / 3), 0}, {0, 0, phase(5 * kPi / 3)}};
    us[4] = Matrix{{-1, 0, 0}, {0, phase(5 * kPi / 3), 0}, {0, 0, phase(kPi / 3)}};
    return us;
}

}  // namespace qecp
