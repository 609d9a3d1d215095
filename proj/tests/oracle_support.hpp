// Independent oracles used by the test and acceptance suites.  Everything
// here is computed from first principles (series/continued fractions, Simpson
// quadrature over the published closed forms, explicit term expansions) and
// deliberately avoids the library's own code paths that it checks.

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

namespace oracle {

// ---------------------------------------------------------------------------
// High-precision erfc: Taylor series for small |x|, Lentz continued fraction
// for large x, reflection for negative x.  Long double arithmetic keeps the
// result comfortably below 1e-15 relative error over |x| <= 10.

inline long double erf_series(long double x) {
    const long double sqrt_pi = 1.7724538509055160273L;
    long double term = x, sum = x;
    for (int n = 1; n < 400; ++n) {
        term *= -x * x / n;
        const long double add = term / (2 * n + 1);
        sum += add;
        if (std::fabs(add) < 1e-24L * std::fabs(sum)) break;
    }
    return sum * 2.0L / sqrt_pi;
}

inline long double erfc_continued_fraction(long double x) {
    const long double sqrt_pi = 1.7724538509055160273L;
    const long double tiny = 1e-40L;
    long double f = x, c = x, d = 0.0L;
    for (int n = 1; n < 500; ++n) {
        const long double a = 0.5L * n;
        d = x + a * d;
        if (std::fabs(d) < tiny) d = tiny;
        d = 1.0L / d;
        c = x + a / c;
        if (std::fabs(c) < tiny) c = tiny;
        const long double delta = c * d;
        f *= delta;
        if (std::fabs(delta - 1.0L) < 1e-22L) break;
    }
    return std::exp(-x * x) / sqrt_pi / f;
}

inline long double erfc(long double x) {
    if (x < 0.0L) return 2.0L - erfc(-x);
    if (x < 1.5L) return 1.0L - erf_series(x);
    return erfc_continued_fraction(x);
}

// ---------------------------------------------------------------------------
// Block fidelity by Simpson quadrature over the published ideal/real output
// coefficient formulas (written out directly, not via matrix composition).

using Cxl = std::complex<long double>;

inline std::array<Cxl, 2> ideal_output(long double chi, long double omega, long double phi) {
    const Cxl i{0.0L, 1.0L};
    const Cxl e2w = std::exp(i * (2.0L * omega));
    const Cxl ep = std::exp(i * phi);
    const long double c = std::cos(chi), s = std::sin(chi);
    return {0.5L * ((e2w - 1.0L) * ep * c + i * (e2w + 1.0L) * s),
            0.5L * (i * (e2w + 1.0L) * ep * c + (1.0L - e2w) * s)};
}

inline std::array<Cxl, 2> real_output(long double chi, long double omega, long double phi,
                                      long double eps, long double dom, long double dphi) {
    const Cxl i{0.0L, 1.0L};
    const long double t = 1.0L + eps;
    const Cxl e2w = std::exp(i * (2.0L * (omega - dom)));
    const Cxl ep = std::exp(i * (phi - dphi));
    const long double c = std::cos(chi), s = std::sin(chi);
    const long double den = t * t + 1.0L;
    return {((t * t * e2w - 1.0L) * ep * c + i * t * (e2w + 1.0L) * s) / den,
            (i * t * (e2w + 1.0L) * ep * c + (t * t - e2w) * s) / den};
}

inline double block_fidelity_simpson(double eps, double dom, double dphi,
                                     double omega, double phi, int panels = 8192) {
    const long double two_pi = 6.2831853071795864769L;
    auto g = [&](long double chi) {
        const auto vi = ideal_output(chi, omega, phi);
        const auto vr = real_output(chi, omega, phi, eps, dom, dphi);
        const Cxl ov = std::conj(vi[0]) * vr[0] + std::conj(vi[1]) * vr[1];
        return std::norm(ov);
    };
    const long double h = two_pi / panels;
    long double s = g(0.0L) + g(two_pi);
    for (int k = 1; k < panels; ++k) s += (k % 2 ? 4.0L : 2.0L) * g(k * h);
    return static_cast<double>(s * h / 3.0L / two_pi);
}

// ---------------------------------------------------------------------------
// Dense residual of the maximal branch for outcome (k,l,m,n) on photons
// (c,e,d,f), computed from the explicit six-term expansion with port-vector
// components w^{out*mode}/sqrt3.

inline std::array<std::complex<double>, 3> maximal_residual(int k, int l, int m, int n) {
    const double s3 = 1.0 / std::sqrt(3.0);
    auto comp = [s3](int out, int mode) {
        const double ang = 2.0 * M_PI * ((out * mode) % 3) / 3.0;
        return std::complex<double>{s3 * std::cos(ang), s3 * std::sin(ang)};
    };
    static const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                    {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    std::array<std::complex<double>, 3> amp{};
    const double w = 1.0 / std::sqrt(6.0);
    for (const auto& p : perms) {
        const int i = p[0], j = p[1], kk = p[2];
        amp[i] += w * comp(k, j) * comp(l, kk) * comp(m, j) * comp(n, kk);
    }
    return amp;
}

// ---------------------------------------------------------------------------
// Random normalized Schmidt triples.

struct TripleGen {
    std::mt19937_64 eng;
    explicit TripleGen(unsigned long long seed) : eng(seed) {}

    std::array<std::complex<double>, 3> complex_triple() {
        std::normal_distribution<double> nd(0.0, 1.0);
        std::array<std::complex<double>, 3> c;
        double n2 = 0.0;
        for (auto& z : c) {
            z = {nd(eng), nd(eng)};
            n2 += std::norm(z);
        }
        for (auto& z : c) z /= std::sqrt(n2);
        return c;
    }

    std::array<double, 3> real_triple() {
        std::normal_distribution<double> nd(0.0, 1.0);
        std::array<double, 3> c;
        double n2 = 0.0;
        for (auto& x : c) {
            x = std::abs(nd(eng)) + 1e-3;
            n2 += x * x;
        }
        for (auto& x : c) x /= std::sqrt(n2);
        return c;
    }

    // real, strictly positive, sorted descending
    std::array<double, 3> ordered_triple() {
        auto c = real_triple();
        std::sort(c.begin(), c.end(), std::greater<>());
        return c;
    }
};

}  // namespace oracle
