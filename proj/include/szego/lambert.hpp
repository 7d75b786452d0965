#pragma once

// Multi-branch complex Lambert W: solutions of w e^w = z with the standard
// branch layout (principal cut along (-inf,-1/e], counterclockwise continuity).
// Cut values are the limits from the upper half-plane; callers wanting the
// lower side pass a negatively signed zero imaginary part (or conjugate).

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include "szego/errors.hpp"

namespace szego {

using complex = std::complex<double>;

inline constexpr double inv_e = 0.36787944117144233; // 1/e
inline constexpr double two_pi = 2.0 * std::numbers::pi;

struct WOptions {
    double tol = 1e-13; // functional-equation residual, relative to max(1,|z|)
    int max_iter = 60;
};

struct WEval {
    complex value;
    double residual = 0.0; // |w e^w - z|
    int iterations = 0;
};

using BranchIndex = int;

namespace detail {

// Branch index owned by a point of the w-plane, per the standard tiling:
// the separating curves are {-eta*cot(eta) + i*eta : eta in (2m*pi,(2m+1)*pi)}
// together with the real ray (-inf,-1].
inline int branch_index_of_value(complex w) {
    double xi = w.real(), eta = w.imag();
    if (eta == 0.0)
        return xi >= -1.0 ? 0 : -1;
    const int sign = eta > 0 ? 1 : -1;
    eta = std::abs(eta);
    int k = 0;
    for (int m = 0;; ++m) {
        const double lo = 2 * m * std::numbers::pi;
        const double hi = lo + std::numbers::pi;
        if (eta >= hi) {
            ++k;
            continue;
        }
        if (eta > lo && xi < -eta / std::tan(eta))
            ++k;
        break;
    }
    return sign * k;
}

// Series about the branch point z = -1/e in p = sqrt(2(e z + 1)).
inline complex branch_point_series(complex p) {
    static constexpr double c[] = {
        -1.0, 1.0, -1.0 / 3.0, 11.0 / 72.0, -43.0 / 540.0, 769.0 / 17280.0,
        -221.0 / 8505.0, 680863.0 / 43545600.0, -1963.0 / 204120.0,
        226287557.0 / 37623398400.0};
    complex s = 0.0;
    for (int i = 9; i >= 0; --i)
        s = s * p + c[i];
    return s;
}

// Halley iteration on f(w) = w e^w - z.  Iterates to a fixed point of the
// update; the caller checks the final residual against its tolerance.
inline complex halley(complex z, complex w, int& iterations, double& residual,
                      int max_iter) {
    const double eps = std::numeric_limits<double>::epsilon();
    complex f = w * std::exp(w) - z;
    for (int it = 0; it < max_iter; ++it) {
        if (f == 0.0)
            break;
        const complex ew = std::exp(w);
        const complex wp1 = w + 1.0;
        complex den = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
        if (den == 0.0)
            den = ew * wp1;
        const complex dw = f / den;
        w -= dw;
        ++iterations;
        f = w * std::exp(w) - z;
        if (std::abs(dw) <= 2 * eps * std::abs(w))
            break;
    }
    residual = std::abs(f);
    return w;
}

inline complex principal_seed_real(double r) {
    // r > 0.3; Omega = W(1) anchors the mid range.
    constexpr double omega = 0.5671432904097838;
    const double L = std::log(r);
    if (std::abs(L) < 2.0)
        return omega + omega / (1.0 + omega) * L;
    return L - std::log(L);
}

// Core evaluation for Im z >= 0 (upper half-plane and reals from above).
inline WEval w_upper(int k, complex z, const WOptions& opt) {
    WEval out;
    const complex u = 2.0 * (std::numbers::e * z + 1.0);
    complex w;
    if (k == 0) {
        if (std::abs(u) < 1.0) {
            w = branch_point_series(std::sqrt(u));
        } else if (std::abs(z) < 0.3) {
            w = z * (1.0 + z * (-1.0 + z * (1.5 - z * (8.0 / 3.0))));
        } else if (std::abs(z) <= 7.389) {
            // Mid annulus: continue along the circle |z| = r from the positive
            // real axis, which never crosses the cut.
            const double r = std::abs(z);
            const double phi = std::arg(z);
            w = halley(r, principal_seed_real(r), out.iterations, out.residual,
                       opt.max_iter);
            const int m = static_cast<int>(std::ceil(std::abs(phi) / 0.5));
            for (int j = 1; j < m; ++j)
                w = halley(r * std::polar(1.0, phi * j / m), w, out.iterations,
                           out.residual, opt.max_iter);
        } else {
            const complex L = std::log(z);
            w = L - std::log(L);
        }
    } else if (k == -1 && z.imag() == 0.0 && -inv_e < z.real() && z.real() < 0.0) {
        // Real secondary branch on (-1/e, 0).
        if (u.real() < 1.0) {
            w = branch_point_series(-std::sqrt(u.real()));
        } else {
            const double l1 = std::log(-z.real());
            const double l2 = std::log(-l1);
            w = l1 - l2 + l2 / l1;
        }
    } else if (k == -1 && std::abs(u) < 1.0) {
        w = branch_point_series(-std::sqrt(u));
    } else {
        const complex L = std::log(z) + complex(0.0, two_pi * k);
        w = L - std::log(L);
    }
    out.value = halley(z, w, out.iterations, out.residual, opt.max_iter);
    return out;
}

} // namespace detail

inline int branch_index_of(complex w) { return detail::branch_index_of_value(w); }

inline WEval w_branch(BranchIndex k, complex z, const WOptions& opt = {}) {
    if (z == 0.0) {
        if (k == 0)
            return {complex(0.0), 0.0, 0};
        throw domain_error("lambert: W_k has a logarithmic singularity at z = 0 for k != 0");
    }
    if (std::abs(z + inv_e) <= 1e-12 && (k == 0 || k == -1)) {
        // Branch point shared by k = 0 and k = -1.
        const bool lower = std::signbit(z.imag());
        if (k == 0 || !lower)
            return {complex(-1.0), std::abs(-inv_e - z), 0};
    }
    WEval out;
    if (std::signbit(z.imag())) {
        out = detail::w_upper(-k, std::conj(z), opt);
        out.value = std::conj(out.value);
    } else {
        out = detail::w_upper(k, z, opt);
    }
    if (!(out.residual <= opt.tol * std::max(1.0, std::abs(z))))
        throw convergence_error("lambert: Halley iteration did not converge",
                                out.residual, out.iterations);
    return out;
}

inline WEval w_principal(complex z, const WOptions& opt = {}) {
    return w_branch(0, z, opt);
}

// d/dz W_k(z) = e^{-W}/(1+W); singular where W_k(z) = -1 (z = -1/e).
inline complex w_derivative(BranchIndex k, complex z, const WOptions& opt = {}) {
    const complex w = w_branch(k, z, opt).value;
    if (std::abs(w + 1.0) < 1e-9)
        throw singularity_error("lambert: derivative singular at the branch point z = -1/e");
    return std::exp(-w) / (1.0 + w);
}

// Maclaurin series of the principal branch, sum_{n>=1} (-1)^{n-1} n^{n-2}/(n-1)! z^n.
// Independent oracle for w_principal near 0.
inline complex w_series(complex z, int n_max) {
    if (n_max < 1)
        throw domain_error("lambert: w_series needs n_max >= 1");
    if (!(std::abs(z) < inv_e))
        throw domain_error("lambert: w_series requires |z| < 1/e");
    complex term = z; // n = 1
    complex sum = term;
    for (int n = 1; n < n_max; ++n) {
        // c_{n+1}/c_n = -((n+1)/n)^{n-1}
        term *= -z * std::pow((n + 1.0) / n, n - 1.0);
        sum += term;
    }
    return sum;
}

} // namespace szego
