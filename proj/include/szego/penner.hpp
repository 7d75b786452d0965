#pragma once

// Saddle points of the matrix model with potential W(z) = z + log z:
// construction from Laguerre zeros, an independent damped-Newton solver,
// resolvent and Schwinger-Dyson diagnostics, and trajectory tracing of the
// quadratic differential -R(z) dz^2.

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "szego/curve.hpp"
#include "szego/errors.hpp"
#include "szego/field.hpp"
#include "szego/laguerre.hpp"

namespace szego {

struct SaddleConfig {
    int n = 0;
    double g = 0.0;
    std::vector<complex> points;
    double residual = 0.0; // max norm of the saddle equations
};

struct PennerParams {
    double T;                                                 // 't Hooft parameter, n*g
    double A() const { return -1.0 / T; }                     // zero-asymptotics parameter
    static double alpha(double g) { return -1.0 - 1.0 / g; } // Laguerre parameter
};

// Left-hand sides of the saddle equations
// (1/g)(1 + 1/z_i) + sum_{j != i} 2/(z_j - z_i).
inline std::vector<complex> saddle_equations(const std::vector<complex>& z, double g) {
    const int n = int(z.size());
    std::vector<complex> f(n);
    for (int i = 0; i < n; ++i) {
        complex s = (1.0 + 1.0 / z[i]) / g;
        for (int j = 0; j < n; ++j)
            if (j != i)
                s += 2.0 / (z[j] - z[i]);
        f[i] = s;
    }
    return f;
}

inline double saddle_residual(const std::vector<complex>& z, double g) {
    double r = 0.0;
    for (const complex& f : saddle_equations(z, g))
        r = std::max(r, std::abs(f));
    return r;
}

// Saddle configuration from the zero set of L_n^{(-1-1/g)}, scaled by g.
inline SaddleConfig saddle_from_laguerre(int n, double g) {
    if (g == 0.0)
        throw domain_error("saddle_from_laguerre: g must be nonzero");
    const auto zs = laguerre_zeros(n, PennerParams::alpha(g));
    SaddleConfig cfg;
    cfg.n = n;
    cfg.g = g;
    cfg.points.reserve(n);
    for (const complex& zeta : zs.zeros) {
        if (zeta == 0.0)
            throw domain_error("saddle_from_laguerre: alpha = -1-1/g is a negative "
                               "integer in [-n,-1]; the polynomial has zeros at the "
                               "origin and no saddle configuration exists");
        cfg.points.push_back(g * zeta);
    }
    cfg.residual = saddle_residual(cfg.points, g);
    return cfg;
}

namespace detail {

// In-place complex Gaussian elimination with partial pivoting; solves A x = b.
inline std::vector<complex> solve_dense(std::vector<std::vector<complex>>& a,
                                        std::vector<complex> b) {
    const int n = int(b.size());
    for (int c = 0; c < n; ++c) {
        int piv = c;
        for (int r = c + 1; r < n; ++r)
            if (std::abs(a[r][c]) > std::abs(a[piv][c]))
                piv = r;
        if (std::abs(a[piv][c]) < 1e-300)
            throw collision_error("saddle_newton: singular Jacobian (coincident points?)");
        std::swap(a[c], a[piv]);
        std::swap(b[c], b[piv]);
        for (int r = c + 1; r < n; ++r) {
            const complex f = a[r][c] / a[c][c];
            for (int k = c; k < n; ++k)
                a[r][k] -= f * a[c][k];
            b[r] -= f * b[c];
        }
    }
    std::vector<complex> x(n);
    for (int r = n - 1; r >= 0; --r) {
        complex s = b[r];
        for (int k = r + 1; k < n; ++k)
            s -= a[r][k] * x[k];
        x[r] = s / a[r][r];
    }
    return x;
}

} // namespace detail

// Damped Newton on the saddle equations, independent of the Laguerre route.
// Steps are capped at half the minimum pairwise distance so points never
// collide.
inline SaddleConfig saddle_newton(int n, double g, std::vector<complex> z) {
    if (int(z.size()) != n)
        throw domain_error("saddle_newton: init size must equal n");
    for (int i = 0; i < n; ++i) {
        if (z[i] == 0.0)
            throw domain_error("saddle_newton: init points must be nonzero");
        for (int j = i + 1; j < n; ++j)
            if (z[i] == z[j])
                throw collision_error("saddle_newton: init points must be pairwise distinct");
    }
    double res = saddle_residual(z, g);
    int stall = 0;
    for (int it = 0; it < 200; ++it) {
        if (res < 1e-10)
            break;
        auto f = saddle_equations(z, g);
        std::vector<std::vector<complex>> jac(n, std::vector<complex>(n));
        for (int i = 0; i < n; ++i) {
            complex diag = -(1.0 / g) / (z[i] * z[i]);
            for (int j = 0; j < n; ++j) {
                if (j == i)
                    continue;
                const complex d = z[j] - z[i];
                jac[i][j] = -2.0 / (d * d);
                diag += 2.0 / (d * d);
            }
            jac[i][i] = diag;
        }
        for (complex& v : f)
            v = -v;
        auto dz = detail::solve_dense(jac, std::move(f));

        double dmin = std::numeric_limits<double>::infinity();
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                dmin = std::min(dmin, std::abs(z[i] - z[j]));
        if (n == 1)
            dmin = 2.0 * std::abs(z[0]);
        double dmax = 0.0;
        for (const complex& v : dz)
            dmax = std::max(dmax, std::abs(v));
        const double cap = 0.5 * dmin;
        const double damp = dmax > cap ? cap / dmax : 1.0;
        for (int i = 0; i < n; ++i)
            z[i] += damp * dz[i];

        const double next = saddle_residual(z, g);
        if (next > 0.9 * res) {
            if (++stall > 25)
                throw convergence_error(
                    "saddle_newton: stalled (trust-region cap " + std::to_string(cap) +
                        ", damping " + std::to_string(damp) + ")",
                    next, it);
        } else {
            stall = 0;
        }
        res = next;
    }
    if (!(res < 1e-10))
        throw convergence_error("saddle_newton: did not reach tolerance", res, 200);
    SaddleConfig cfg;
    cfg.n = n;
    cfg.g = g;
    cfg.points = std::move(z);
    cfg.residual = res;
    return cfg;
}

// Default initialization: scaled roots of unity on |z| = T/e.
inline SaddleConfig saddle_newton(int n, double g) {
    const double r = std::max(0.02, std::abs(n * g) * inv_e);
    std::vector<complex> init(n);
    for (int i = 0; i < n; ++i)
        init[i] = std::polar(r, two_pi * (i + 0.5) / n);
    return saddle_newton(n, g, std::move(init));
}

// omega_n(z) = (1/n) sum 1/(z - z_i).
inline complex resolvent(const SaddleConfig& cfg, complex z) {
    complex s = 0.0;
    for (const complex& p : cfg.points) {
        if (std::abs(z - p) < 1e-12 * (1.0 + std::abs(z)))
            throw singularity_error("resolvent: z coincides with a saddle point");
        s += 1.0 / (z - p);
    }
    return s / double(cfg.n);
}

// R_PM(z) = (1/T^2)(1 + 1/z)^2 - 4/(T z); at T = 1 this is (1 - 1/z)^2.
inline complex r_penner(complex z, double T) {
    if (z == 0.0)
        throw singularity_error("r_penner: double pole at z = 0");
    if (T == 0.0)
        throw domain_error("r_penner: T must be nonzero");
    const complex a = (1.0 + 1.0 / z) / T;
    return a * a - 4.0 / (T * z);
}

// |y_n(z)^2 - R_PM(z)| with y_n = (1/(n g))(1 + 1/z) - 2 omega_n(z), the
// finite-n probe of the Schwinger-Dyson equation; decays like 1/n at fixed
// T = n g.
inline double sd_residual(const SaddleConfig& cfg, complex z) {
    if (z == 0.0)
        throw singularity_error("sd_residual: singular at z = 0");
    const double T = cfg.n * cfg.g;
    const complex y = (1.0 + 1.0 / z) / T - 2.0 * resolvent(cfg, z);
    return std::abs(y * y - r_penner(z, T));
}

// Traces the closed trajectory of -R(z) dz^2, R = (1 - 1/z)^2, through z0 on
// the level set Re(z - log z) = t + 1.  The square-root branch follows by
// continuity between the explicit candidates +-(1 - 1/z); each accepted step
// is projected back onto the level set.
inline PathSample trajectory(double t, complex z0, double step, int max_steps) {
    if (step <= 0.0 || max_steps < 1)
        throw domain_error("trajectory: need step > 0 and max_steps >= 1");
    auto level = [t](complex z) { return (z - std::log(z)).real() - (t + 1.0); };
    if (std::abs(level(z0)) > 1e-8)
        throw domain_error("trajectory: z0 must satisfy Re(z - log z) = t + 1");
    if (z0 == 1.0)
        throw critical_trajectory_error("trajectory: z0 is the critical point z = 1");

    complex sqrt_r = 1.0 - 1.0 / z0; // anchor branch; sign fixed below
    // orient the trace counterclockwise: dz/dtau = i/sqrt_r should advance arg z
    if ((complex(0.0, 1.0) / sqrt_r * std::conj(z0)).imag() < 0.0)
        sqrt_r = -sqrt_r;

    auto rhs = [&sqrt_r](complex z) {
        const complex cand = 1.0 - 1.0 / z;
        const complex u = std::abs(cand - sqrt_r) <= std::abs(cand + sqrt_r) ? cand : -cand;
        return complex(0.0, 1.0) / u;
    };

    PathSample path;
    path.points.push_back(z0);
    complex z = z0;
    double h = step;
    double winding = 0.0;
    for (int it = 0; it < 8 * max_steps && int(path.points.size()) <= max_steps; ++it) {
        const complex zprev = z;
        h = std::min(h, step);
        if (!detail::rk45_step(rhs, z, h, 1e-12))
            continue;
        // track the branch and project back onto the level set
        const complex cand = 1.0 - 1.0 / z;
        sqrt_r = std::abs(cand - sqrt_r) <= std::abs(cand + sqrt_r) ? cand : -cand;
        for (int p = 0; p < 2; ++p) {
            const complex fp = 1.0 - 1.0 / z;
            z -= level(z) * std::conj(fp) / std::norm(fp);
        }
        if (std::abs(z - 1.0) < 10.0 * step)
            throw critical_trajectory_error(
                "trajectory: reached the critical point z = 1 (corner of the t = 0 curve)");
        if (std::abs(z) < 10.0 * step)
            throw singularity_error("trajectory: approached the pole at z = 0");

        path.arclength += std::abs(z - zprev);
        path.invariant_drift = std::max(path.invariant_drift, std::abs(level(z)));
        const double dw = std::arg(z / zprev);
        if (winding + dw >= two_pi) {
            // interpolate the crossing of the full revolution and close there
            const double lam = (two_pi - winding) / dw;
            complex zc = zprev + lam * (z - zprev);
            for (int p = 0; p < 2; ++p) {
                const complex fp = 1.0 - 1.0 / zc;
                zc -= level(zc) * std::conj(fp) / std::norm(fp);
            }
            path.points.push_back(zc);
            path.closure_gap = std::abs(zc - z0);
            path.closed = path.closure_gap < step;
            path.reason = "closed";
            return path;
        }
        winding += dw;
        path.points.push_back(z);
    }
    path.reason = "max-steps";
    return path;
}

// Eigenvalue density of the matrix model from the zero density of the
// curves: rho_PM(z) = (1/|T|) rho_t(z/T), with rho_t the line density
// |(1-z)/(2 pi z)| on gamma_t.
inline double density_scaling(complex z, double t, double T, double band = 1e-6) {
    if (T == 0.0)
        throw domain_error("density_scaling: T must be nonzero");
    const complex u = z / T;
    const auto np = nearest_curve_point(u, t);
    if (np.dist > band)
        throw domain_error("density_scaling: z/T lies off gamma_t beyond the band");
    return std::abs((1.0 - np.point) / (two_pi * np.point)) / std::abs(T);
}

// Largest pairwise distance in the minimal-cost bipartite matching between
// two point sets (the saddle system is permutation symmetric).
inline double set_match_distance(const std::vector<complex>& a,
                                 const std::vector<complex>& b) {
    if (a.size() != b.size())
        throw domain_error("set_match_distance: size mismatch");
    const int n = int(a.size());
    // Hungarian algorithm with potentials, O(n^3)
    std::vector<std::vector<double>> cost(n + 1, std::vector<double>(n + 1, 0.0));
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j)
            cost[i][j] = std::abs(a[i - 1] - b[j - 1]);
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<int> match(n + 1, 0), way(n + 1, 0);
    for (int i = 1; i <= n; ++i) {
        match[0] = i;
        int j0 = 0;
        std::vector<double> minv(n + 1, std::numeric_limits<double>::infinity());
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            const int i0 = match[j0];
            double delta = std::numeric_limits<double>::infinity();
            int j1 = 0;
            for (int j = 1; j <= n; ++j) {
                if (used[j])
                    continue;
                const double cur = cost[i0][j] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[match[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (match[j0] != 0);
        do {
            const int j1 = way[j0];
            match[j0] = match[j1];
            j0 = j1;
        } while (j0);
    }
    double worst = 0.0;
    for (int j = 1; j <= n; ++j)
        worst = std::max(worst, cost[match[j]][j]);
    return worst;
}

} // namespace szego
