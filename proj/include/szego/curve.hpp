#pragma once

// Geometry of the level curves |z e^{1-z}| = e^{-t}, |z| <= 1: Schwarz
// function, analyticity cuts, parametrization, curvature, reflection,
// conformal maps and harmonic moments.

#include <cmath>
#include <complex>
#include <map>
#include <string>
#include <vector>

#include "szego/errors.hpp"
#include "szego/lambert.hpp"

namespace szego {

// One off-axis branch-cut arc of the Schwarz function, parametrized as
// z = y cot y + i y over [y_start, y_end] (sign of y selects the half-plane).
struct CutArc {
    int k; // positive index; the arc lives in |Im z| in (2k*pi, (2k+1)*pi)
    double y_start;
    double y_end;
};

struct CutSet {
    double t;
    double x1; // interior real cut [0, x1], e^{x1}/x1 = e^{2t+1}, x1 < 1
    double x2; // exterior real cut [x2, inf), same equation, x2 > 1
    std::vector<CutArc> off_axis; // k = 1..k_max, upper and mirrored lower arcs
};

enum class MomentMethod { series, contour };

struct MomentTable {
    double t;
    std::map<int, complex> entries;
    MomentMethod method;
};

struct QuadratrixPath {
    int k;             // arc family index; 0 is the central arc through z = 1
    bool is_real_ray;  // the [1, inf) marker segment
    std::vector<complex> points;
};

namespace detail {

// Schwarz-function argument -e^{-2(t+1)} e^z / z.
inline complex schwarz_argument(complex z, double t) {
    return -std::exp(-2.0 * (t + 1.0)) * std::exp(z) / z;
}

inline void throw_on_cut(complex z, complex u, double t) {
    // The cuts are exactly where u is real in (-inf, -1/e].
    const double eps = std::numeric_limits<double>::epsilon();
    if (!(std::abs(u.imag()) <= 8 * eps * std::abs(u)))
        return;
    // the branch point u = -1/e itself has a well-defined limit; let it through
    if (u.real() > -inv_e - 1e-12 * std::abs(u))
        return;
    std::string name;
    if (z.imag() == 0.0) {
        name = z.real() < 1.0 ? "real cut [0, x1]" : "real cut [x2, inf)";
    } else {
        const int k = static_cast<int>(std::floor(std::abs(z.imag()) / two_pi));
        name = "off-axis cut k=" + std::to_string(k) +
               (z.imag() > 0 ? " (upper)" : " (lower)");
    }
    throw cut_error("schwarz: z on " + name + " at t=" + std::to_string(t));
}

} // namespace detail

// Schwarz function S(z,t) = -W0(-e^{-2(t+1)} e^z / z); equals conj(z) on the curve.
inline complex schwarz(complex z, double t) {
    if (z == 0.0)
        throw singularity_error("schwarz: logarithmic branch point at z = 0");
    const complex u = detail::schwarz_argument(z, t);
    detail::throw_on_cut(z, u, t);
    return -w_principal(u).value;
}

// z(t,theta) = -W0(-e^{-(t+1)+i theta}), positively oriented in theta.
inline complex curve_point(double t, double theta) {
    return -w_principal(-std::exp(-(t + 1.0)) * std::polar(1.0, theta)).value;
}

inline complex forward_map(complex z) { return z * std::exp(1.0 - z); }

// Inverse of w = z e^{1-z} on sheet k; cuts per branch: [1,inf) for k = 0,
// [0,inf) for |k| >= 2, and both [0,1] and [1,inf) pieces for k = +-1.
inline complex inverse_map(complex w, BranchIndex k) {
    if (w.imag() == 0.0 && w.real() >= (k == 0 ? 1.0 : 0.0))
        throw cut_error("inverse_map: w on the branch cut of sheet " + std::to_string(k));
    return -w_branch(k, -w / std::numbers::e).value;
}

struct CurveDerivatives {
    complex dz_dtheta; // -i z / (z - 1)
    complex dz_dt;     // z / (z - 1) = i dz_dtheta
};

inline CurveDerivatives tangent_and_flow(double t, double theta) {
    const complex z = curve_point(t, theta);
    if (z == 1.0)
        throw singularity_error("tangent_and_flow: derivative singular at the corner t=0, theta=0");
    const complex m = z / (z - 1.0);
    return {complex(0.0, -1.0) * m, m};
}

// Unsigned curvature of gamma_t at z(t,theta), via the Schwarz function
// (kappa = |S_zz|/2 on the curve).
inline double curvature(double t, double theta) {
    const complex zeta = -std::exp(-(t + 1.0)) * std::polar(1.0, theta);
    if (std::abs(zeta + inv_e) <= 1e-12)
        throw singularity_error("curvature: corner of the critical curve at t=0, theta=0");
    const complex w = w_principal(zeta).value;
    const complex wb = w_principal(std::conj(zeta)).value;
    const complex num = 1.0 + (w * (2.0 + w)).real();
    return std::abs(num / (std::pow(1.0 + wb, 3) * w));
}

// Large-t limit e^{t+1} - e^{-(t+1)}(1 - (3/2) cos 2 theta).
inline double curvature_asymptotic(double t, double theta) {
    return std::exp(t + 1.0) - std::exp(-(t + 1.0)) * (1.0 - 1.5 * std::cos(2.0 * theta));
}

// Schwarz reflection z* = conj(S(z,t)); fixes the points of gamma_t and
// satisfies z e^{-z} conj(z*) e^{-conj(z*)} = e^{-2(t+1)}.
inline complex reflect(complex z, double t) { return std::conj(schwarz(z, t)); }

// Validation probe for dS/dt = (2z/(1-z)) dS/dz, both partials by central
// differences of step h; O(h^2) plus roundoff away from cuts.
inline double schwarz_pde_residual(complex z, double t, double h) {
    if (z == 1.0)
        throw singularity_error("schwarz_pde_residual: relation singular at z = 1");
    const complex ds_dt = (schwarz(z, t + h) - schwarz(z, t - h)) / (2.0 * h);
    const complex ds_dz = (schwarz(z + h, t) - schwarz(z - h, t)) / (2.0 * h);
    return std::abs(ds_dt - 2.0 * z / (1.0 - z) * ds_dz);
}

// Same probe with one level of Richardson extrapolation on both partials,
// O(h^4).
inline double schwarz_pde_residual_richardson(complex z, double t, double h) {
    if (z == 1.0)
        throw singularity_error("schwarz_pde_residual: relation singular at z = 1");
    auto partials = [z, t](double hh) {
        return std::pair{(schwarz(z, t + hh) - schwarz(z, t - hh)) / (2.0 * hh),
                         (schwarz(z + hh, t) - schwarz(z - hh, t)) / (2.0 * hh)};
    };
    const auto [dt1, dz1] = partials(h);
    const auto [dt2, dz2] = partials(h / 2.0);
    const complex ds_dt = (4.0 * dt2 - dt1) / 3.0;
    const complex ds_dz = (4.0 * dz2 - dz1) / 3.0;
    return std::abs(ds_dt - 2.0 * z / (1.0 - z) * ds_dz);
}

namespace detail {

// Left side of e^{y cot y} sin(y)/y = e^{2t+1} in log form.
inline double off_axis_cut_equation(double y, double t) {
    return y / std::tan(y) + std::log(std::sin(y) / y) - (2.0 * t + 1.0);
}

inline double solve_off_axis_endpoint(int k, double t) {
    const double lo_lim = 2 * k * std::numbers::pi;
    const double hi_lim = lo_lim + std::numbers::pi;
    double a = lo_lim + 1e-3, b = hi_lim - 1e-3;
    for (int tries = 0; off_axis_cut_equation(a, t) <= 0.0; ++tries) {
        a = lo_lim + (a - lo_lim) / 8.0;
        if (tries > 40)
            throw numeric_error("analyticity_cuts: no sign change near y = 2k*pi, k=" +
                                std::to_string(k));
    }
    for (int tries = 0; off_axis_cut_equation(b, t) >= 0.0; ++tries) {
        b = hi_lim - (hi_lim - b) / 8.0;
        if (tries > 40)
            throw numeric_error("analyticity_cuts: no sign change near y = (2k+1)*pi, k=" +
                                std::to_string(k));
    }
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (a + b);
        if (off_axis_cut_equation(mid, t) > 0.0)
            a = mid;
        else
            b = mid;
    }
    return 0.5 * (a + b);
}

} // namespace detail

// Branch cuts of S(z,t): two real cuts [0,x1], [x2,inf) with e^x/x = e^{2t+1},
// plus one arc per k = 1..k_max in each half-plane ending where
// e^{y cot y} sin(y)/y = e^{2t+1}.
inline CutSet analyticity_cuts(double t, int k_max) {
    if (t < 0.0 || k_max < 1)
        throw domain_error("analyticity_cuts: need t >= 0 and k_max >= 1");
    CutSet cs;
    cs.t = t;
    const double a = -std::exp(-2.0 * t - 1.0);
    cs.x1 = -w_principal(a).value.real();
    cs.x2 = -w_branch(-1, a).value.real();
    for (int k = 1; k <= k_max; ++k) {
        const double y_end = detail::solve_off_axis_endpoint(k, t);
        cs.off_axis.push_back({k, 2 * k * std::numbers::pi, y_end});
        cs.off_axis.push_back({k, -y_end, -2 * k * std::numbers::pi});
    }
    return cs;
}

// Harmonic moment C_k(t) as the explicit series
// sum_{n >= max(1,1-k)} n^{k+2n-2} / ((n+k-1)! n!) e^{-2(t+1)n}.
inline double harmonic_moment_series(int k, double t, double tol) {
    if (tol <= 0.0)
        throw domain_error("harmonic_moment_series: tol must be positive");
    const int n0 = std::max(1, 1 - k);
    double sum = 0.0, prev = std::numeric_limits<double>::infinity();
    int rising = 0;
    for (int n = n0; n < n0 + 10000; ++n) {
        const double lt = (k + 2.0 * n - 2.0) * std::log(double(n)) -
                          std::lgamma(double(n + k)) - std::lgamma(n + 1.0) -
                          2.0 * (t + 1.0) * n;
        const double term = std::exp(lt);
        sum += term;
        if (term >= prev) {
            if (++rising > 50)
                throw numeric_error("harmonic_moment_series: terms not decreasing");
        } else {
            rising = 0;
            if (term < tol * std::abs(sum))
                break;
        }
        prev = term;
    }
    return sum;
}

// Same moment as (1/2 pi i) contour integral of z^{-k} S(z,t) dz over gamma_t,
// by the periodic midpoint rule in theta (spectrally accurate); the
// independent cross-check of the series.
inline complex harmonic_moment_contour(int k, double t, int n_points) {
    if (n_points < 64)
        throw domain_error("harmonic_moment_contour: need n_points >= 64");
    complex sum = 0.0;
    for (int j = 0; j < n_points; ++j) {
        const double theta = (j + 0.5) * two_pi / n_points;
        const complex z = curve_point(t, theta);
        // z_theta = i z/(1-z), so the summand is z^{1-k} S / (1-z)
        sum += std::pow(z, 1 - k) * schwarz(z, t) / (1.0 - z);
    }
    return sum / double(n_points);
}

inline MomentTable moment_table(int k_min, int k_max, double t, MomentMethod method,
                                double tol = 1e-12, int n_points = 1024) {
    MomentTable mt;
    mt.t = t;
    mt.method = method;
    for (int k = k_min; k <= k_max; ++k)
        mt.entries[k] = method == MomentMethod::series
                            ? complex(harmonic_moment_series(k, t, tol))
                            : harmonic_moment_contour(k, t, n_points);
    return mt;
}

struct NearestPoint {
    double theta;
    complex point;
    double dist;
};

// Closest point of gamma_t to z: coarse grid scan plus ternary refinement.
inline NearestPoint nearest_curve_point(complex z, double t, int grid = 2048) {
    int jb = 0;
    double best = std::numeric_limits<double>::infinity();
    for (int j = 0; j < grid; ++j) {
        const double d = std::abs(z - curve_point(t, two_pi * j / grid));
        if (d < best) {
            best = d;
            jb = j;
        }
    }
    double lo = two_pi * (jb - 1) / grid, hi = two_pi * (jb + 1) / grid;
    for (int it = 0; it < 60; ++it) {
        const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
        if (std::abs(z - curve_point(t, m1)) < std::abs(z - curve_point(t, m2)))
            hi = m2;
        else
            lo = m1;
    }
    const double theta = 0.5 * (lo + hi);
    const complex p = curve_point(t, theta);
    return {theta, p, std::min(best, std::abs(z - p))};
}

// Sampled arcs z = y cot y + i y bounding the univalence regions of
// w(z) = z e^{1-z}, plus the [1, inf) real-interval marker.
inline std::vector<QuadratrixPath> quadratrix_samples(int k_range, int n_per_arc) {
    if (k_range < 0 || n_per_arc < 2)
        throw domain_error("quadratrix_samples: need k_range >= 0, n_per_arc >= 2");
    std::vector<QuadratrixPath> paths;
    const double clip = 1e-3;
    auto arc = [&](int k, double y_lo, double y_hi) {
        QuadratrixPath p{k, false, {}};
        p.points.reserve(n_per_arc);
        for (int i = 0; i < n_per_arc; ++i) {
            const double y = y_lo + (y_hi - y_lo) * i / (n_per_arc - 1.0);
            p.points.push_back(y == 0.0 ? complex(1.0)
                                        : complex(y / std::tan(y), y));
        }
        paths.push_back(std::move(p));
    };
    arc(0, -std::numbers::pi + clip, std::numbers::pi - clip);
    for (int k = 1; k <= k_range; ++k) {
        arc(k, k * std::numbers::pi + clip, (k + 1) * std::numbers::pi - clip);
        arc(k, -(k + 1) * std::numbers::pi + clip, -k * std::numbers::pi - clip);
    }
    QuadratrixPath ray{0, true, {}};
    for (int i = 0; i < n_per_arc; ++i)
        ray.points.push_back(complex(1.0 + 4.0 * i / (n_per_arc - 1.0), 0.0));
    paths.push_back(std::move(ray));
    return paths;
}

} // namespace szego
