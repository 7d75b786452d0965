#pragma once

// Electrostatics on gamma_t (potential, field, energies), the transformed
// w-plane model, the dual hydrodynamic velocity field and streamline tracing.

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "szego/curve.hpp"
#include "szego/errors.hpp"
#include "szego/lambert.hpp"

namespace szego {

enum class Region { interior, exterior, on_curve };

struct FieldSample {
    complex z;
    double U;
    complex E; // field vector as E_x + i E_y; exterior-side limit on the curve
    Region region;
};

struct PathSample {
    std::vector<complex> points;
    bool closed = false;
    double invariant_drift = 0.0; // max deviation of Re(z - log z) along the path
    double arclength = 0.0;
    double closure_gap = std::numeric_limits<double>::quiet_NaN();
    std::string reason;
};

struct DensitySample {
    double rho;  // positive weight per unit theta, |(1-z)/(2 pi z)| |z_theta|
    complex dz;  // tangent z_theta
};

// Region of z relative to gamma_t.  The sublevel set of |z e^{1-z}| has
// spurious components outside the unit disk; the curve and its interior lie
// in |z| <= 1, which resolves them to the exterior.
inline Region classify(complex z, double t, double band) {
    if (band < 0.0)
        throw domain_error("classify: band must be nonnegative");
    const double m = std::abs(forward_map(z));
    const double level = std::exp(-t);
    if (std::abs(m - level) <= band && std::abs(z) <= 1.0 + band)
        return Region::on_curve;
    if (m < level && std::abs(z) < 1.0)
        return Region::interior;
    return Region::exterior;
}

// Total electrostatic potential; continuous across gamma_t with value t+1
// there.  t = +inf is the fully shrunk configuration Re z - log|z|.
inline double potential(complex z, double t) {
    if (z == 0.0)
        throw singularity_error("potential: point charge at z = 0");
    if (std::isinf(t))
        return z.real() - std::log(std::abs(z));
    switch (classify(z, t, 1e-12)) {
    case Region::exterior:
        return z.real() - std::log(std::abs(z));
    case Region::interior:
        return -z.real() + std::log(std::abs(z)) + 2.0 * (t + 1.0);
    default:
        return t + 1.0;
    }
}

enum class LogPotentialMethod { closed_form, quadrature };

namespace detail {

inline double log_kernel_midpoint(complex z, double t, double a, double b, int m) {
    double sum = 0.0;
    for (int j = 0; j < m; ++j) {
        const double theta = a + (b - a) * (j + 0.5) / m;
        const complex zp = curve_point(t, theta);
        const complex dz = complex(0.0, 1.0) * zp / (1.0 - zp);
        const double rho = std::abs((1.0 - zp) / (two_pi * zp)) * std::abs(dz);
        sum += std::log(std::abs(z - zp)) * rho;
    }
    return sum * (b - a) / m;
}

} // namespace detail

// Logarithmic potential of the equilibrium density: -2 log|z| outside,
// -2 Re z + 2(t+1) inside, or the defining integral by quadrature.
inline double log_potential(complex z, double t, LogPotentialMethod method,
                            int n_points = 2048, bool* near_singular = nullptr) {
    if (z == 0.0)
        throw singularity_error("log_potential: singular at z = 0");
    if (near_singular)
        *near_singular = false;
    if (method == LogPotentialMethod::closed_form) {
        return classify(z, t, 0.0) == Region::interior
                   ? -2.0 * z.real() + 2.0 * (t + 1.0)
                   : -2.0 * std::log(std::abs(z));
    }
    if (n_points < 64)
        throw domain_error("log_potential: need n_points >= 64");
    // locate the grid panel closest to z
    const double h = two_pi / n_points;
    double dmin = std::numeric_limits<double>::infinity();
    int jmin = 0;
    for (int j = 0; j < n_points; ++j) {
        const double d = std::abs(z - curve_point(t, (j + 0.5) * h));
        if (d < dmin) {
            dmin = d;
            jmin = j;
        }
    }
    double sum = 0.0;
    if (dmin >= 10.0 * h) {
        sum = detail::log_kernel_midpoint(z, t, 0.0, two_pi, n_points);
    } else {
        // near-singular kernel: resolve the closest panel with a fine rule
        if (near_singular)
            *near_singular = true;
        for (int j = 0; j < n_points; ++j) {
            if (j == jmin)
                continue;
            sum += detail::log_kernel_midpoint(z, t, j * h, (j + 1) * h, 1);
        }
        sum += detail::log_kernel_midpoint(z, t, jmin * h, (jmin + 1) * h, 1024);
    }
    return -2.0 * sum;
}

// Complex potential Omega_t; Re equals potential().  On-curve points report
// the exterior branch.
inline complex complex_potential(complex z, double t) {
    if (z == 0.0)
        throw singularity_error("complex_potential: singular at z = 0");
    if (std::isinf(t) || classify(z, t, 1e-12) != Region::interior)
        return z - std::log(z);
    return -z + std::log(z) + 2.0 * (t + 1.0);
}

// One-sided field formula for a prescribed region.
inline complex electric_field(complex z, double t, Region side) {
    (void)t;
    if (z == 0.0)
        throw singularity_error("electric_field: singular at z = 0");
    const complex g = 1.0 - 1.0 / std::conj(z);
    return side == Region::interior ? g : -g;
}

inline complex electric_field(complex z, double t) {
    const Region r = classify(z, t, 1e-12);
    if (r == Region::on_curve)
        throw domain_error("electric_field: on-curve evaluation needs an explicit side");
    return electric_field(z, t, r);
}

inline DensitySample density(double theta, double t) {
    const complex z = curve_point(t, theta);
    if (z == 1.0)
        throw singularity_error("density: tangent singular at the t=0 corner");
    const complex dz = complex(0.0, 1.0) * z / (1.0 - z);
    return {std::abs((1.0 - z) / (two_pi * z)) * std::abs(dz), dz};
}

// Self-energy of the line conductor, (1/2) contour integral of U_log rho |dz|;
// equals t + 1.
inline double self_energy(double t, int n_points) {
    if (n_points < 128)
        throw domain_error("self_energy: need n_points >= 128");
    double sum = 0.0;
    for (int j = 0; j < n_points; ++j) {
        const double theta = (j + 0.5) * two_pi / n_points;
        const auto d = density(theta, t);
        const complex z = curve_point(t, theta);
        sum += -2.0 * std::log(std::abs(z)) * d.rho;
    }
    return 0.5 * sum * two_pi / n_points;
}

// u0 - E_se; the total electrostatic energy of the conductor, identically 0.
inline double total_energy(double t, int n_points) {
    return (t + 1.0) - self_energy(t, n_points);
}

// Electrostatic potential on sheet k of the w-plane.
inline double w_plane_potential(complex w, double t, BranchIndex k) {
    if (w == 0.0)
        throw singularity_error("w_plane_potential: singular at w = 0");
    const double lw = std::log(std::abs(w));
    if (k != 0)
        return -lw + 1.0;
    return std::abs(w) > std::exp(-t) ? -lw + 1.0 : lw + 2.0 * t + 1.0;
}

// Logarithmic potential of the uniform unit charge on |w| = e^{-t}.
inline double w_plane_log_potential(complex w, double t) {
    if (w == 0.0)
        throw singularity_error("w_plane_log_potential: singular at w = 0");
    return std::abs(w) > std::exp(-t) ? -2.0 * std::log(std::abs(w)) : 2.0 * t;
}

// Hydrodynamic velocity, the 90-degree rotation i*E of the electric field.
inline complex velocity(complex z, double t, Region side) {
    return complex(0.0, 1.0) * electric_field(z, t, side);
}

inline complex velocity(complex z, double t) {
    const Region r = classify(z, t, 1e-12);
    if (r == Region::on_curve)
        throw domain_error("velocity: on-curve evaluation needs an explicit side");
    return velocity(z, t, r);
}

namespace detail {

// One adaptive Cash-Karp RK45 step of dz/dtau = f(z); updates z and h,
// returns false if the step had to be rejected (h was shrunk).
template <class F>
bool rk45_step(const F& f, complex& z, double& h, double tol) {
    const complex k1 = f(z);
    const complex k2 = f(z + h * (k1 / 5.0));
    const complex k3 = f(z + h * (3.0 / 40 * k1 + 9.0 / 40 * k2));
    const complex k4 = f(z + h * (3.0 / 10 * k1 - 9.0 / 10 * k2 + 6.0 / 5 * k3));
    const complex k5 =
        f(z + h * (-11.0 / 54 * k1 + 5.0 / 2 * k2 - 70.0 / 27 * k3 + 35.0 / 27 * k4));
    const complex k6 = f(z + h * (1631.0 / 55296 * k1 + 175.0 / 512 * k2 +
                                  575.0 / 13824 * k3 + 44275.0 / 110592 * k4 +
                                  253.0 / 4096 * k5));
    const complex z5 = z + h * (37.0 / 378 * k1 + 250.0 / 621 * k3 + 125.0 / 594 * k4 +
                                512.0 / 1771 * k6);
    const complex z4 = z + h * (2825.0 / 27648 * k1 + 18575.0 / 48384 * k3 +
                                13525.0 / 55296 * k4 + 277.0 / 14336 * k5 + 0.25 * k6);
    const double err = std::abs(z5 - z4);
    const double scale = tol * std::max(1.0, std::abs(z));
    if (err > scale && h > 1e-12) {
        h = std::max(1e-12, 0.9 * h * std::pow(scale / err, 0.25));
        return false;
    }
    z = z5;
    if (err > 0.0)
        h = std::min(2.0 * h, 0.9 * h * std::pow(scale / err, 0.2));
    else
        h *= 2.0;
    return true;
}

} // namespace detail

// Integrates dz/dtau = v_t(z) inside the region of z0.  Stops on closure
// (return to within one step of z0 after at least 10 steps), on crossing the
// curve, near the stagnation/singular points, or at max_steps.  The reported
// drift is the worst deviation of the conserved quantity Re(z - log z); the
// velocity field is -grad Im(Omega_t), so its integral curves are the level
// sets of Re(Omega_t).
inline PathSample streamline(complex z0, double t, double step, int max_steps) {
    if (step <= 0.0 || max_steps < 1)
        throw domain_error("streamline: need step > 0 and max_steps >= 1");
    const Region region = classify(z0, t, 1e-12);
    if (region == Region::on_curve || z0 == 0.0 || z0 == 1.0)
        throw domain_error("streamline: start point must lie off gamma_t and away from 0 and 1");
    auto f = [t, region](complex z) { return velocity(z, t, region); };
    auto invariant = [](complex z) { return (z - std::log(z)).real(); };

    PathSample path;
    path.points.push_back(z0);
    const double inv0 = invariant(z0);
    complex z = z0;
    double h = step;
    int accepted = 0;
    for (int it = 0; it < 8 * max_steps && accepted < max_steps; ++it) {
        const complex zprev = z;
        h = std::min(h, step);
        if (!detail::rk45_step(f, z, h, 1e-12))
            continue;
        ++accepted;
        path.arclength += std::abs(z - zprev);
        path.points.push_back(z);
        path.invariant_drift = std::max(path.invariant_drift,
                                        std::abs(invariant(z) - inv0));
        if (std::abs(z) < 10.0 * step || std::abs(z - 1.0) < 10.0 * step) {
            path.reason = "near-singularity";
            return path;
        }
        if (classify(z, t, 0.0) != region) {
            path.reason = "curve-crossing";
            return path;
        }
        if (accepted >= 10 && std::abs(z - z0) < step) {
            path.closed = true;
            path.closure_gap = std::abs(z - z0);
            path.reason = "closed";
            return path;
        }
    }
    path.reason = "max-steps";
    return path;
}

// Bundle of U, E and region for grid emission.
inline FieldSample field_sample(complex z, double t, double band = 1e-12) {
    const Region r = classify(z, t, band);
    const complex e = electric_field(z, t, r == Region::interior ? Region::interior
                                                                 : Region::exterior);
    return {z, r == Region::on_curve ? t + 1.0 : potential(z, t), e, r};
}

} // namespace szego
