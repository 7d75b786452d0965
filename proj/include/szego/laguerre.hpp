#pragma once

// Varying Laguerre polynomials L_n^{(alpha)}: stable evaluation through the
// three-term recurrence, all-complex zero computation, the deformation
// sequences of the zero-distribution limit, and distance diagnostics against
// the curves gamma_t.
//
// Zeros on the left part of the limit curve are exponentially ill-conditioned
// in any fixed-precision representation (condition ~ e^{0.56 n}), so the
// Aberth iteration runs over GMP floats with a precision that grows with n.

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "szego/curve.hpp"
#include "szego/detail/bigcomplex.hpp"
#include "szego/errors.hpp"

namespace szego {

struct ZeroSet {
    int n = 0;
    double alpha = 0.0;      // nearest-double value of the parameter
    std::vector<complex> zeros;
    double scale = 1.0;      // division applied to the zeta-variable zeros
    double worst_residual = 0.0; // worst relative Newton step at the zeros
    bool clustered = false;  // some pairwise distance fell below 1e-8
};

struct SequenceSpec {
    enum class Kind { shift_c, rate_t };
    Kind kind;
    double parameter; // c for shift_c (alpha_n = -n-c), t for rate_t (alpha_n = -n-e^{-tn})
};

// L_n^{(alpha)}(zeta) with first and second derivatives, by the three-term
// recurrence differentiated exactly; carries a power-of-two scale so that
// intermediate growth never overflows.
struct LaguerreEval {
    complex value, d1, d2; // mantissas
    double log2_scale;     // common scale: L = value * 2^log2_scale, etc.
    double log2_peak;      // largest |L_k| seen along the recurrence
};

inline LaguerreEval laguerre_eval_scaled(int n, double alpha, complex zeta) {
    if (n < 0)
        throw domain_error("laguerre_eval: need n >= 0");
    LaguerreEval r{1.0, 0.0, 0.0, 0.0, 0.0};
    if (n == 0)
        return r;
    complex lm(1.0), lm1(0.0), lm2(0.0);           // L_{k-1} and derivatives
    complex lk = alpha + 1.0 - zeta, lk1(-1.0), lk2(0.0); // L_k and derivatives
    r.log2_peak = std::log2(std::max(1.0, std::abs(lk)));
    for (int k = 1; k < n; ++k) {
        const complex a = (2.0 * k + 1.0 + alpha - zeta) / (k + 1.0);
        const double b = (k + alpha) / (k + 1.0);
        const complex nx = a * lk - b * lm;
        const complex nx1 = a * lk1 - lk / (k + 1.0) - b * lm1;
        const complex nx2 = a * lk2 - 2.0 * lk1 / (k + 1.0) - b * lm2;
        lm = lk; lm1 = lk1; lm2 = lk2;
        lk = nx; lk1 = nx1; lk2 = nx2;
        const double big = std::max({std::abs(lk), std::abs(lk1), std::abs(lk2)});
        if (big > 0.0)
            r.log2_peak = std::max(r.log2_peak, std::log2(big) + r.log2_scale);
        if (big > 0x1p512) {
            lk *= 0x1p-512; lk1 *= 0x1p-512; lk2 *= 0x1p-512;
            lm *= 0x1p-512; lm1 *= 0x1p-512; lm2 *= 0x1p-512;
            r.log2_scale += 512;
        }
    }
    r.value = lk; r.d1 = lk1; r.d2 = lk2;
    return r;
}

inline complex laguerre_eval(int n, double alpha, complex zeta) {
    const auto e = laguerre_eval_scaled(n, alpha, zeta);
    const double l2 = e.log2_scale + std::log2(std::max(std::abs(e.value), 1e-300));
    if (l2 > 1020.0)
        throw numeric_error("laguerre_eval: value overflows a double; "
                            "evaluate in the scaled z-variable (zeta = n z)");
    return e.value * std::exp2(e.log2_scale);
}

// Residual of the defining differential equation
// zeta u'' + (alpha+1-zeta) u' + n u = 0, relative to the size of its terms.
inline double ode_residual(int n, double alpha, complex zeta) {
    if (n < 1)
        throw domain_error("ode_residual: need n >= 1");
    const auto e = laguerre_eval_scaled(n, alpha, zeta);
    const complex t1 = zeta * e.d2;
    const complex t2 = (alpha + 1.0 - zeta) * e.d1;
    const complex t3 = double(n) * e.value;
    const double scale = std::abs(t1) + std::abs(t2) + std::abs(t3);
    if (scale == 0.0)
        return 0.0;
    return std::abs(t1 + t2 + t3) / scale;
}

namespace detail {

// Monic coefficients of L_n^{(alpha)}(n x) as a polynomial in x, built by the
// exact downward ratio m_{k-1} = m_k * (-k (alpha+k)) / (n (n-k+1)).
// alpha + k is produced by the callback so that sequences with alpha = -n - c
// and tiny c keep full relative accuracy.
template <class AlphaPlus>
std::vector<mpf_class> monic_scaled_coefficients(int n, mp_bitcnt_t prec,
                                                 const AlphaPlus& alpha_plus) {
    std::vector<mpf_class> co(n + 1, mpf_class(0, prec));
    mpf_class m(1, prec);
    co[n] = m;
    for (int k = n; k >= 1; --k) {
        const mpf_class apk = alpha_plus(k, prec);
        m = m * mpf_class(-k, prec) * apk / (mpf_class(n, prec) * mpf_class(n - k + 1, prec));
        co[k - 1] = m;
    }
    return co;
}

struct AberthResult {
    std::vector<complex> roots; // in the x = zeta/n variable
    double worst_residual = 0.0;
};

// Horner for p and p' of a real-coefficient monic polynomial at a complex
// point held in raw mpf registers.  All scratch is caller-provided, so the
// hot loop performs no allocations.
class MpHorner {
  public:
    MpHorner(const std::vector<mpf_class>& coeff, mp_bitcnt_t prec)
        : co_(coeff) {
        for (mpf_t* v : {&pr_, &pi_, &qr_, &qi_, &u1_, &u2_, &u3_, &nr_, &ni_, &d_})
            mpf_init2(*v, prec);
    }
    ~MpHorner() {
        for (mpf_t* v : {&pr_, &pi_, &qr_, &qi_, &u1_, &u2_, &u3_, &nr_, &ni_, &d_})
            mpf_clear(*v);
    }
    MpHorner(const MpHorner&) = delete;
    MpHorner& operator=(const MpHorner&) = delete;

    // evaluates p and p' at (xr, xi); leaves the Newton ratio p/p' in
    // newton_re()/newton_im() and returns |p/p'| as a double
    double newton_ratio(const mpf_t xr, const mpf_t xi) {
        const int m = int(co_.size()) - 1;
        mpf_set(pr_, co_[m].get_mpf_t());
        mpf_set_ui(pi_, 0);
        mpf_set_ui(qr_, 0);
        mpf_set_ui(qi_, 0);
        for (int k = m - 1; k >= 0; --k) {
            cmuladd(qr_, qi_, xr, xi, pr_, pi_);                // q = q*x + p
            cmuladd_real(pr_, pi_, xr, xi, co_[k].get_mpf_t()); // p = p*x + c_k
        }
        // N = p/q
        mpf_mul(u1_, qr_, qr_);
        mpf_mul(u2_, qi_, qi_);
        mpf_add(d_, u1_, u2_);
        if (mpf_sgn(d_) == 0) {
            mpf_set_ui(nr_, 0);
            mpf_set_ui(ni_, 0);
            return 0.0;
        }
        mpf_mul(u1_, pr_, qr_);
        mpf_mul(u2_, pi_, qi_);
        mpf_add(u3_, u1_, u2_);
        mpf_div(nr_, u3_, d_);
        mpf_mul(u1_, pi_, qr_);
        mpf_mul(u2_, pr_, qi_);
        mpf_sub(u3_, u1_, u2_);
        mpf_div(ni_, u3_, d_);
        return std::hypot(mpf_get_d(nr_), mpf_get_d(ni_));
    }
    const mpf_t& newton_re() const { return nr_; }
    const mpf_t& newton_im() const { return ni_; }

  private:
    // a = a*x + b, complex
    void cmuladd(mpf_t ar, mpf_t ai, const mpf_t xr, const mpf_t xi,
                 const mpf_t br, const mpf_t bi) {
        mpf_mul(u1_, ar, xr);
        mpf_mul(u2_, ai, xi);
        mpf_sub(u3_, u1_, u2_);
        mpf_mul(u1_, ar, xi);
        mpf_mul(u2_, ai, xr);
        mpf_add(ai, u1_, u2_);
        mpf_add(ar, u3_, br);
        mpf_add(ai, ai, bi);
    }
    // a = a*x + c, real c
    void cmuladd_real(mpf_t ar, mpf_t ai, const mpf_t xr, const mpf_t xi,
                      const mpf_t c) {
        mpf_mul(u1_, ar, xr);
        mpf_mul(u2_, ai, xi);
        mpf_sub(u3_, u1_, u2_);
        mpf_mul(u1_, ar, xi);
        mpf_mul(u2_, ai, xr);
        mpf_add(ai, u1_, u2_);
        mpf_add(ar, u3_, c);
    }

    const std::vector<mpf_class>& co_;
    mpf_t pr_, pi_, qr_, qi_, u1_, u2_, u3_, nr_, ni_, d_;
};

// Aberth-Ehrlich simultaneous iteration on a real monic coefficient vector.
// A double-precision pre-stage settles the configuration cheaply; GMP stages
// on a doubling precision ladder then supply the digits that double cannot
// represent.  The repulsion sum runs in double throughout: it only steers the
// iteration, the fixed point is p(x) = 0.
inline AberthResult aberth(const std::vector<mpf_class>& monic, mp_bitcnt_t bits) {
    const int deg = int(monic.size()) - 1;
    AberthResult out;
    if (deg == 0)
        return out;

    int zero_roots = 0;
    while (zero_roots < deg && monic[zero_roots] == 0)
        ++zero_roots;
    const int m = deg - zero_roots;
    out.roots.assign(zero_roots, complex(0.0));
    if (m == 0)
        return out;
    const std::vector<mpf_class> cs(monic.begin() + zero_roots, monic.end());

    // initial circle at the geometric mean of the root moduli
    const double r0 = std::exp2(log2_mpf(cs[0]) / m);
    std::vector<complex> x(m);
    for (int i = 0; i < m; ++i)
        x[i] = std::polar(r0, two_pi * (i + 0.5) / m);

    // stage 0: double-precision sweeps
    {
        std::vector<double> cd(m + 1);
        for (int k = 0; k <= m; ++k)
            cd[k] = cs[k].get_d();
        for (int sweep = 0; sweep < 400; ++sweep) {
            double worst = 0.0;
            for (int i = 0; i < m; ++i) {
                complex p = cd[m], q = 0.0;
                for (int k = m - 1; k >= 0; --k) {
                    q = q * x[i] + p;
                    p = p * x[i] + cd[k];
                }
                if (q == 0.0)
                    continue;
                const complex nw = p / q;
                complex s = 0.0;
                for (int j = 0; j < m; ++j)
                    if (j != i)
                        s += 1.0 / (x[i] - x[j]);
                complex step = nw / (1.0 - nw * s);
                const double cap = 0.5 * std::max(std::abs(x[i]), 0.1 * r0);
                if (std::abs(step) > cap)
                    step *= cap / std::abs(step);
                x[i] -= step;
                worst = std::max(worst, std::abs(step) / std::max(std::abs(x[i]), r0));
            }
            if (worst < 1e-14)
                break;
        }
    }

    // GMP stages
    std::vector<mp_bitcnt_t> ladder;
    for (mp_bitcnt_t b = 128; b < bits; b *= 2)
        ladder.push_back(b);
    ladder.push_back(bits);

    std::vector<mpf_class> xr, xi;
    for (int i = 0; i < m; ++i) {
        xr.emplace_back(x[i].real(), bits);
        xi.emplace_back(x[i].imag(), bits);
    }

    for (mp_bitcnt_t b : ladder) {
        std::vector<mpf_class> cb(m + 1, mpf_class(0, b));
        for (int k = 0; k <= m; ++k)
            cb[k] = mpf_class(cs[k], b);
        std::vector<mpf_class> yr(m, mpf_class(0, b)), yi(m, mpf_class(0, b));
        for (int i = 0; i < m; ++i) {
            yr[i] = mpf_class(xr[i], b);
            yi[i] = mpf_class(xi[i], b);
        }
        MpHorner horner(cb, b);
        mpf_class nrc(0, b), nic(0, b), fr(0, b), fi(0, b);
        const double target = std::exp2(16.0 - double(b));
        std::vector<char> done(m, 0);
        for (int sweep = 0; sweep < 80; ++sweep) {
            double worst = 0.0;
            for (int i = 0; i < m; ++i)
                x[i] = complex(yr[i].get_d(), yi[i].get_d());
            for (int i = 0; i < m; ++i) {
                if (done[i])
                    continue;
                const double nabs = horner.newton_ratio(yr[i].get_mpf_t(), yi[i].get_mpf_t());
                complex s = 0.0;
                for (int j = 0; j < m; ++j)
                    if (j != i)
                        s += 1.0 / (x[i] - x[j]);
                const complex nd(mpf_get_d(horner.newton_re()), mpf_get_d(horner.newton_im()));
                const complex f = 1.0 / (1.0 - nd * s); // near 1 once settled
                // step = N * f, accumulated in mpf
                mpf_set(nrc.get_mpf_t(), horner.newton_re());
                mpf_set(nic.get_mpf_t(), horner.newton_im());
                fr = f.real();
                fi = f.imag();
                yr[i] -= nrc * fr - nic * fi;
                yi[i] -= nrc * fi + nic * fr;
                const double rel = nabs * std::abs(f) /
                                   std::max({std::abs(x[i]), r0, 1e-300});
                if (rel < target)
                    done[i] = 1;
                worst = std::max(worst, rel);
            }
            if (worst < target)
                break;
        }
        for (int i = 0; i < m; ++i) {
            xr[i] = yr[i];
            xi[i] = yi[i];
        }
    }

    // final residual: relative Newton step at full precision
    {
        std::vector<mpf_class> cb(m + 1, mpf_class(0, bits));
        for (int k = 0; k <= m; ++k)
            cb[k] = mpf_class(cs[k], bits);
        MpHorner horner(cb, bits);
        for (int i = 0; i < m; ++i) {
            const double nabs = horner.newton_ratio(xr[i].get_mpf_t(), xi[i].get_mpf_t());
            const complex xd(xr[i].get_d(), xi[i].get_d());
            out.worst_residual = std::max(out.worst_residual,
                                          nabs / std::max(std::abs(xd), r0));
            out.roots.push_back(xd);
        }
    }
    return out;
}

template <class AlphaPlus>
ZeroSet zeros_from_ratios(int n, double alpha_nearest, const AlphaPlus& alpha_plus) {
    if (n < 1)
        throw domain_error("laguerre_zeros: need n >= 1");
    const mp_bitcnt_t bits = std::max<mp_bitcnt_t>(96, 64 + mp_bitcnt_t(std::ceil(0.9 * n)));
    const auto monic = monic_scaled_coefficients(n, bits, alpha_plus);
    auto ab = aberth(monic, bits);
    if (!(ab.worst_residual < 1e-10))
        throw convergence_error("laguerre_zeros: root iteration did not converge",
                                ab.worst_residual, 0);
    ZeroSet zs;
    zs.n = n;
    zs.alpha = alpha_nearest;
    zs.scale = 1.0;
    zs.worst_residual = ab.worst_residual;
    zs.zeros.reserve(n);
    for (const complex& x : ab.roots)
        zs.zeros.push_back(double(n) * x); // back to the zeta-variable
    std::sort(zs.zeros.begin(), zs.zeros.end(), [](complex a, complex b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    for (size_t i = 0; i + 1 < zs.zeros.size() && !zs.clustered; ++i)
        for (size_t j = i + 1; j < zs.zeros.size(); ++j)
            if (std::abs(zs.zeros[i] - zs.zeros[j]) < 1e-8) {
                zs.clustered = true;
                break;
            }
    return zs;
}

} // namespace detail

// All n zeros of L_n^{(alpha)} in the zeta-variable.
inline ZeroSet laguerre_zeros(int n, double alpha) {
    return detail::zeros_from_ratios(n, alpha, [alpha](int k, mp_bitcnt_t prec) -> mpf_class {
        return mpf_class(alpha, prec) + mpf_class(k, prec);
    });
}

// Zeros of L_n^{(alpha_n)}(n z) in the z-variable for the deformation
// sequences.  alpha_n = -n - c is never formed in double precision: the
// offset c enters the coefficient ratios exactly, which matters for
// rate_t where c = e^{-t n} underflows the spacing of doubles near n.
inline ZeroSet scaled_zeros(const SequenceSpec& spec, int n) {
    if (n < 1)
        throw domain_error("scaled_zeros: need n >= 1");
    double c = 0.0;
    if (spec.kind == SequenceSpec::Kind::shift_c) {
        if (spec.parameter < 0.0)
            throw domain_error("scaled_zeros: shift_c needs c >= 0");
        c = spec.parameter;
    } else {
        if (spec.parameter < 0.0)
            throw domain_error("scaled_zeros: rate_t needs t >= 0");
        const double tn = spec.parameter * n;
        if (tn > 700.0)
            throw numeric_error("scaled_zeros: e^{-t n} underflows; reduce t or n");
        c = std::exp(-tn);
    }
    auto zs = detail::zeros_from_ratios(n, -double(n) - c,
                                        [c, n](int k, mp_bitcnt_t prec) -> mpf_class {
                                            return mpf_class(k - n, prec) - mpf_class(c, prec);
                                        });
    for (complex& z : zs.zeros)
        z /= double(n);
    zs.scale = double(n);
    return zs;
}

struct CurveDistance {
    double max_dist;
    double mean_dist;
};

// Distance from each (scaled) zero to gamma_t: coarse theta grid, then local
// ternary refinement of min_theta |z - z(t,theta)|.
inline CurveDistance zero_curve_distance(const ZeroSet& zs, double t, int grid = 2048) {
    if (zs.zeros.empty())
        throw domain_error("zero_curve_distance: empty zero set");
    std::vector<complex> pts(grid);
    for (int j = 0; j < grid; ++j)
        pts[j] = curve_point(t, two_pi * j / grid);
    double mx = 0.0, mean = 0.0;
    for (const complex& z : zs.zeros) {
        int jb = 0;
        double best = std::numeric_limits<double>::infinity();
        for (int j = 0; j < grid; ++j) {
            const double d = std::abs(z - pts[j]);
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
        best = std::min(best, std::abs(z - curve_point(t, 0.5 * (lo + hi))));
        mx = std::max(mx, best);
        mean += best / double(zs.zeros.size());
    }
    return {mx, mean};
}

} // namespace szego
