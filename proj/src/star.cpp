#include "nlhyp/star.hpp"

#include <cmath>
#include <stdexcept>

#include "nlhyp/parallel.hpp"

namespace nlhyp {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;
constexpr double kGammaOverflowLog = 300.0;

double smoothstep01(double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    return ((6.0 * x - 15.0) * x + 10.0) * x * x * x;
}

struct Interval {
    double lo = 0.0, hi = 0.0;
    bool empty() const { return hi <= lo; }
    Interval cut(double a, double b) const { return {std::max(lo, a), std::min(hi, b)}; }
};

// trapezoid points for an oscillatory factor e^{i q s} over [lo, hi]:
// at least 8 points per oscillation, never fewer than 41.
int quad_points(const Interval& iv, double freq) {
    double len = iv.hi - iv.lo;
    double per_osc = 8.0 * len * std::abs(freq) / kTwoPi;
    int n = std::max(41, static_cast<int>(std::ceil(per_osc)) + 1);
    return std::min(n, 2001);
}

// 2-d trapezoid of fn over box iv0 x iv1 with n0 x n1 points
template <typename Fn>
cplx trapezoid2(const Interval& iv0, const Interval& iv1, int n0, int n1, Fn&& fn) {
    double h0 = (iv0.hi - iv0.lo) / (n0 - 1);
    double h1 = (iv1.hi - iv1.lo) / (n1 - 1);
    cplx acc(0.0);
    for (int a = 0; a < n0; ++a) {
        double w0 = (a == 0 || a == n0 - 1) ? 0.5 : 1.0;
        double p0 = iv0.lo + a * h0;
        cplx row(0.0);
        for (int b = 0; b < n1; ++b) {
            double w1 = (b == 0 || b == n1 - 1) ? 0.5 : 1.0;
            row += w1 * fn(p0, iv1.lo + b * h1);
        }
        acc += w0 * row;
    }
    return acc * (h0 * h1);
}

} // namespace

double StarSymbol::eval(double u0, double u1) const {
    double d0 = u0 - center0, d1 = u1 - center1;
    double v = amp * std::exp(-0.5 * (d0 * d0 + d1 * d1) / (sigma * sigma));
    if (window_half > 0.0) {
        double ramp = 0.3 * window_half;
        auto win = [&](double d) {
            double s = window_half - std::abs(d);
            if (s <= 0.0) return 0.0;
            return smoothstep01(s / ramp);
        };
        v *= win(d0) * win(d1);
    }
    return v;
}

double StarSymbol::support_radius() const {
    if (window_half > 0.0) return window_half;
    return 9.5 * sigma;  // |w| < 1e-19 amp beyond this
}

cplx StarSymbol::fourier(double k0, double k1) const {
    if (window_half <= 0.0) {
        // unitary-convention transform of the Gaussian
        double g = amp * sigma * sigma * std::exp(-0.5 * sigma * sigma * (k0 * k0 + k1 * k1));
        double phase = -(k0 * center0 + k1 * center1);
        return g * cplx(std::cos(phase), std::sin(phase));
    }
    double r = support_radius();
    Interval iv0{center0 - r, center0 + r}, iv1{center1 - r, center1 + r};
    int n0 = quad_points(iv0, k0), n1 = quad_points(iv1, k1);
    cplx integral = trapezoid2(iv0, iv1, n0, n1, [&](double u0, double u1) {
        double phase = -(k0 * u0 + k1 * u1);
        return eval(u0, u1) * cplx(std::cos(phase), std::sin(phase));
    });
    return integral / kTwoPi;
}

double star_cutoff(double s, double inner, double outer) {
    double a = std::abs(s);
    if (a <= inner) return 1.0;
    if (a >= outer) return 0.0;
    return smoothstep01((outer - a) / (outer - inner));
}

double gamma_diffeo(double u) {
    double a = std::abs(u);
    if (a > 1.0 - 1e-3)
        throw std::invalid_argument("gamma_diffeo: evaluation too close to the boundary of K");
    double v;
    if (a <= 0.5) {
        double e2 = std::exp(2.0);
        v = e2 * (a + 4.0 * a * a * a);
    } else {
        double ell = 1.0 / (1.0 - a);
        if (ell > kGammaOverflowLog)
            throw std::runtime_error("gamma_diffeo: overflow guard tripped near the boundary of K");
        v = std::exp(ell);
    }
    return u < 0.0 ? -v : v;
}

double gamma_diffeo_prime(double u) {
    double a = std::abs(u);
    if (a > 1.0 - 1e-3)
        throw std::invalid_argument("gamma_diffeo: evaluation too close to the boundary of K");
    if (a <= 0.5) return std::exp(2.0) * (1.0 + 12.0 * a * a);
    double ell = 1.0 / (1.0 - a);
    if (ell > kGammaOverflowLog)
        throw std::runtime_error("gamma_diffeo: overflow guard tripped near the boundary of K");
    return std::exp(ell) * ell * ell;
}

double gamma_diffeo_inverse(double v) {
    double a = std::abs(v);
    double e2 = std::exp(2.0);
    double u;
    if (a >= e2) {
        u = 1.0 - 1.0 / std::log(a);
    } else {
        // monotone cubic e^2 (u + 4u^3) = a on [0, 1/2]; Newton from a scaled guess
        double t = a / e2;
        u = std::min(0.5, t);
        for (int it = 0; it < 60; ++it) {
            double f = u + 4.0 * u * u * u - t;
            double df = 1.0 + 12.0 * u * u;
            double step = f / df;
            u -= step;
            if (std::abs(step) < 1e-16) break;
        }
    }
    return v < 0.0 ? -u : u;
}

cplx moyal_limit_kernel(const StarProductSpec& spec, const double x[2], const double y[2]) {
    double th = spec.theta0;
    // theta^{-1} y = (-y1, y0)/theta0
    double phase = (x[1] * y[0] - x[0] * y[1]) / th;
    double k0 = -(y[1] - x[1]) / th;
    double k1 = (y[0] - x[0]) / th;
    cplx ft = spec.symbol.fourier(k0, k1);
    return ft * cplx(std::cos(phase), std::sin(phase)) / (kTwoPi * th * th);
}

StarKernelValue moyal_eps_kernel(const StarProductSpec& spec, double eps, const double x[2],
                                 const double y[2]) {
    StarKernelValue out;
    double th = spec.theta0;
    double xi0 = y[0] - x[0], xi1 = y[1] - x[1];
    double chi_z = star_cutoff(eps * xi0, spec.chi_inner, spec.chi_outer) *
                   star_cutoff(eps * xi1, spec.chi_inner, spec.chi_outer);
    if (chi_z == 0.0) return out;
    // w(x + theta p) with theta p = theta0 (p1, -p0): support box in p
    double r = spec.symbol.support_radius();
    double pmax = spec.chi_outer / eps;
    Interval iv0 = Interval{(x[1] - spec.symbol.center1 - r) / th,
                            (x[1] - spec.symbol.center1 + r) / th}
                       .cut(-pmax, pmax);
    Interval iv1 = Interval{(spec.symbol.center0 - r - x[0]) / th,
                            (spec.symbol.center0 + r - x[0]) / th}
                       .cut(-pmax, pmax);
    if (iv0.empty() || iv1.empty()) return out;
    auto integrand = [&](double p0, double p1) {
        double phase = p0 * xi0 + p1 * xi1;
        double chi_p = star_cutoff(eps * p0, spec.chi_inner, spec.chi_outer) *
                       star_cutoff(eps * p1, spec.chi_inner, spec.chi_outer);
        double w = spec.symbol.eval(x[0] + th * p1, x[1] - th * p0);
        return chi_p * w * cplx(std::cos(phase), std::sin(phase));
    };
    int n0 = quad_points(iv0, xi0), n1 = quad_points(iv1, xi1);
    cplx base = trapezoid2(iv0, iv1, n0, n1, integrand);
    cplx fine = trapezoid2(iv0, iv1, 2 * n0 - 1, 2 * n1 - 1, integrand);
    out.value = chi_z * fine / (kTwoPi * kTwoPi);
    out.quad_error = std::abs(fine - base) * std::abs(chi_z) / (kTwoPi * kTwoPi);
    out.converged = out.quad_error <= 1e-12 + 1e-4 * std::abs(out.value);
    return out;
}

namespace {

void validate_local_nc(const StarProductSpec& spec) {
    if (spec.k_half <= 0.0)
        throw std::invalid_argument("local-nc: K half-width must be positive");
    if (spec.symbol.window_half <= 0.0)
        throw std::invalid_argument("local-nc: the symbol must be compactly supported "
                                    "strictly inside K (windowed)");
    double r = spec.symbol.support_radius();
    if (std::abs(spec.symbol.center0) + r > 0.95 || std::abs(spec.symbol.center1) + r > 0.95)
        throw std::invalid_argument("local-nc: symbol support must stay within |u| <= 0.95");
}

bool inside_k(const StarProductSpec& spec, const double x[2], double u[2]) {
    u[0] = (x[0] - spec.k_center0) / spec.k_half;
    u[1] = (x[1] - spec.k_center1) / spec.k_half;
    return std::abs(u[0]) < 1.0 && std::abs(u[1]) < 1.0;
}

} // namespace

cplx local_nc_limit_kernel(const StarProductSpec& spec, const double x[2], const double y[2]) {
    validate_local_nc(spec);
    double u[2], v[2];
    if (!inside_k(spec, x, u) || !inside_k(spec, y, v)) return cplx(0.0);
    double th = spec.theta0;
    double gu0 = gamma_diffeo(u[0]), gu1 = gamma_diffeo(u[1]);
    double gv0 = gamma_diffeo(v[0]), gv1 = gamma_diffeo(v[1]);
    double k0 = -(gv1 - gu1) / th;
    double k1 = (gv0 - gu0) / th;
    // phi~(k) = (2 pi)^{-1} int e^{-i k . gamma(u)} w(u) gamma'(u0) gamma'(u1) du
    double r = spec.symbol.support_radius();
    Interval iv0{spec.symbol.center0 - r, spec.symbol.center0 + r};
    Interval iv1{spec.symbol.center1 - r, spec.symbol.center1 + r};
    double gpmax0 = gamma_diffeo_prime(std::max(std::abs(iv0.lo), std::abs(iv0.hi)));
    double gpmax1 = gamma_diffeo_prime(std::max(std::abs(iv1.lo), std::abs(iv1.hi)));
    double f0 = std::abs(k0) * gpmax0, f1 = std::abs(k1) * gpmax1;
    double per0 = 8.0 * (iv0.hi - iv0.lo) * f0 / kTwoPi;
    double per1 = 8.0 * (iv1.hi - iv1.lo) * f1 / kTwoPi;
    if (per0 > 2000.0 || per1 > 2000.0) return cplx(0.0);  // transform has decayed below precision
    int n0 = std::max(41, static_cast<int>(std::ceil(per0)) + 1);
    int n1 = std::max(41, static_cast<int>(std::ceil(per1)) + 1);
    cplx ft = trapezoid2(iv0, iv1, n0, n1, [&](double a, double b) {
        double phase = -(k0 * gamma_diffeo(a) + k1 * gamma_diffeo(b));
        double wv = spec.symbol.eval(a, b) * gamma_diffeo_prime(a) * gamma_diffeo_prime(b);
        return wv * cplx(std::cos(phase), std::sin(phase));
    }) / kTwoPi;
    double phase = (gu1 * gv0 - gu0 * gv1) / th;
    double jac = gamma_diffeo_prime(v[0]) * gamma_diffeo_prime(v[1]);
    cplx val = ft * jac * cplx(std::cos(phase), std::sin(phase)) /
               (kTwoPi * th * th * spec.k_half * spec.k_half);
    return val;
}

StarKernelValue local_nc_eps_kernel(const StarProductSpec& spec, double eps, const double x[2],
                                    const double y[2]) {
    validate_local_nc(spec);
    StarKernelValue out;
    double u[2], v[2];
    if (!inside_k(spec, x, u) || !inside_k(spec, y, v)) return out;
    double th = spec.theta0;
    double zeta0 = gamma_diffeo(v[0]) - gamma_diffeo(u[0]);
    double zeta1 = gamma_diffeo(v[1]) - gamma_diffeo(u[1]);
    double chi_z = star_cutoff(eps * zeta0, spec.chi_inner, spec.chi_outer) *
                   star_cutoff(eps * zeta1, spec.chi_inner, spec.chi_outer);
    if (chi_z == 0.0) return out;
    // support of w(tau_{theta p}(u)): gamma(u_k) + (theta p)_k within gamma of
    // the symbol support
    double r = spec.symbol.support_radius();
    double glo0 = gamma_diffeo(spec.symbol.center0 - r);
    double ghi0 = gamma_diffeo(spec.symbol.center0 + r);
    double glo1 = gamma_diffeo(spec.symbol.center1 - r);
    double ghi1 = gamma_diffeo(spec.symbol.center1 + r);
    double gu0 = gamma_diffeo(u[0]), gu1 = gamma_diffeo(u[1]);
    double pmax = spec.chi_outer / eps;
    // (theta p)_0 = th p1, (theta p)_1 = -th p0
    Interval iv1 = Interval{(glo0 - gu0) / th, (ghi0 - gu0) / th}.cut(-pmax, pmax);
    Interval iv0 = Interval{(gu1 - ghi1) / th, (gu1 - glo1) / th}.cut(-pmax, pmax);
    if (iv0.empty() || iv1.empty()) return out;
    auto integrand = [&](double p0, double p1) {
        double phase = p0 * zeta0 + p1 * zeta1;
        double chi_p = star_cutoff(eps * p0, spec.chi_inner, spec.chi_outer) *
                       star_cutoff(eps * p1, spec.chi_inner, spec.chi_outer);
        double a0 = gamma_diffeo_inverse(gu0 + th * p1);
        double a1 = gamma_diffeo_inverse(gu1 - th * p0);
        double w = spec.symbol.eval(a0, a1);
        return chi_p * w * cplx(std::cos(phase), std::sin(phase));
    };
    int n0 = quad_points(iv0, zeta0), n1 = quad_points(iv1, zeta1);
    cplx base = trapezoid2(iv0, iv1, n0, n1, integrand);
    cplx fine = trapezoid2(iv0, iv1, 2 * n0 - 1, 2 * n1 - 1, integrand);
    double jac = gamma_diffeo_prime(v[0]) * gamma_diffeo_prime(v[1]);
    double scale = chi_z * jac / (kTwoPi * kTwoPi * spec.k_half * spec.k_half);
    out.value = fine * scale;
    out.quad_error = std::abs(fine - base) * std::abs(scale);
    out.converged = out.quad_error <= 1e-12 + 1e-4 * std::abs(out.value);
    return out;
}

cplx star_apply_at(const StarProductSpec& spec, double eps, const Field& f, int i, int j) {
    const GridSpec& g = f.grid();
    if (g.n_components != 1)
        throw std::invalid_argument("star_apply_at: scalar fields only");
    Region supp = empirical_support(f, 0.0);
    if (supp.empty()) return cplx(0.0);
    double x[2] = {g.t(i), g.x(j)};
    cplx acc(0.0);
    for (int a = supp.i_min(); a <= supp.i_max(); ++a)
        for (int b = supp.j_min(); b <= supp.j_max(); ++b) {
            if (f.at(a, b) == cplx(0.0)) continue;
            double y[2] = {g.t(a), g.x(b)};
            cplx k;
            if (spec.variant == StarProductSpec::Variant::Moyal)
                k = eps > 0.0 ? moyal_eps_kernel(spec, eps, x, y).value
                              : moyal_limit_kernel(spec, x, y);
            else
                k = eps > 0.0 ? local_nc_eps_kernel(spec, eps, x, y).value
                              : local_nc_limit_kernel(spec, x, y);
            acc += k * f.at(a, b);
        }
    return acc * (g.dt * g.dx());
}

namespace {

KernelOperator build_from_eval(const GridSpec& g, const NodeBox& box,
                               const std::function<cplx(const double*, const double*)>& k) {
    if (g.n_components != 1)
        throw std::invalid_argument("star kernels are built on scalar grids");
    return KernelOperator::dense_sampled(g, box, [&](int pi, int pj, int qi, int qj) {
        double x[2] = {g.t(pi), g.x(pj)};
        double y[2] = {g.t(qi), g.x(qj)};
        Mat m = mat_zero();
        m[0] = k(x, y);
        return m;
    });
}

} // namespace

KernelOperator build_moyal_eps(const GridSpec& g, const StarProductSpec& spec, double eps,
                               const NodeBox& box) {
    return build_from_eval(g, box, [&](const double* x, const double* y) {
        StarKernelValue v = moyal_eps_kernel(spec, eps, x, y);
        if (!v.converged)
            throw std::runtime_error("build_moyal_eps: p-quadrature did not converge");
        return v.value;
    });
}

KernelOperator build_moyal_limit(const GridSpec& g, const StarProductSpec& spec,
                                 const NodeBox& box) {
    return build_from_eval(
        g, box, [&](const double* x, const double* y) { return moyal_limit_kernel(spec, x, y); });
}

NodeBox local_nc_box(const GridSpec& g, const StarProductSpec& spec, double clamp) {
    double h = spec.k_half * clamp;
    auto up = [](double r) { return static_cast<int>(std::ceil(r - 1e-12)); };
    auto down = [](double r) { return static_cast<int>(std::floor(r + 1e-12)); };
    return NodeBox{up((spec.k_center0 - h - g.t_min) / g.dt),
                   down((spec.k_center0 + h - g.t_min) / g.dt),
                   up((spec.k_center1 - h + g.x_half_width) / g.dt),
                   down((spec.k_center1 + h + g.x_half_width) / g.dt)};
}

KernelOperator build_local_nc(const GridSpec& g, const StarProductSpec& spec, double eps,
                              double interior_clamp) {
    NodeBox box = local_nc_box(g, spec, interior_clamp);
    return build_from_eval(g, box, [&](const double* x, const double* y) {
        if (eps > 0.0) {
            StarKernelValue v = local_nc_eps_kernel(spec, eps, x, y);
            if (!v.converged)
                throw std::runtime_error("build_local_nc: p-quadrature did not converge");
            return v.value;
        }
        return local_nc_limit_kernel(spec, x, y);
    });
}

} // namespace nlhyp
