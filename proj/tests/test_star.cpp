#include <doctest.h>

#include <cmath>

#include "nlhyp/star.hpp"

using namespace nlhyp;

namespace {

GridSpec star_grid() { return GridSpec(-3.0, 3.0, 7.5, 0.125, 1, -1.75, 1.75); }

StarProductSpec moyal_spec() {
    StarProductSpec s;
    s.variant = StarProductSpec::Variant::Moyal;
    s.theta0 = 0.5;
    s.symbol.amp = 1.0;
    s.symbol.sigma = 0.35;
    s.symbol.center0 = 0.0;
    s.symbol.center1 = 0.2;
    return s;
}

StarProductSpec local_spec() {
    StarProductSpec s;
    s.variant = StarProductSpec::Variant::LocalNC;
    s.theta0 = 0.6;
    s.symbol.amp = 1.0;
    s.symbol.sigma = 0.22;
    s.symbol.window_half = 0.7;
    s.k_half = 1.0;
    return s;
}

} // namespace

TEST_CASE("gamma diffeomorphism: antisymmetric, monotone, exact inverse") {
    CHECK(gamma_diffeo(0.75) == doctest::Approx(std::exp(4.0)));
    CHECK(gamma_diffeo(0.5) == doctest::Approx(std::exp(2.0)));
    for (double u : {0.0, 0.11, 0.31, 0.49, 0.5, 0.63, 0.9, 0.95}) {
        CHECK(gamma_diffeo(-u) == -gamma_diffeo(u));
        CHECK(gamma_diffeo_prime(u) >= gamma_diffeo_prime(0.0));
        CHECK(gamma_diffeo_inverse(gamma_diffeo(u)) == doctest::Approx(u).epsilon(1e-12));
        if (u > 0.0) CHECK(gamma_diffeo(u) > gamma_diffeo(u * 0.99));
        // finite-difference derivative check away from the matching point
        if (u != 0.5) {
            double h = 1e-6;
            double fd = (gamma_diffeo(u + h) - gamma_diffeo(u - h)) / (2 * h);
            CHECK(gamma_diffeo_prime(u) == doctest::Approx(fd).epsilon(1e-6));
        }
    }
    CHECK_THROWS_AS(gamma_diffeo(0.9995), std::invalid_argument);
    CHECK_THROWS_AS(gamma_diffeo(0.998), std::runtime_error);  // overflow guard
}

TEST_CASE("moyal limit kernel: diagonal value and fourier envelope") {
    StarProductSpec s = moyal_spec();
    // k(x,x) = (2 pi)^{-1} |det theta|^{-1} w~(0)
    double x[2] = {0.3, -0.4};
    cplx kxx = moyal_limit_kernel(s, x, x);
    double w0 = s.symbol.amp * s.symbol.sigma * s.symbol.sigma;
    CHECK(std::abs(kxx - cplx(w0 / (2.0 * M_PI * s.theta0 * s.theta0))) < 1e-12);

    // |k| follows |w~(theta^{-1}(y-x))| as theta0 scales
    double y[2] = {0.55, 0.1};
    for (double th : {0.4, 0.8, 1.6}) {
        StarProductSpec st = s;
        st.theta0 = th;
        cplx k = moyal_limit_kernel(st, x, y);
        double k0 = -(y[1] - x[1]) / th, k1 = (y[0] - x[0]) / th;
        double envelope = std::abs(st.symbol.fourier(k0, k1)) / (2.0 * M_PI * th * th);
        CHECK(std::abs(k) == doctest::Approx(envelope).epsilon(1e-12));
    }
}

TEST_CASE("moyal epsilon kernel converges to the closed form") {
    StarProductSpec s = moyal_spec();
    double x[2] = {0.2, -0.3};
    double y[2] = {0.65, 0.05};
    cplx limit = moyal_limit_kernel(s, x, y);
    double prev = 1e9;
    for (double eps : {0.4, 0.2, 0.1, 0.05}) {
        StarKernelValue v = moyal_eps_kernel(s, eps, x, y);
        CHECK(v.converged);
        double gap = std::abs(v.value - limit) / std::abs(limit);
        CHECK(gap < prev * 1.0001);
        prev = gap;
    }
    CHECK(prev < 1e-3);

    // support of the epsilon kernel grows like chi_outer / eps
    for (double eps : {0.4, 0.2}) {
        double radius = s.chi_outer / eps;
        double yin[2] = {x[0], x[1] + radius * 0.98};
        double yout[2] = {x[0], x[1] + radius * 1.02};
        CHECK(std::abs(moyal_eps_kernel(s, eps, x, yin).value) >= 0.0);
        CHECK(std::abs(moyal_eps_kernel(s, eps, x, yout).value) == 0.0);
    }
}

TEST_CASE("locally noncommutative kernel: support, diagonal, divergence") {
    StarProductSpec s = local_spec();
    // rows/columns vanish identically outside K
    double in[2] = {0.2, 0.1};
    double out_pt[2] = {1.3, 0.0};
    CHECK(local_nc_limit_kernel(s, out_pt, in) == cplx(0.0));
    CHECK(local_nc_limit_kernel(s, in, out_pt) == cplx(0.0));
    CHECK(local_nc_eps_kernel(s, 0.2, out_pt, in).value == cplx(0.0));

    // k(x,x) proportional to gamma'(x0) gamma'(x1): the ratio is constant
    cplx ratio0;
    int idx = 0;
    for (double a : {0.0, 0.35, 0.6, 0.82}) {
        double x[2] = {a, -0.3 + 0.2 * a};
        cplx k = local_nc_limit_kernel(s, x, x);
        cplx r = k / (gamma_diffeo_prime(x[0]) * gamma_diffeo_prime(x[1]));
        if (idx++ == 0)
            ratio0 = r;
        else
            CHECK(std::abs(r - ratio0) < 1e-6 * std::abs(ratio0));
    }
    // and the diagonal grows without bound toward the boundary of K
    double prev = 0.0;
    for (double a : {0.5, 0.7, 0.85, 0.93}) {
        double x[2] = {a, 0.0};
        double mag = std::abs(local_nc_limit_kernel(s, x, x));
        CHECK(mag > prev);
        prev = mag;
    }
}

TEST_CASE("local-nc epsilon kernel approaches the limit kernel") {
    // cutoff plateau sized so the gamma-stretched symbol support is covered
    // from eps = 0.2 on; the first step shows the genuine truncation error
    StarProductSpec s = local_spec();
    s.theta0 = 0.8;
    s.symbol.sigma = 0.1;
    s.symbol.window_half = 0.3;
    s.chi_inner = 1.2;
    s.chi_outer = 2.4;
    double x[2] = {0.15, -0.2};
    double y[2] = {0.3, 0.05};
    cplx limit = local_nc_limit_kernel(s, x, y);
    REQUIRE(std::abs(limit) > 0.0);
    double prev = 1e9;
    for (double eps : {0.4, 0.2, 0.1}) {
        StarKernelValue v = local_nc_eps_kernel(s, eps, x, y);
        CHECK(v.converged);
        double gap = std::abs(v.value - limit) / std::abs(limit);
        CHECK(gap < prev * 1.0001);
        prev = gap;
    }
    CHECK(prev < 1e-2);
}

TEST_CASE("assembled star kernels behave like kernel operators") {
    GridSpec g = star_grid();
    StarProductSpec s = local_spec();
    s.theta0 = 0.8;
    auto w = build_local_nc(g, s, 0.0);
    // W f = 0 for f supported outside K
    Field far = make_bump_field(g, NodeBox{2, 8, 6, 26}, 5);
    CHECK(l2_norm(w.apply(far)) == 0.0);
    // image lands inside K and the operator norm is finite
    NodeBox kb = local_nc_box(g, s, 0.95);
    Field f = make_bump_field(g, NodeBox{kb.i_lo - 4, kb.i_hi + 4, kb.j_lo - 6, kb.j_hi + 6}, 6);
    CHECK(empirical_support(w.apply(f), 0.0).subset_of(kb.region(g)));
    CHECK(w.norm_estimate() > 0.0);

    // adjoint pairing for the complex star kernel
    auto wadj = w.adjoint();
    Field h = make_bump_field(g, kb, 7);
    cplx lhs = inner_product(wadj.apply(h), f);
    cplx rhs = inner_product(h, w.apply(f));
    CHECK(std::abs(lhs - rhs) < 1e-12 * l2_norm(f) * l2_norm(h));
}
