#include <doctest.h>

#include <random>

#include "nlhyp/bumps.hpp"
#include "nlhyp/operators.hpp"

using namespace nlhyp;

namespace {
GridSpec wave_grid() { return GridSpec(-2.0, 2.0, 6.0, 0.125, 1, -1.0, 1.0); }
GridSpec dirac_grid() { return GridSpec(-2.0, 2.0, 6.0, 0.125, 2, -1.0, 1.0); }
} // namespace

TEST_CASE("free wave stencil is exact on quadratics") {
    GridSpec g = wave_grid();
    auto op = HyperbolicOperator::wave(g, PotentialSpec::free());
    Field f(g);
    for (int i = 0; i < g.nt; ++i)
        for (int j = 0; j < g.nx; ++j) f.at(i, j) = g.t(i) * g.t(i);
    Field df = op.apply(f);
    for (int i = 1; i < g.nt - 1; ++i)
        for (int j = 1; j < g.nx - 1; ++j)
            CHECK(std::abs(df.at(i, j) - cplx(2.0)) < 1e-11);
}

TEST_CASE("characteristic functions are annihilated at unit CFL") {
    GridSpec g = wave_grid();
    auto op = HyperbolicOperator::wave(g, PotentialSpec::free());
    // any lattice function of t - x solves the free discrete wave equation
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::vector<cplx> diag(g.nt + g.nx, cplx(0));
    for (auto& z : diag) z = cplx(unit(rng), unit(rng));
    Field f(g);
    for (int i = 0; i < g.nt; ++i)
        for (int j = 0; j < g.nx; ++j) f.at(i, j) = diag[i - j + g.nx];
    Field df = op.apply(f);
    // cancellation happens between terms of size 1/dt^2, so "exactly" means
    // down to rounding of those terms
    double tol = 1e-14 / (g.dt * g.dt);
    for (const auto& z : df.data()) CHECK(std::abs(z) < tol);
}

TEST_CASE("massive wave stencil matches its discrete Fourier symbol") {
    GridSpec g = wave_grid();
    double m = 0.7;
    auto op = HyperbolicOperator::wave(g, PotentialSpec::mass_term(m));
    double k = 2.0 * M_PI / (g.nx * g.dx()) * 7.0;
    double w = 2.0 * M_PI / (g.nt * g.dt) * 5.0;
    Field f(g);
    for (int i = 0; i < g.nt; ++i)
        for (int j = 0; j < g.nx; ++j)
            f.at(i, j) = std::exp(cplx(0.0, k * g.x(j) - w * g.t(i)));
    // independent oracle: symbol of the discrete stencil
    cplx symbol = cplx((2.0 * std::cos(w * g.dt) - 2.0) / (g.dt * g.dt) -
                           (2.0 * std::cos(k * g.dx()) - 2.0) / (g.dx() * g.dx()) + m * m,
                       0.0);
    Field df = op.apply(f);
    for (int i = 1; i < g.nt - 1; ++i)
        for (int j = 1; j < g.nx - 1; ++j)
            CHECK(std::abs(df.at(i, j) - symbol * f.at(i, j)) < 1e-10);
}

TEST_CASE("apply is linear") {
    GridSpec g = wave_grid();
    auto op = HyperbolicOperator::wave(g, PotentialSpec::gaussian(1.3, 0.0, 0.5, 0.8));
    Field f = make_bump_field(g, NodeBox{4, 28, 20, 76}, 21);
    Field h = make_bump_field(g, NodeBox{6, 26, 30, 66}, 22);
    cplx a(0.7, -0.3), b(-1.1, 0.2);
    Field lhs = op.apply(f * a + h * b);
    Field rhs = op.apply(f) * a + op.apply(h) * b;
    CHECK(l2_norm(lhs - rhs) < 1e-12 * (l2_norm(f) + l2_norm(h)));
}

TEST_CASE("adjoint identity <D*g,f> = <g,Df> on interior-supported fields") {
    GridSpec g = wave_grid();
    // drift coefficients exercise the shifted conjugate-transpose path
    auto u0 = [](double t, double x) {
        Mat m = mat_zero();
        m[0] = cplx(0.3 * std::sin(t + x), 0.1);
        return m;
    };
    auto u1 = [](double t, double x) {
        Mat m = mat_zero();
        m[0] = cplx(0.2 * std::cos(t - x), -0.05);
        return m;
    };
    auto v = [](double t, double x) {
        Mat m = mat_zero();
        m[0] = cplx(0.5 * std::exp(-t * t - x * x), 0.2);
        return m;
    };
    auto op = HyperbolicOperator::wave_general(GridSpec(-2.0, 2.0, 6.0, 0.125, 1, -1.0, 1.0),
                                               u0, u1, v);
    Field f = make_bump_field(op.grid(), NodeBox{3, 29, 10, 86}, 31);
    Field h = make_bump_field(op.grid(), NodeBox{2, 30, 6, 90}, 32);
    cplx lhs = inner_product(op.apply_adjoint(h), f);
    cplx rhs = inner_product(h, op.apply(f));
    CHECK(std::abs(lhs - rhs) < 1e-12 * l2_norm(f) * l2_norm(h));

    // symmetric case: U = 0, V real => D* = D
    auto sym = HyperbolicOperator::wave(wave_grid(), PotentialSpec::gaussian(0.9, 0.2, -0.4, 1.0));
    Field df = sym.apply(f);
    Field dsf = sym.apply_adjoint(f);
    CHECK(l2_norm(df - dsf) == 0.0);
}

TEST_CASE("adjoint is an involution") {
    GridSpec g = wave_grid();
    auto v = [](double t, double x) {
        Mat m = mat_zero();
        m[0] = cplx(std::sin(t), std::cos(x));
        return m;
    };
    auto zero = [](double, double) { return mat_zero(); };
    auto op = HyperbolicOperator::wave_general(g, v, zero, v);
    ThreeLevelStencil twice = op.stencil().adjoint().adjoint();
    Field f = make_bump_field(g, NodeBox{3, 29, 10, 86}, 41);
    CHECK(l2_norm(twice.apply(f) - op.apply(f)) == 0.0);
}

TEST_CASE("dirac construction invariants and twisted adjoint") {
    GridSpec g = dirac_grid();
    auto op = HyperbolicOperator::dirac(g, PotentialSpec::mass_term(0.5));
    CHECK(op.cauchy_levels() == 1);
    CHECK(op.commutes_with_conjugation());

    // gamma0 V gamma0 = V* holds for real scalar V, so D* = gamma0 D gamma0
    Field f = make_bump_field(g, NodeBox{3, 29, 10, 86}, 51);
    Field lhs = op.apply_adjoint(f);
    Field rhs = op.gamma0_times(op.apply(op.gamma0_times(f)));
    CHECK(l2_norm(lhs - rhs) < 1e-13 * l2_norm(f));

    // conjugation commutes: C D f = D C f for real potential
    Field cd = conjugate_field(op.apply(f));
    Field dc = op.apply(conjugate_field(f));
    CHECK(l2_norm(cd - dc) == 0.0);
}

TEST_CASE("locality: supp(Df) within one stencil width of supp f") {
    GridSpec g = wave_grid();
    auto op = HyperbolicOperator::wave(g, PotentialSpec::mass_term(1.0));
    Field zero(g);
    CHECK(op.locality_check(zero));
    Field imp(g);
    imp.at(16, 48) = cplx(1.0);
    CHECK(op.locality_check(imp));
    Field bump = make_bump_field(g, NodeBox{10, 24, 30, 66}, 61);
    CHECK(op.locality_check(bump));

    auto dir = HyperbolicOperator::dirac(dirac_grid(), PotentialSpec::mass_term(0.3));
    Field bump2 = make_bump_field(dirac_grid(), NodeBox{10, 24, 30, 66}, 62);
    CHECK(dir.locality_check(bump2));
}
