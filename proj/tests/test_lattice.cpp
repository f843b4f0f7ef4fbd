#include <doctest.h>

#include <fstream>
#include <random>

#include "nlhyp/bumps.hpp"
#include "nlhyp/grid.hpp"

using namespace nlhyp;

namespace {
GridSpec small_grid(int n_components = 1) {
    return GridSpec(-2.0, 2.0, 6.0, 0.125, n_components, -1.0, 1.0);
}
} // namespace

TEST_CASE("grid construction validates its invariants") {
    GridSpec g = small_grid();
    CHECK(g.nt == 33);
    CHECK(g.nx == 97);
    CHECK(g.dt == g.dx());
    CHECK(g.t_index(-1.0) == 8);
    CHECK(g.x_index(0.0) == 48);
    CHECK(g.safety_margin(2.0) == doctest::Approx(0.0));
    CHECK_THROWS(GridSpec(-2.0, 2.0, 6.0, 0.13, 1, -1.0, 1.0));   // off-grid extent
    CHECK_THROWS(GridSpec(-2.0, 2.0, 6.0, 0.125, 1, -1.03, 1.0)); // tau off-grid
    CHECK_THROWS(GridSpec(0.0, 0.25, 6.0, 0.125, 1, 0.0, 0.125)); // too few nodes
}

TEST_CASE("inner product: constants, impulses, hermiticity") {
    GridSpec g = small_grid();
    Region slab = Region::time_slab(g, g.tau_minus_index() + 1, g.tau_plus_index() - 1);

    Field one(g);
    for (auto& z : one.data()) z = cplx(1.0);
    // constant 1 over the slab integrates to its area
    double area = static_cast<double>(slab.count()) * g.dt * g.dx();
    CHECK(inner_product(one, one, slab).real() == doctest::Approx(area));

    Field imp(g);
    imp.at(10, 20) = cplx(2.0, -1.0);
    Field other = make_bump_field(g, NodeBox{5, 25, 10, 80}, 3);
    cplx expected = std::conj(cplx(2.0, -1.0)) * other.at(10, 20) * g.dt * g.dx();
    CHECK(std::abs(inner_product(imp, other) - expected) < 1e-15);

    Field a = make_bump_field(g, NodeBox{4, 28, 8, 88}, 11);
    Field b = make_bump_field(g, NodeBox{6, 30, 12, 70}, 12);
    CHECK(std::abs(inner_product(a, b) - std::conj(inner_product(b, a))) < 1e-15);
    CHECK(inner_product(a, a).real() > 0.0);
    CHECK(std::abs(inner_product(a, a).imag()) < 1e-18);
}

TEST_CASE("causal cone of a point is the light cone") {
    GridSpec g = small_grid();
    Region pt(g);
    pt.add(8, 48);
    Region cone = causal_cone(pt, +1);
    for (int i = 0; i < g.nt; ++i)
        for (int j = 0; j < g.nx; ++j) {
            bool inside = i >= 8 && std::abs(j - 48) <= i - 8;
            CHECK(cone.contains(i, j) == inside);
        }
    // J^- of the top time line covers the whole grid
    Region top = Region::time_slab(g, g.nt - 1, g.nt - 1);
    CHECK(causal_cone(top, -1).count() == g.nodes());
}

TEST_CASE("cone algebra: union, monotone, idempotent") {
    GridSpec g = small_grid();
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<int> it(2, g.nt - 6), jt(10, g.nx - 11);
    for (int trial = 0; trial < 5; ++trial) {
        int i1 = it(rng), j1 = jt(rng), i2 = it(rng), j2 = jt(rng);
        Region b1 = Region::box(g, i1, i1 + 3, j1, j1 + 4);
        Region b2 = Region::box(g, i2, i2 + 2, j2, j2 + 6);
        for (int dir : {+1, -1}) {
            Region lhs = causal_cone(b1.united(b2), dir);
            Region rhs = causal_cone(b1, dir).united(causal_cone(b2, dir));
            CHECK(lhs.subset_of(rhs));
            CHECK(rhs.subset_of(lhs));
            CHECK(causal_cone(b1, dir).subset_of(causal_cone(b1.united(b2), dir)));
            Region c = causal_cone(b1, dir);
            Region cc = causal_cone(c, dir);
            CHECK(cc.subset_of(c));
            CHECK(c.subset_of(cc));
        }
    }
}

TEST_CASE("empirical support thresholds") {
    GridSpec g = small_grid();
    Field zero(g);
    CHECK(empirical_support(zero, kSupportEta).empty());

    Field imp(g);
    imp.at(7, 33) = cplx(0.0, 3.0);
    Region s = empirical_support(imp, 0.5);
    CHECK(s.count() == 1);
    CHECK(s.contains(7, 33));

    // Gaussian bump: support at eta=1e-10 sits inside the analytic level set
    Field bump(g);
    double ci = 16, cj = 48, s2 = 9.0;
    for (int i = 0; i < g.nt; ++i)
        for (int j = 0; j < g.nx; ++j)
            bump.at(i, j) = std::exp(-0.5 * ((i - ci) * (i - ci) + (j - cj) * (j - cj)) / s2);
    Region sup = empirical_support(bump, 1e-10);
    double r2max = -2.0 * s2 * std::log(1e-10);
    for (int i = 0; i < g.nt; ++i)
        for (int j = 0; j < g.nx; ++j)
            if (sup.contains(i, j))
                CHECK((i - ci) * (i - ci) + (j - cj) * (j - cj) <= r2max * (1.0 + 1e-12));
    // nesting in eta
    CHECK(empirical_support(bump, 1e-6).subset_of(empirical_support(bump, 1e-8)));
}

TEST_CASE("margin check rejects supports whose cones reach the boundary") {
    GridSpec g = small_grid();
    Region center = Region::box(g, 14, 18, 40, 56);
    CHECK(margin_ok(center));
    Region edge = Region::box(g, 2, 3, 2, 4);
    CHECK_FALSE(margin_ok(edge));
}

TEST_CASE("csv dumps carry the documented headers") {
    GridSpec g(-1.0, 1.0, 2.0, 0.25, 1, -0.5, 0.5);
    Field f(g);
    f.at(4, 8) = cplx(1.5, -2.5);
    dump_field_csv(f, "/tmp/nlhyp_field.csv");
    std::ifstream in("/tmp/nlhyp_field.csv");
    std::string header;
    std::getline(in, header);
    CHECK(header == "t,x,component,re,im");

    Region r(g);
    r.add(2, 3);
    dump_region_csv(r, "/tmp/nlhyp_region.csv");
    std::ifstream rin("/tmp/nlhyp_region.csv");
    std::getline(rin, header);
    CHECK(header == "t,x");
    std::string row;
    std::getline(rin, row);
    CHECK(row == "-0.5,-1.25");
}
