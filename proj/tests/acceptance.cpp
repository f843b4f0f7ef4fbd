// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Grids stay at desk scale (matrix-free <= 257x513 nodes, dense
// oracles <= 33x65 slice nodes).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <vector>

#include "nlhyp/dense.hpp"
#include "nlhyp/experiments.hpp"
#include "nlhyp/scattering.hpp"

using namespace nlhyp;

namespace {

int g_failures = 0;

class Criterion {
public:
    Criterion(int number, const char* name, double budget_seconds)
        : number_(number), name_(name), budget_(budget_seconds),
          start_(std::chrono::steady_clock::now()) {}

    void finish(bool pass, const std::string& detail) {
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
                          .count();
        bool in_budget = secs < budget_;
        bool ok = pass && in_budget;
        std::printf("%s  %2d %-24s %s [%.2f s / %.0f s]\n", ok ? "PASS" : "FAIL", number_,
                    name_, detail.c_str(), secs, budget_);
        if (!ok) ++g_failures;
    }

private:
    int number_;
    const char* name_;
    double budget_;
    std::chrono::steady_clock::time_point start_;
};

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), pattern, a, b, c);
    return buf;
}

GridSpec medium_grid(int n = 1) { return GridSpec(-4.0, 4.0, 10.0, 0.125, n, -2.25, 2.25); }
GridSpec dense_grid() { return GridSpec(-3.0, 3.0, 7.5, 0.25, 1, -1.75, 1.75); }

NodeBox center_kernel_box(const GridSpec& g, int half_rows = 2, int half_cols = 10) {
    int mid = (g.tau_minus_index() + g.tau_plus_index()) / 2;
    return NodeBox{mid - half_rows, mid + half_rows, g.nx / 2 - half_cols,
                   g.nx / 2 + half_cols};
}

PerturbedSystem make_system(const HyperbolicOperator& op, double frac, unsigned seed,
                            bool symmetric = true) {
    auto w = make_bump_kernel(op.grid(),
                              BumpKernelParams{center_kernel_box(op.grid()), 3, seed,
                                               symmetric, 1.0});
    PerturbedSystem probe(op, w, cplx(0.0));
    return probe.with_lambda(cplx(frac * probe.lambda0(), 0.0));
}

void criterion_green_exactness() {
    Criterion c(1, "green-exactness", 5.0);
    std::vector<HyperbolicOperator> ops;
    ops.push_back(HyperbolicOperator::wave(medium_grid(), PotentialSpec::free()));
    ops.push_back(
        HyperbolicOperator::wave(medium_grid(), PotentialSpec::gaussian(1.2, 0.0, 0.3, 0.9)));
    ops.push_back(HyperbolicOperator::dirac(medium_grid(2), PotentialSpec::mass_term(0.6)));
    double worst = 0.0;
    int seed = 1000;
    int counts[3] = {17, 17, 16};
    for (int k = 0; k < 3; ++k) {
        const auto& op = ops[k];
        const GridSpec& g = op.grid();
        int mid = g.nt / 2, cj = g.nx / 2;
        for (int r = 0; r < counts[k]; ++r) {
            Field f = make_bump_field(g, NodeBox{mid - 6, mid + 6, cj - 9, cj + 9}, ++seed);
            double nf = l2_norm(f);
            for (Direction dir : {Direction::Retarded, Direction::Advanced}) {
                Field u = green_apply(op, dir, f);
                worst = std::max(worst, l2_norm(op.apply(u) - f, op.interior()) / nf);
                worst =
                    std::max(worst, l2_norm(green_apply(op, dir, op.apply(f)) - f) / nf);
            }
        }
    }
    c.finish(worst < 1e-12, fmt("worst residual %.2e (thr 1e-12)", worst));
}

void criterion_causality() {
    Criterion c(2, "causality", 10.0);
    auto op = HyperbolicOperator::wave(medium_grid(), PotentialSpec::mass_term(0.5));
    PerturbedSystem sys = make_system(op, 0.5, 21);
    const GridSpec& g = op.grid();
    Region kreg = sys.kernel().support_region();
    int mid = (g.tau_minus_index() + g.tau_plus_index()) / 2, cj = g.nx / 2;
    double worst = 0.0;
    for (int r = 0; r < 20; ++r) {
        Field f = make_bump_field(g, NodeBox{mid - 7 + (r % 5), mid + 3 + (r % 5),
                                             cj - 12 + (r % 7), cj + 6 + (r % 7)},
                                  2000 + r);
        Direction dir = r % 2 ? Direction::Advanced : Direction::Retarded;
        int s = direction_sign(dir);
        Region supp = empirical_support(f, 0.0);
        double peak_scale = 0.0;
        for (int i = 0; i < g.nt; ++i)
            for (int j = 0; j < g.nx; ++j) peak_scale = std::max(peak_scale, f.node_abs(i, j));

        Field u0 = op.stencil().invert(s, f);
        Region cone_f = causal_cone(supp, s);
        Field ul = sys.glue_global(dir, f);
        Region cone_fk = cone_f.united(causal_cone(kreg, s));
        double peak_u0 = 0.0, leak0 = 0.0, peak_ul = 0.0, leakl = 0.0;
        for (int i = 0; i < g.nt; ++i)
            for (int j = 0; j < g.nx; ++j) {
                double a0 = u0.node_abs(i, j), al = ul.node_abs(i, j);
                peak_u0 = std::max(peak_u0, a0);
                peak_ul = std::max(peak_ul, al);
                if (!cone_f.contains(i, j)) leak0 = std::max(leak0, a0);
                if (!cone_fk.contains(i, j)) leakl = std::max(leakl, al);
            }
        worst = std::max(worst, leak0 / peak_u0);
        worst = std::max(worst, leakl / peak_ul);
    }
    c.finish(worst <= 1e-10, fmt("worst relative leak %.2e (thr 1e-10, eta)", worst));
}

void criterion_neumann_dense() {
    Criterion c(3, "neumann-vs-dense", 30.0);
    GridSpec g = dense_grid();
    auto op = HyperbolicOperator::wave(g, PotentialSpec::gaussian(0.7, 0.0, 0.2, 1.0));
    Region win = Region::time_slab(g, g.tau_minus_index() + 1, g.tau_plus_index() - 1);
    NodeList wl(win);
    NodeBox kb{g.tau_minus_index() + 2, g.tau_plus_index() - 2, g.nx / 2 - 6, g.nx / 2 + 6};
    double worst_gap = 0.0, worst_ratio_off = 0.0, worst_bound_excess = 0.0;
    for (int r = 0; r < 10; ++r) {
        auto w = make_bump_kernel(g, BumpKernelParams{kb, 3, 3000u + r, (r % 2) == 0, 1.0});
        PerturbedSystem probe(op, w, cplx(0.0));
        cplx lam(0.5 * probe.lambda0(), 0.0);
        PerturbedSystem sys = probe.with_lambda(lam);
        Direction dir = r % 2 ? Direction::Advanced : Direction::Retarded;
        double norm_rw = dir == Direction::Retarded ? sys.norms().r_plus_w.value
                                                    : sys.norms().r_minus_w.value;
        Field f = make_bump_field(g, NodeBox{g.tau_minus_index() + 1, g.tau_plus_index() - 1,
                                             g.nx / 2 - 14, g.nx / 2 + 14},
                                  4000 + r);
        std::vector<double> terms;
        Field series = sys.neumann_apply(NeumannVariant::Left, dir, f, &terms);
        auto amap = [&](const Field& x) {
            return sys.green_restricted_here(dir, w.apply(x)) * lam;
        };
        Eigen::MatrixXcd m = assemble_dense(amap, wl, wl);
        Eigen::MatrixXcd sysm = Eigen::MatrixXcd::Identity(m.rows(), m.cols()) + m;
        Field direct = wl.to_field(sysm.partialPivLu().solve(wl.to_vector(f)));
        worst_gap = std::max(worst_gap, l2_norm(series - direct) / l2_norm(direct));

        // every step ratio obeys the operator-norm bound ...
        double bound = std::abs(lam) * norm_rw;
        for (std::size_t k = 1; k + 1 < terms.size(); ++k)
            if (terms[k - 1] > 0.0)
                worst_bound_excess =
                    std::max(worst_bound_excess, terms[k] / terms[k - 1] / bound - 1.0);
        // ... and the norm-maximizing start attains it to within 10%
        Field v = random_field_on(win, 5000 + r);
        v *= cplx(1.0 / l2_norm(v));
        KernelOperator wadj = w.adjoint();
        for (int it = 0; it < 40; ++it) {
            Field av = sys.green_restricted_here(dir, w.apply(v));
            Field bv = wadj.apply(green_restricted_adjoint(op, flip(dir), av, sys.window()));
            v = bv * cplx(1.0 / l2_norm(bv));
        }
        double attained =
            std::abs(lam) * l2_norm(sys.green_restricted_here(dir, w.apply(v))) / l2_norm(v);
        worst_ratio_off = std::max(worst_ratio_off, std::abs(attained / bound - 1.0));
    }
    bool pass = worst_gap < 1e-9 && worst_ratio_off < 0.1 && worst_bound_excess < 1e-6;
    c.finish(pass, fmt("solve gap %.2e (thr 1e-9), ratio off %.2e (thr 0.1)", worst_gap,
                       worst_ratio_off));
}

void criterion_factorization() {
    Criterion c(4, "left-right-factorization", 10.0);
    auto op = HyperbolicOperator::wave(medium_grid(), PotentialSpec::mass_term(0.4));
    PerturbedSystem sys = make_system(op, 0.5, 31);
    const GridSpec& g = op.grid();
    int mid = (g.tau_minus_index() + g.tau_plus_index()) / 2, cj = g.nx / 2;
    double worst = 0.0;
    for (int r = 0; r < 10; ++r) {
        Field f = make_bump_field(g, NodeBox{mid - 6, mid + 6, cj - 10, cj + 10}, 6000 + r);
        for (Direction dir : {Direction::Retarded, Direction::Advanced}) {
            double gap = 0.0;
            sys.perturbed_green_slice(dir, f, &gap);
            worst = std::max(worst, gap);
        }
    }
    c.finish(worst < 1e-9, fmt("worst gap %.2e (thr 1e-9)", worst));
}

void criterion_unperturbed_agreement() {
    Criterion c(5, "unperturbed-agreement", 5.0);
    auto op = HyperbolicOperator::wave(medium_grid(), PotentialSpec::free());
    PerturbedSystem sys = make_system(op, 0.5, 41);
    const GridSpec& g = op.grid();
    const NodeBox& k = sys.kernel().box();
    int cj = g.nx / 2;
    double worst = 0.0;
    // above K (retarded), below K (advanced), and spacelike beside K (both)
    struct Case {
        NodeBox box;
        Direction dir;
    };
    std::vector<Case> cases = {
        {NodeBox{k.i_hi + 3, k.i_hi + 9, cj - 10, cj + 10}, Direction::Retarded},
        {NodeBox{k.i_lo - 9, k.i_lo - 3, cj - 10, cj + 10}, Direction::Advanced},
        {NodeBox{k.i_lo - 2, k.i_hi + 2, cj + 26, cj + 38}, Direction::Retarded},
        {NodeBox{k.i_lo - 2, k.i_hi + 2, cj + 26, cj + 38}, Direction::Advanced},
    };
    int seed = 7000;
    for (const Case& cs : cases) {
        Field f = make_bump_field(g, cs.box, ++seed);
        Region cone = causal_cone(empirical_support(f, 0.0), direction_sign(cs.dir));
        if (!cone.intersected(sys.kernel().support_region()).empty()) {
            c.finish(false, "test geometry error: cone meets K");
            return;
        }
        Field ul = sys.glue_global(cs.dir, f);
        Field u0 = op.stencil().invert(direction_sign(cs.dir), f);
        worst = std::max(worst, l2_norm(ul - u0) / l2_norm(f));
    }
    c.finish(worst < 1e-12, fmt("worst gap %.2e (thr 1e-12)", worst));
}

void criterion_adjoint_symmetry() {
    Criterion c(6, "adjoint-symmetry", 5.0);
    auto op = HyperbolicOperator::wave(medium_grid(), PotentialSpec::mass_term(0.7));
    PerturbedSystem sys = make_system(op, 0.5, 51, true);
    const GridSpec& g = op.grid();
    int cj = g.nx / 2;
    double worst = 0.0;
    for (int r = 0; r < 5; ++r) {
        Field f = make_bump_field(g, NodeBox{10, 20, cj - 16, cj + 4}, 8000 + r);
        Field h = make_bump_field(g, NodeBox{g.nt - 21, g.nt - 11, cj - 4, cj + 16}, 8100 + r);
        double scale = l2_norm(f) * l2_norm(h);
        for (Direction dir : {Direction::Retarded, Direction::Advanced}) {
            cplx lhs = inner_product(h, sys.glue_global(dir, f));
            cplx rhs = inner_product(sys.glue_global(flip(dir), h), f);
            worst = std::max(worst, std::abs(lhs - rhs) / scale);
        }
    }
    c.finish(worst < 1e-10, fmt("worst asymmetry %.2e (thr 1e-10)", worst));
}

void criterion_scattering_cross() {
    Criterion c(7, "scattering-cross-oracle", 60.0);
    auto op = HyperbolicOperator::wave(medium_grid(), PotentialSpec::mass_term(0.4));
    PerturbedSystem half = make_system(op, 0.5, 61);
    double worst = 0.0;
    for (double frac : {0.25, 0.5}) {
        PerturbedSystem sys = half.with_lambda(cplx(frac * half.lambda0(), 0.0));
        Scattering sc(sys);
        const GridSpec& g = op.grid();
        int cj = g.nx / 2;
        for (int r = 0; r < 10; ++r) {
            Field gen = make_bump_field(g, NodeBox{sc.past_lo(), sc.past_hi(), cj - 8, cj + 8},
                                        9000 + r);
            Field f0 = propagator_apply(op, gen);
            Field s1 = sc.scattering_formula(f0);
            Field s2 = sc.scattering_evolution(f0);
            worst = std::max(worst, l2_norm(s1 - s2) / l2_norm(f0));
        }
    }
    c.finish(worst < 1e-8, fmt("worst cross gap %.2e (thr 1e-8)", worst));
}

void criterion_derivative_law() {
    Criterion c(8, "derivative-law", 30.0);
    auto op = HyperbolicOperator::wave(medium_grid(), PotentialSpec::free());
    PerturbedSystem sys = make_system(op, 0.25, 71);
    Scattering sc(sys);
    const GridSpec& g = op.grid();
    int cj = g.nx / 2;
    double lo = 10.0, hi = 0.0;
    for (int r = 0; r < 3; ++r) {
        Field gen = make_bump_field(g, NodeBox{sc.past_lo(), sc.past_hi(), cj - 8, cj + 8},
                                    9500 + r);
        Field f0 = propagator_apply(op, gen);
        auto rep = sc.scattering_derivative(f0);
        double r1 = rep.errors[0] / rep.errors[1];
        double r2 = rep.errors[1] / rep.errors[2];
        lo = std::min(lo, std::min(r1, r2));
        hi = std::max(hi, std::max(r1, r2));
    }
    bool pass = lo > 1.7 && hi < 2.3;
    c.finish(pass, fmt("halving ratios in [%.3f, %.3f] (thr [1.7, 2.3])", lo, hi));
}

void criterion_form_preservation() {
    Criterion c(9, "form-preservation", 60.0);
    // rho_0 preservation by S and sigma symplectomorphism (wave)
    auto op = HyperbolicOperator::wave(medium_grid(), PotentialSpec::mass_term(0.5));
    PerturbedSystem sys = make_system(op, 0.5, 81);
    Scattering sc(sys);
    const GridSpec& g = op.grid();
    int cj = g.nx / 2;
    double worst_rho = 0.0, worst_sigma = 0.0, worst_delta = 0.0;

    std::vector<SolutionRep> frees, outs;
    for (int r = 0; r < 21; ++r) {
        Field gen = make_bump_field(g, NodeBox{sc.past_lo(), sc.past_hi(),
                                               cj - 10 + (r % 5), cj + 6 + (r % 5)},
                                    10000 + r, false);
        SolutionRep f = sc.free_from_generator(gen);
        SolutionRep out;
        sc.scattering_evolution(f.field, &out);
        frees.push_back(f);
        outs.push_back(out);
    }
    for (int r = 0; r < 20; ++r) {
        const SolutionRep &a = frees[r], &b = frees[r + 1];
        double scale = l2_norm(a.generator) * l2_norm(b.field);
        cplx before = inner_product(a.generator, b.field);
        cplx after = inner_product(outs[r].generator, outs[r + 1].field);
        worst_rho = std::max(worst_rho, std::abs(before - after) / scale);
    }

    std::vector<SolutionRep> pert, moller_out;
    for (int r = 0; r < 7; ++r) {
        Field gen = make_bump_field(g, NodeBox{sc.past_lo(), sc.past_hi(),
                                               cj - 9 + (r % 4), cj + 7 + (r % 4)},
                                    11000 + r, false);
        SolutionRep a{sys.perturbed_propagator(gen), gen, sc.past_lo(), sc.past_hi()};
        pert.push_back(a);
        moller_out.push_back(sc.moller(Direction::Advanced, a));
    }
    int pairs = 0;
    for (int i = 0; i < 7 && pairs < 20; ++i)
        for (int j = i + 1; j < 7 && pairs < 20; ++j, ++pairs) {
            double sl = sc.form_sigma(pert[i], pert[j]);
            double s0 = sc.form_sigma(moller_out[i], moller_out[j]);
            double scale = l2_norm(pert[i].generator) * l2_norm(pert[j].field);
            worst_sigma = std::max(worst_sigma, std::abs(s0 - sl) / scale);
        }

    // delta_0 unitarity of S for the Dirac system
    auto dop = HyperbolicOperator::dirac(medium_grid(2), PotentialSpec::mass_term(0.35));
    PerturbedSystem dsys = make_system(dop, 0.5, 91);
    Scattering dsc(dsys);
    std::vector<SolutionRep> dfree, dout;
    for (int r = 0; r < 21; ++r) {
        Field gen = make_bump_field(dop.grid(),
                                    NodeBox{dsc.past_lo(), dsc.past_hi(),
                                            cj - 10 + (r % 5), cj + 6 + (r % 5)},
                                    12000 + r);
        SolutionRep f = dsc.free_from_generator(gen);
        SolutionRep out;
        dsc.scattering_evolution(f.field, &out);
        dfree.push_back(f);
        dout.push_back(out);
    }
    for (int r = 0; r < 20; ++r) {
        cplx before = dsc.form_delta(dfree[r], dfree[r + 1]);
        cplx after = dsc.form_delta(dout[r], dout[r + 1]);
        double scale = l2_norm(dfree[r].generator) * l2_norm(dfree[r + 1].field);
        worst_delta = std::max(worst_delta, std::abs(before - after) / scale);
    }

    bool pass = worst_rho < 1e-8 && worst_sigma < 1e-8 && worst_delta < 1e-8;
    c.finish(pass, fmt("rho %.1e sigma %.1e delta %.1e (thr 1e-8)", worst_rho, worst_sigma,
                       worst_delta));
}

void criterion_counterexamples() {
    Criterion c(10, "counterexample-demos", 30.0);
    auto op = HyperbolicOperator::wave(medium_grid(), PotentialSpec::free());
    DemoResult compact = compact_solution_demo(op, 13);
    DemoResult nonunique = nonunique_cauchy_demo(op, 14);
    GridSpec wide(-4.0, 4.0, 13.0, 0.125, 1, -2.25, 2.25);
    auto wop = HyperbolicOperator::wave(wide, PotentialSpec::free());
    DemoResult nosolution = nosolution_cauchy_demo(wop, 15);
    bool pass = compact.pass && nonunique.pass && nosolution.pass;
    c.finish(pass, fmt("compact %.0f nonunique %.0f nosolution %.0f",
                       compact.pass ? 1.0 : 0.0, nonunique.pass ? 1.0 : 0.0,
                       nosolution.pass ? 1.0 : 0.0));
}

void criterion_star_kernels() {
    Criterion c(11, "star-kernels", 60.0);
    StarProductSpec moyal;
    moyal.variant = StarProductSpec::Variant::Moyal;
    moyal.theta0 = 0.5;
    moyal.symbol.sigma = 0.35;
    moyal.symbol.center1 = 0.2;
    double worst_gap = 0.0;
    const double pts[5][4] = {{0.2, -0.3, 0.65, 0.05},
                              {0.0, 0.0, 0.4, 0.3},
                              {-0.3, 0.2, 0.1, -0.4},
                              {0.5, 0.5, -0.2, 0.1},
                              {-0.1, -0.6, 0.3, 0.35}};
    bool conv = true;
    for (const auto& p : pts) {
        double x[2] = {p[0], p[1]}, y[2] = {p[2], p[3]};
        cplx lim = moyal_limit_kernel(moyal, x, y);
        StarKernelValue v = moyal_eps_kernel(moyal, 0.05, x, y);
        conv = conv && v.converged;
        worst_gap = std::max(worst_gap, std::abs(v.value - lim) / std::abs(lim));
    }

    StarProductSpec loc;
    loc.variant = StarProductSpec::Variant::LocalNC;
    loc.theta0 = 0.8;
    loc.symbol.sigma = 0.1;
    loc.symbol.window_half = 0.3;
    loc.chi_inner = 1.2;
    loc.chi_outer = 2.4;
    // vanishes identically outside K x K
    double outside = 0.0;
    const double outs[3][4] = {{1.2, 0.0, 0.2, 0.1}, {0.2, 0.1, 0.0, -1.4}, {1.1, 1.3, -1.2, 0.4}};
    for (const auto& p : outs) {
        double x[2] = {p[0], p[1]}, y[2] = {p[2], p[3]};
        outside = std::max(outside, std::abs(local_nc_limit_kernel(loc, x, y)));
        outside = std::max(outside, std::abs(local_nc_eps_kernel(loc, 0.1, x, y).value));
    }
    // k(x,x)/gamma'(x) constant across interior samples
    double ratio_dev = 0.0;
    cplx ratio0(0.0);
    int idx = 0;
    for (double a : {0.0, 0.3, 0.55, 0.75, 0.9}) {
        double x[2] = {a, -0.2 + 0.3 * a};
        cplx r = local_nc_limit_kernel(loc, x, x) /
                 (gamma_diffeo_prime(x[0]) * gamma_diffeo_prime(x[1]));
        if (idx++ == 0)
            ratio0 = r;
        else
            ratio_dev = std::max(ratio_dev, std::abs(r - ratio0) / std::abs(ratio0));
    }
    bool pass = worst_gap < 1e-3 && conv && outside == 0.0 && ratio_dev < 1e-6;
    c.finish(pass, fmt("moyal gap %.2e (thr 1e-3), diag dev %.2e (thr 1e-6)", worst_gap,
                       ratio_dev));
}

void criterion_dirac_charge() {
    Criterion c(12, "dirac-conserved-charge", 10.0);
    auto op = HyperbolicOperator::dirac(medium_grid(2), PotentialSpec::mass_term(0.3));
    PerturbedSystem sys = make_system(op, 0.5, 101);
    Scattering sc(sys);
    const GridSpec& g = op.grid();
    int cj = g.nx / 2;
    std::vector<SolutionRep> pool;
    for (int r = 0; r < 7; ++r) {
        Field gen = make_bump_field(g, NodeBox{sc.past_lo(), sc.past_hi(),
                                               cj - 9 + (r % 4), cj + 7 + (r % 4)},
                                    13000 + r);
        pool.push_back(SolutionRep{sys.perturbed_propagator(gen), gen, sc.past_lo(),
                                   sc.past_hi()});
    }
    int t1 = sc.past_hi() + 2;
    int t2 = g.tau_plus_index() + 2;
    double worst = 0.0;
    int pairs = 0;
    for (int i = 0; i < 7 && pairs < 20; ++i)
        for (int j = i; j < 7 && pairs < 20; ++j, ++pairs) {
            cplx q1 = sc.conserved_charge(pool[i], pool[j], t1);
            cplx q2 = sc.conserved_charge(pool[i], pool[j], t2);
            double scale = std::max(std::abs(q1), std::abs(q2));
            worst = std::max(worst, std::abs(q1 - q2) / scale);
        }
    c.finish(worst < 1e-8, fmt("worst slice disagreement %.2e (thr 1e-8)", worst));
}

} // namespace

int main() {
    std::printf("acceptance suite (desk scale: matrix-free 65x161, dense 13x61 slice)\n");
    criterion_green_exactness();
    criterion_causality();
    criterion_neumann_dense();
    criterion_factorization();
    criterion_unperturbed_agreement();
    criterion_adjoint_symmetry();
    criterion_scattering_cross();
    criterion_derivative_law();
    criterion_form_preservation();
    criterion_counterexamples();
    criterion_star_kernels();
    criterion_dirac_charge();
    if (g_failures == 0) {
        std::printf("ALL 12 CRITERIA PASSED\n");
        return 0;
    }
    std::printf("%d CRITERIA FAILED\n", g_failures);
    return 1;
}
