#include "nlhyp/scattering.hpp"

#include <cmath>
#include <stdexcept>

namespace nlhyp {

Scattering::Scattering(const PerturbedSystem& sys, int strip_steps)
    : sys_(sys), strip_steps_(strip_steps) {
    const GridSpec& g = sys.op().grid();
    int itm = g.tau_minus_index(), itp = g.tau_plus_index();
    past_hi_ = itm - strip_steps_;
    past_lo_ = past_hi_ - strip_steps_;
    future_lo_ = itp + strip_steps_;
    future_hi_ = future_lo_ + strip_steps_;
    if (past_lo_ < 2 || future_hi_ > g.nt - 3)
        throw std::invalid_argument(
            "Scattering: grid too short for strips beyond the time slice");
}

SolutionRep Scattering::free_from_generator(const Field& g) const {
    SolutionRep rep;
    rep.field = propagator_apply(op(), g);
    rep.generator = g;
    Region s = empirical_support(g, 0.0);
    rep.strip_lo = s.empty() ? 0 : s.i_min();
    rep.strip_hi = s.empty() ? 0 : s.i_max();
    return rep;
}

SolutionRep Scattering::represent_free(const Field& f0, int lo, int hi) const {
    SolutionRep rep;
    rep.generator = slice_representation(op(), f0, lo, hi);
    rep.field = f0;
    rep.strip_lo = lo;
    rep.strip_hi = hi;
    return rep;
}

SolutionRep Scattering::perturbed_from_past(const Field& f0) const {
    SolutionRep in = represent_free(f0, past_lo_, past_hi_);
    SolutionRep rep;
    rep.generator = in.generator;
    rep.strip_lo = in.strip_lo;
    rep.strip_hi = in.strip_hi;
    rep.field = sys_.perturbed_propagator(in.generator);
    return rep;
}

SolutionRep Scattering::perturbed_from_future(const Field& f0) const {
    SolutionRep in = represent_free(f0, future_lo_, future_hi_);
    SolutionRep rep;
    rep.generator = in.generator;
    rep.strip_lo = in.strip_lo;
    rep.strip_hi = in.strip_hi;
    rep.field = sys_.perturbed_propagator(in.generator);
    return rep;
}

SolutionRep Scattering::moller(Direction dir, const SolutionRep& f_lambda) const {
    const GridSpec& g = op().grid();
    const NodeBox& k = sys_.kernel().box();
    if (dir == Direction::Retarded) {
        // far future: the solution is free above K, continue it freely
        if (f_lambda.strip_lo > k.i_hi + 1) {
            // generator already lives beyond the perturbation
            return free_from_generator(f_lambda.generator);
        }
        int seed = std::min(k.i_hi + 2, g.nt - 4);
        Field f_ext = continue_solution(op(), f_lambda.field, seed);
        return represent_free(f_ext, future_lo_, future_hi_);
    }
    if (f_lambda.strip_hi < k.i_lo - 1 && f_lambda.strip_hi > 0)
        return free_from_generator(f_lambda.generator);
    int seed = std::max(k.i_lo - 3, 2);
    Field f_ext = continue_solution(op(), f_lambda.field, seed);
    return represent_free(f_ext, past_lo_, past_hi_);
}

Field Scattering::scattering_formula(const Field& f0) const {
    // S_lambda = 1 + lambda R W N^+_{tau,lambda}, with f0 restricted to the slice
    Field n = sys_.neumann_apply(NeumannVariant::Left, Direction::Retarded, f0);
    Field psi = sys_.kernel().apply(n);
    return f0 + propagator_apply(op(), psi) * sys_.lambda();
}

Field Scattering::scattering_evolution(const Field& f0, SolutionRep* outgoing) const {
    SolutionRep f_lambda = perturbed_from_past(f0);
    SolutionRep out = moller(Direction::Retarded, f_lambda);
    if (outgoing) *outgoing = out;
    return out.field;
}

Field Scattering::scattering_evolution_inverse(const Field& f0) const {
    SolutionRep f_lambda = perturbed_from_future(f0);
    SolutionRep in = moller(Direction::Advanced, f_lambda);
    return in.field;
}

Scattering::DerivativeReport Scattering::scattering_derivative(const Field& f0) const {
    DerivativeReport rep;
    rep.rw_f0 = propagator_apply(op(), sys_.kernel().apply(f0));
    double l0 = sys_.lambda0();
    for (double frac : {0.25, 0.125, 0.0625}) {
        double l = frac * l0;
        PerturbedSystem at_l = sys_.with_lambda(cplx(l, 0.0));
        Scattering sc(at_l, strip_steps_);
        Field s = sc.scattering_formula(f0);
        Field quotient = (s - f0) * cplx(1.0 / l, 0.0);
        rep.lambdas.push_back(l);
        rep.errors.push_back(l2_norm(quotient - rep.rw_f0));
    }
    return rep;
}

cplx Scattering::form_rho(const SolutionRep& a, const SolutionRep& b,
                          double* welldef_gap) const {
    cplx value = inner_product(a.generator, b.field);
    if (welldef_gap) {
        // recompute with an alternative generator for a, re-represented on a
        // strip shifted toward K on the same side
        const NodeBox& k = sys_.kernel().box();
        int lo, hi;
        if (a.strip_hi < k.i_lo) {
            lo = a.strip_lo + 2;
            hi = a.strip_hi + 2;
            if (hi > k.i_lo - 2) throw std::runtime_error("form_rho: no room for an alternative strip");
        } else {
            lo = a.strip_lo - 2;
            hi = a.strip_hi - 2;
            if (lo < k.i_hi + 2) throw std::runtime_error("form_rho: no room for an alternative strip");
        }
        int seed = a.strip_hi < k.i_lo ? std::max(k.i_lo - 3, 2)
                                       : std::min(k.i_hi + 2, op().grid().nt - 4);
        Field f_ext = continue_solution(op(), a.field, seed);
        Field alt = slice_representation(op(), f_ext, lo, hi);
        cplx value2 = inner_product(alt, b.field);
        double scale = std::max(std::abs(value), std::abs(value2));
        *welldef_gap = scale > 0.0 ? std::abs(value - value2) / scale : 0.0;
    }
    return value;
}

double Scattering::form_sigma(const SolutionRep& a, const SolutionRep& b) const {
    for (const SolutionRep* r : {&a, &b}) {
        Field d = r->generator - conjugate_field(r->generator);
        if (l2_norm(d) > 1e-12 * std::max(1.0, l2_norm(r->generator)))
            throw std::invalid_argument("form_sigma: generators must be C-real");
    }
    if (std::abs(sys_.lambda().imag()) > 0.0)
        throw std::invalid_argument("form_sigma: real coupling required");
    cplx value = inner_product(a.generator, b.field);
    double scale = l2_norm(a.generator) * l2_norm(b.field);
    if (std::abs(value.imag()) > 1e-12 * std::max(scale, 1e-300))
        throw std::runtime_error("form_sigma: value has a nonreal part");
    return value.real();
}

cplx Scattering::form_delta(const SolutionRep& a, const SolutionRep& b) const {
    if (op().kind() != OperatorKind::Dirac)
        throw std::invalid_argument("form_delta: Dirac systems only");
    return cplx(0.0, 1.0) * inner_product(a.generator, op().gamma0_times(b.field));
}

cplx Scattering::conserved_charge(const SolutionRep& a, const SolutionRep& b,
                                  int slice_row) const {
    if (op().kind() != OperatorKind::Dirac)
        throw std::invalid_argument("conserved_charge: Dirac systems only");
    const GridSpec& g = op().grid();
    const NodeBox& k = sys_.kernel().box();
    if (slice_row < 1 || slice_row + 1 > g.nt - 2)
        throw std::invalid_argument("conserved_charge: slice outside the grid interior");
    if (!(k.i_lo > slice_row + 1 || k.i_hi < slice_row))
        throw std::invalid_argument("conserved_charge: slice intersects the kernel window");
    // staggered pairing (<psi(t+1),phi(t)> + <psi(t),phi(t+1)>)/2, exactly
    // conserved across the interaction for admissible slices
    cplx acc(0.0);
    for (int j = 0; j < g.nx; ++j)
        for (int c = 0; c < 2; ++c) {
            acc += std::conj(a.field.at(slice_row + 1, j, c)) * b.field.at(slice_row, j, c);
            acc += std::conj(a.field.at(slice_row, j, c)) * b.field.at(slice_row + 1, j, c);
        }
    return 0.5 * acc * g.dx();
}

bool Scattering::dirac_form_conditions() const {
    if (op().kind() != OperatorKind::Dirac) return false;
    const GridSpec& g = op().grid();
    Mat g0 = op().gamma0();
    // gamma0 V gamma0 = V^dagger at every node
    const CoeffField& c = op().stencil().c();
    for (int i = 0; i < g.nt; ++i)
        for (int j = 0; j < g.nx; ++j) {
            Mat v = c.mat_at(g.nx, i, j);
            Mat lhs = mat_mul(2, g0, mat_mul(2, v, g0));
            Mat rhs = mat_dagger(2, v);
            for (int t = 0; t < 4; ++t)
                if (std::abs(lhs[t] - rhs[t]) > 1e-14) return false;
        }
    // gamma0 W gamma0 = W*: kernel blocks must satisfy
    // gamma0 w(x,y) gamma0 = w(y,x)^dagger
    const KernelOperator& w = sys_.kernel();
    const NodeBox& kb = w.box();
    for (int pi = kb.i_lo; pi <= kb.i_hi; ++pi)
        for (int pj = kb.j_lo; pj <= kb.j_hi; ++pj)
            for (int qi = kb.i_lo; qi <= kb.i_hi; ++qi)
                for (int qj = kb.j_lo; qj <= kb.j_hi; ++qj) {
                    Mat lhs = mat_mul(2, g0, mat_mul(2, w.kernel_at(pi, pj, qi, qj), g0));
                    Mat rhs = mat_dagger(2, w.kernel_at(qi, qj, pi, pj));
                    for (int t = 0; t < 4; ++t)
                        if (std::abs(lhs[t] - rhs[t]) > 1e-12) return false;
                }
    return true;
}

} // namespace nlhyp
