#include "nlhyp/perturbed.hpp"

#include <cmath>
#include <stdexcept>

#include "nlhyp/dense.hpp"

namespace nlhyp {

namespace {

Field scale_rows(const Field& f, const std::function<double(int)>& weight) {
    const GridSpec& g = f.grid();
    Field out(g);
    const long stride = static_cast<long>(g.nx) * g.n_components;
    for (int i = 0; i < g.nt; ++i) {
        double w = weight(i);
        if (w == 0.0) continue;
        for (long k = 0; k < stride; ++k) out.data()[i * stride + k] = w * f.data()[i * stride + k];
    }
    return out;
}

double partition_step(int row, int lo, int hi, bool linear) {
    if (row <= lo) return 0.0;
    if (row >= hi) return 1.0;
    double x = static_cast<double>(row - lo) / static_cast<double>(hi - lo);
    return linear ? x : ((6.0 * x - 15.0) * x + 10.0) * x * x * x;
}

} // namespace

NormEstimate estimate_norm(const FieldMap& apply, const FieldMap& apply_adjoint,
                           const Region& start_region, unsigned seed) {
    return power_iteration_norm(apply, apply_adjoint, random_field_on(start_region, seed),
                                100, 1e-6);
}

PerturbedSystem::PerturbedSystem(const HyperbolicOperator& op, KernelOperator w, cplx lambda,
                                 PerturbedOptions opts)
    : op_(op), w_(std::move(w)), lambda_(lambda), opts_(opts),
      window_(RowWindow::slice(op.grid())) {
    const GridSpec& g = op.grid();
    if (!w_.grid().same(g)) throw std::invalid_argument("PerturbedSystem: grid mismatch");
    const NodeBox& k = w_.box();
    // K strictly inside the slice; the wider strip margins needed by the
    // global gluing are validated when glue_global runs.
    if (k.i_lo < window_.lo + 1 || k.i_hi > window_.hi - 1)
        throw std::invalid_argument("PerturbedSystem: kernel support must sit strictly "
                                    "inside the time slice");
    require_margin(w_.support_region(), "PerturbedSystem");

    Region win = Region::time_slab(g, window_.lo, window_.hi);
    KernelOperator wadj = w_.adjoint();
    auto norm_of = [&](Direction dir, bool w_first, unsigned seed) {
        FieldMap fwd, bwd;
        if (w_first) {
            // A = W R_tau^dir, A* = S_tau^{-dir} W*
            fwd = [this, dir](const Field& f) {
                return w_.apply(green_restricted(op_, dir, f, window_));
            };
            bwd = [this, &wadj, dir](const Field& f) {
                return green_restricted_adjoint(op_, flip(dir), wadj.apply(f), window_);
            };
        } else {
            // A = R_tau^dir W, A* = W* S_tau^{-dir}
            fwd = [this, dir](const Field& f) {
                return green_restricted(op_, dir, w_.apply(f), window_);
            };
            bwd = [this, &wadj, dir](const Field& f) {
                return wadj.apply(green_restricted_adjoint(op_, flip(dir), f, window_));
            };
        }
        return estimate_norm(fwd, bwd, win, seed);
    };
    norms_.r_plus_w = norm_of(Direction::Retarded, false, opts_.seed);
    norms_.r_minus_w = norm_of(Direction::Advanced, false, opts_.seed + 1);
    norms_.w_r_plus = norm_of(Direction::Retarded, true, opts_.seed + 2);
    norms_.w_r_minus = norm_of(Direction::Advanced, true, opts_.seed + 3);

    double worst = std::max(std::max(norms_.r_plus_w.value, norms_.r_minus_w.value),
                            std::max(norms_.w_r_plus.value, norms_.w_r_minus.value));
    lambda0_ = worst > 0.0 ? opts_.safety / worst : 1e300;
}

PerturbedSystem PerturbedSystem::with_lambda(cplx lambda) const {
    PerturbedSystem s = *this;
    s.lambda_ = lambda;
    return s;
}

void PerturbedSystem::require_coupling(const char* where) const {
    if (std::abs(lambda_) >= lambda0_)
        throw std::runtime_error(std::string(where) +
                                 ": coupling too large (|lambda| >= lambda0)");
}

Field PerturbedSystem::apply_d_lambda(const Field& f) const {
    return op_.apply(f) + w_.apply(f) * lambda_;
}

Field PerturbedSystem::neumann_apply(NeumannVariant v, Direction dir, const Field& f,
                                     std::vector<double>* term_norms) const {
    require_coupling("neumann_apply");
    Field fin = mask_rows(f, window_.lo, window_.hi);
    Field term = fin;
    Field acc = fin;
    if (term_norms) {
        term_norms->clear();
        term_norms->push_back(l2_norm(term));
    }
    double acc_norm = l2_norm(acc);
    if (acc_norm == 0.0) return acc;
    for (int k = 1; k <= opts_.max_terms; ++k) {
        if (v == NeumannVariant::Left)
            term = green_restricted(op_, dir, w_.apply(term), window_) * (-lambda_);
        else
            term = w_.apply(green_restricted(op_, dir, term, window_)) * (-lambda_);
        acc += term;
        double tn = l2_norm(term);
        if (term_norms) term_norms->push_back(tn);
        acc_norm = l2_norm(acc);
        if (tn < opts_.series_tol * acc_norm) break;
        if (k == opts_.max_terms)
            throw std::runtime_error("neumann_apply: series did not terminate");
    }
    // post-verified residual (1 + lambda R W) N f = f (resp. the W R variant)
    Field back = v == NeumannVariant::Left
                     ? acc + green_restricted(op_, dir, w_.apply(acc), window_) * lambda_
                     : acc + w_.apply(green_restricted(op_, dir, acc, window_)) * lambda_;
    double res = l2_norm(back - fin);
    if (res > opts_.residual_tol * l2_norm(fin))
        throw std::runtime_error("neumann_apply: residual check failed");
    return acc;
}

Field PerturbedSystem::perturbed_green_slice(Direction dir, const Field& f,
                                             double* factorization_gap) const {
    require_coupling("perturbed_green_slice");
    Field a = neumann_apply(NeumannVariant::Left, dir,
                            green_restricted(op_, dir, f, window_));
    Field b = green_restricted(op_, dir,
                               neumann_apply(NeumannVariant::Right, dir, f), window_);
    double scale = std::max(l2_norm(a), l2_norm(b));
    double gap = scale > 0.0 ? l2_norm(a - b) / scale : 0.0;
    if (factorization_gap) *factorization_gap = gap;
    if (gap > opts_.factor_tol)
        throw std::runtime_error("perturbed_green_slice: factorizations disagree");
    // the right factorization R_tau N~ f is a single causal march of an
    // effective source, which the gluing relies on
    return b;
}

Field PerturbedSystem::slice_right(Direction dir, const Field& f) const {
    return green_restricted(op_, dir, neumann_apply(NeumannVariant::Right, dir, f), window_);
}

Field PerturbedSystem::case_inner(Direction dir, const Field& h0) const {
    const ThreeLevelStencil& st = op_.stencil();
    Field u = slice_right(dir, h0);
    if (dir == Direction::Retarded) {
        st.extend_up(u, window_.hi - 1, &h0);
    } else {
        st.extend_down(u, window_.lo, &h0);
    }
    return u;
}

Field PerturbedSystem::case_far_opposite(Direction dir, const Field& hfar,
                                         int eps_steps) const {
    const GridSpec& g = op_.grid();
    const ThreeLevelStencil& st = op_.stencil();
    const int itm = g.tau_minus_index(), itp = g.tau_plus_index();
    const long stride = static_cast<long>(g.nx) * g.n_components;
    Field u(g);
    if (l2_norm(hfar) == 0.0) return u;

    if (dir == Direction::Advanced) {
        // source above the slice; re-represent its free advanced solution on
        // a strip between K and the source
        Field w1 = st.advanced(hfar);
        int s_hi = itp - eps_steps;
        int s_lo = s_hi - eps_steps;
        if (s_lo < w_.box().i_hi + 2)
            throw std::runtime_error("glue: upper strip would touch K");
        Field f_ext = st.continue_from_levels(w1, s_hi);
        Field gen = slice_representation(op_, f_ext, s_lo, s_hi);
        Field v = slice_right(Direction::Advanced, gen);
        int seam = s_lo - 1;
        for (int i = seam; i < g.nt; ++i)
            for (long k = 0; k < stride; ++k) u.data()[i * stride + k] = w1.data()[i * stride + k];
        for (int i = window_.lo; i < seam; ++i)
            for (long k = 0; k < stride; ++k) u.data()[i * stride + k] = v.data()[i * stride + k];
        st.extend_down(u, window_.lo, nullptr);
    } else {
        Field w1 = st.retarded(hfar);
        int s_lo = itm + eps_steps;
        int s_hi = s_lo + eps_steps;
        if (s_hi > w_.box().i_lo - 2)
            throw std::runtime_error("glue: lower strip would touch K");
        Field f_ext = st.continue_from_levels(w1, s_lo - 1);
        Field gen = slice_representation(op_, -f_ext, s_lo, s_hi);
        Field v = slice_right(Direction::Retarded, gen);
        int seam = s_hi + 1;
        for (int i = 0; i <= seam; ++i)
            for (long k = 0; k < stride; ++k) u.data()[i * stride + k] = w1.data()[i * stride + k];
        for (int i = seam + 1; i <= window_.hi; ++i)
            for (long k = 0; k < stride; ++k) u.data()[i * stride + k] = v.data()[i * stride + k];
        st.extend_up(u, window_.hi - 1, nullptr);
    }
    return u;
}

void PerturbedSystem::verify_global(const Field& u, const Field& h, const char* where) const {
    Field r = apply_d_lambda(u) - h;
    Region interior = op_.interior();
    double hn = l2_norm(h, interior);
    if (hn == 0.0) hn = 1.0;
    double res = l2_norm(r, interior) / hn;
    if (res > 10.0 * opts_.residual_tol)
        throw std::runtime_error(std::string(where) + ": global residual check failed");
}

Field PerturbedSystem::glue_impl(Direction dir, const Field& h, int eps_steps,
                                 bool linear) const {
    require_coupling("glue_global");
    h.check_finite("glue_global");
    require_margin(empirical_support(h, kSupportEta), "glue_global");
    const GridSpec& g = op_.grid();
    const int itm = g.tau_minus_index(), itp = g.tau_plus_index();
    if (w_.box().i_lo < itm + 2 * eps_steps + 2 || w_.box().i_hi > itp - 2 * eps_steps - 2)
        throw std::invalid_argument("glue_global: strip width too large for this kernel");

    // smooth partition of unity 1 = chi_- + chi_0 + chi_+ in time
    auto chi_plus = [&](int i) { return partition_step(i, itp - eps_steps, itp, linear); };
    auto chi_minus = [&](int i) {
        return 1.0 - partition_step(i, itm, itm + eps_steps, linear);
    };
    Field h_plus = scale_rows(h, chi_plus);
    Field h_minus = scale_rows(h, chi_minus);
    Field h_zero = h - h_plus - h_minus;

    Field u = case_inner(dir, h_zero);
    if (dir == Direction::Retarded) {
        u += op_.stencil().retarded(h_plus);            // same side: R+ is exact
        u += case_far_opposite(Direction::Retarded, h_minus, eps_steps);
    } else {
        u += op_.stencil().advanced(h_minus);
        u += case_far_opposite(Direction::Advanced, h_plus, eps_steps);
    }
    verify_global(u, h, "glue_global");
    return u;
}

Field PerturbedSystem::glue_global(Direction dir, const Field& h) const {
    return glue_impl(dir, h, opts_.glue_eps_steps, false);
}

Field PerturbedSystem::glue_global_custom(Direction dir, const Field& h, int eps_steps,
                                          bool linear_partition) const {
    return glue_impl(dir, h, eps_steps, linear_partition);
}

Field PerturbedSystem::perturbed_green_direct(Direction dir, const Field& h) const {
    require_coupling("perturbed_green_direct");
    h.check_finite("perturbed_green_direct");
    require_margin(empirical_support(h, kSupportEta), "perturbed_green_direct");
    const ThreeLevelStencil& st = op_.stencil();
    Field rh = mask_rows(st.invert(direction_sign(dir), h), window_.lo, window_.hi);
    Field v = neumann_apply(NeumannVariant::Left, dir, rh);
    Field u = st.invert(direction_sign(dir), h - w_.apply(v) * lambda_);
    verify_global(u, h, "perturbed_green_direct");
    return u;
}

Field PerturbedSystem::perturbed_propagator(const Field& gsrc) const {
    return glue_global(Direction::Advanced, gsrc) - glue_global(Direction::Retarded, gsrc);
}

NoCompactSolutionReport no_compact_solution_check(const PerturbedSystem& sys,
                                                  const NodeBox& box) {
    NoCompactSolutionReport rep;
    const GridSpec& g = sys.op().grid();
    RowWindow win = sys.window();
    if (box.i_lo <= win.lo || box.i_hi >= win.hi)
        throw std::invalid_argument("no_compact_solution_check: box not inside the slice");
    NodeList domain(box.region(g));
    rep.dim = domain.dim();
    if (domain.size() > kDenseNodeCap) {
        rep.skipped = true;
        return rep;
    }
    Region range_region =
        dilate_cross(box.region(g)).united(sys.kernel().support_region());
    NodeList range(range_region);
    auto dl = [&](const Field& f) { return sys.apply_d_lambda(f); };
    Eigen::MatrixXcd m = assemble_dense(dl, domain, range);
    rep.sigma_min = smallest_singular_value(m);
    rep.scale = largest_singular_value(m);
    return rep;
}

} // namespace nlhyp
