#include "nlhyp/green.hpp"

#include <cmath>
#include <stdexcept>

#include "nlhyp/parallel.hpp"

namespace nlhyp {

Field mask_rows(const Field& f, int lo, int hi) {
    const GridSpec& g = f.grid();
    Field out(g);
    const long stride = static_cast<long>(g.nx) * g.n_components;
    for (int i = std::max(lo, 0); i <= std::min(hi, g.nt - 1); ++i)
        for (long k = 0; k < stride; ++k)
            out.data()[i * stride + k] = f.data()[i * stride + k];
    return out;
}

Field green_apply(const HyperbolicOperator& op, Direction dir, const Field& f) {
    f.check_finite("green_apply");
    require_margin(empirical_support(f, kSupportEta), "green_apply");
    return op.stencil().invert(direction_sign(dir), f);
}

Field green_apply_adjoint(const HyperbolicOperator& op, Direction dir, const Field& f) {
    f.check_finite("green_apply_adjoint");
    require_margin(empirical_support(f, kSupportEta), "green_apply_adjoint");
    return op.adjoint_stencil().invert(direction_sign(dir), f);
}

Field green_restricted(const HyperbolicOperator& op, Direction dir, const Field& f,
                       RowWindow w) {
    Field masked = mask_rows(f, w.lo, w.hi);
    Field u = op.stencil().invert(direction_sign(dir), masked);
    return mask_rows(u, w.lo, w.hi);
}

Field green_restricted_adjoint(const HyperbolicOperator& op, Direction dir, const Field& f,
                               RowWindow w) {
    Field masked = mask_rows(f, w.lo, w.hi);
    Field u = op.adjoint_stencil().invert(direction_sign(dir), masked);
    return mask_rows(u, w.lo, w.hi);
}

Field propagator_apply(const HyperbolicOperator& op, const Field& f) {
    f.check_finite("propagator_apply");
    require_margin(empirical_support(f, kSupportEta), "propagator_apply");
    const ThreeLevelStencil& st = op.stencil();
    return st.advanced(f) - st.retarded(f);
}

namespace {

// u_t at one level from the stencil coefficients; used only to seed the
// second level of the Cauchy start.
std::vector<cplx> dirac_time_derivative(const HyperbolicOperator& op, int level,
                                        const std::vector<cplx>& u) {
    const GridSpec& g = op.grid();
    const int nx = g.nx;
    // psi_t = -sigma3 d_x psi - i gamma0 V psi, sigma3 = gamma0 gamma1.
    Mat s3 = mat_mul(2, op.gamma0(), op.gamma1());
    Mat ig0 = mat_mul(2, mat_scale(2, cplx(0, 1)), op.gamma0());
    std::vector<cplx> out(u.size(), cplx(0));
    const CoeffField& c = op.stencil().c();
    for (int j = 1; j < nx - 1; ++j) {
        cplx dx_u[2] = {(u[(j + 1) * 2] - u[(j - 1) * 2]) / (2.0 * g.dx()),
                        (u[(j + 1) * 2 + 1] - u[(j - 1) * 2 + 1]) / (2.0 * g.dx())};
        cplx t1[2] = {cplx(0), cplx(0)};
        mat_vec_acc(2, s3.data(), dx_u, t1);
        Mat v = c.mat_at(nx, level, j);
        cplx vu[2] = {cplx(0), cplx(0)};
        mat_vec_acc(2, v.data(), &u[j * 2], vu);
        cplx t2[2] = {cplx(0), cplx(0)};
        mat_vec_acc(2, ig0.data(), vu, t2);
        out[j * 2] = -t1[0] - t2[0];
        out[j * 2 + 1] = -t1[1] - t2[1];
    }
    return out;
}

} // namespace

Field solve_cauchy(const HyperbolicOperator& op, const CauchyData& u) {
    const GridSpec& g = op.grid();
    const int N = g.n_components;
    const int nx = g.nx;
    if (static_cast<long>(u.u0.size()) != static_cast<long>(nx) * N)
        throw std::invalid_argument("solve_cauchy: data size mismatch");
    const int lv = u.level;
    if (lv < 1 || lv + 1 > g.nt - 2)
        throw std::invalid_argument("solve_cauchy: slice too close to the temporal boundary");

    Field seed(g);
    for (int j = 0; j < nx; ++j)
        for (int c = 0; c < N; ++c) seed.at(lv, j, c) = u.u0[j * N + c];

    const double dt = g.dt;
    if (op.kind() == OperatorKind::Wave) {
        if (static_cast<long>(u.u1.size()) != static_cast<long>(nx) * N)
            throw std::invalid_argument("solve_cauchy: wave data needs (u0, u1)");
        // Second-order start. Drift terms are recovered from the stencil:
        // U0 = dt (A+ - A-), U1 = dx (B+ - B-), V = C at unit CFL.
        const ThreeLevelStencil& st = op.stencil();
        for (int j = 1; j < nx - 1; ++j) {
            Mat u0c = st.a_plus().mat_at(nx, lv, j);
            Mat u0m = st.a_minus().mat_at(nx, lv, j);
            Mat u1c = st.b_plus().mat_at(nx, lv, j);
            Mat u1m = st.b_minus().mat_at(nx, lv, j);
            Mat Vm = st.c().mat_at(nx, lv, j);
            Mat U0 = mat_zero(), U1 = mat_zero();
            for (int k = 0; k < N * N; ++k) {
                U0[k] = (u0c[k] - u0m[k]) * dt;
                U1[k] = (u1c[k] - u1m[k]) * g.dx();
            }
            cplx lap[2] = {cplx(0), cplx(0)};
            cplx ux[2] = {cplx(0), cplx(0)};
            for (int c = 0; c < N; ++c) {
                lap[c] = (u.u0[(j + 1) * N + c] - 2.0 * u.u0[j * N + c] +
                          u.u0[(j - 1) * N + c]) /
                         (g.dx() * g.dx());
                ux[c] = (u.u0[(j + 1) * N + c] - u.u0[(j - 1) * N + c]) / (2.0 * g.dx());
            }
            cplx utt[2] = {lap[0], lap[1]};
            cplx tmp[2] = {cplx(0), cplx(0)};
            mat_vec_acc(N, U0.data(), &u.u1[j * N], tmp);
            mat_vec_acc(N, U1.data(), ux, tmp);
            mat_vec_acc(N, Vm.data(), &u.u0[j * N], tmp);
            for (int c = 0; c < N; ++c) utt[c] -= tmp[c];
            for (int c = 0; c < N; ++c)
                seed.at(lv + 1, j, c) =
                    u.u0[j * N + c] + dt * u.u1[j * N + c] + 0.5 * dt * dt * utt[c];
        }
    } else {
        if (!u.u1.empty())
            throw std::invalid_argument("solve_cauchy: Dirac data is a single function");
        std::vector<cplx> ut = dirac_time_derivative(op, lv, u.u0);
        // psi_tt = L^2 psi with L = -sigma3 d_x - i gamma0 V, expanded so every
        // term spreads at most one column (keeps the start inside the cone):
        // L^2 = D2 + sigma3 d_x (i gamma0 V .) + i gamma0 V sigma3 d_x + (i gamma0 V)^2
        Mat s3 = mat_mul(2, op.gamma0(), op.gamma1());
        Mat ig0 = mat_mul(2, mat_scale(2, cplx(0, 1)), op.gamma0());
        const CoeffField& cf = op.stencil().c();
        auto igv = [&](int j) { return mat_mul(2, ig0, cf.mat_at(nx, lv, j)); };
        std::vector<cplx> vpsi(u.u0.size(), cplx(0));
        std::vector<cplx> dxpsi(u.u0.size(), cplx(0));
        for (int j = 0; j < nx; ++j) {
            cplx y[2] = {cplx(0), cplx(0)};
            mat_vec_acc(2, igv(j).data(), &u.u0[j * 2], y);
            vpsi[j * 2] = y[0];
            vpsi[j * 2 + 1] = y[1];
        }
        for (int j = 1; j < nx - 1; ++j)
            for (int c = 0; c < 2; ++c)
                dxpsi[j * 2 + c] =
                    (u.u0[(j + 1) * 2 + c] - u.u0[(j - 1) * 2 + c]) / (2.0 * g.dx());
        for (int j = 1; j < nx - 1; ++j) {
            cplx utt[2];
            for (int c = 0; c < 2; ++c)
                utt[c] = (u.u0[(j + 1) * 2 + c] - 2.0 * u.u0[j * 2 + c] +
                          u.u0[(j - 1) * 2 + c]) /
                         (g.dx() * g.dx());
            cplx dvx[2] = {(vpsi[(j + 1) * 2] - vpsi[(j - 1) * 2]) / (2.0 * g.dx()),
                           (vpsi[(j + 1) * 2 + 1] - vpsi[(j - 1) * 2 + 1]) / (2.0 * g.dx())};
            cplx t1[2] = {cplx(0), cplx(0)};
            mat_vec_acc(2, s3.data(), dvx, t1);
            cplx s3dx[2] = {cplx(0), cplx(0)};
            mat_vec_acc(2, s3.data(), &dxpsi[j * 2], s3dx);
            cplx t2[2] = {cplx(0), cplx(0)};
            mat_vec_acc(2, igv(j).data(), s3dx, t2);
            cplx vv[2] = {cplx(0), cplx(0)};
            mat_vec_acc(2, igv(j).data(), &vpsi[j * 2], vv);
            for (int c = 0; c < 2; ++c) utt[c] += t1[c] + t2[c] + vv[c];
            for (int c = 0; c < 2; ++c)
                seed.at(lv + 1, j, c) =
                    u.u0[j * 2 + c] + dt * ut[j * 2 + c] + 0.5 * dt * dt * utt[c];
        }
    }

    require_margin(empirical_support(seed, kSupportEta), "solve_cauchy");
    Field sol = op.stencil().continue_from_levels(seed, lv);
    require_clears_boundary(sol, "solve_cauchy");
    return sol;
}

Field continue_solution(const HyperbolicOperator& op, const Field& data, int level) {
    Field seed = mask_rows(data, level, level + 1);
    require_margin(empirical_support(seed, kSupportEta), "continue_solution");
    Field sol = op.stencil().continue_from_levels(data, level);
    require_clears_boundary(sol, "continue_solution");
    return sol;
}

Field dalembert_oracle(const HyperbolicOperator& op, Direction dir, const Field& f) {
    const GridSpec& g = op.grid();
    if (op.kind() != OperatorKind::Wave || g.n_components != 1 ||
        op.potential().preset != PotentialSpec::Preset::Free)
        throw std::invalid_argument("dalembert_oracle: free scalar wave operator only");
    const int s = direction_sign(dir);
    Field out(g);
    const double w0 = 0.5 * g.dt * g.dx();
    parallel_for(g.nodes(), [&](long idx) {
        int i = static_cast<int>(idx / g.nx);
        int j = static_cast<int>(idx % g.nx);
        cplx acc(0);
        // retarded: sum over source rows strictly below i; advanced: above.
        for (int r = 1; r <= g.nt - 2; ++r) {
            int d = s > 0 ? i - r : r - i;
            if (d <= 0) continue;
            int jl = std::max(1, j - d);
            int jr = std::min(g.nx - 2, j + d);
            for (int y = jl; y <= jr; ++y) {
                double w = (std::abs(y - j) == d) ? 0.5 : 1.0;
                acc += w * f.at(r, y, 0);
            }
        }
        out.at(i, j, 0) = acc * w0;
    });
    return out;
}

double time_smoothstep(int row, int lo, int hi) {
    if (row <= lo) return 0.0;
    if (row >= hi) return 1.0;
    double x = static_cast<double>(row - lo) / static_cast<double>(hi - lo);
    return ((6.0 * x - 15.0) * x + 10.0) * x * x * x;
}

Field slice_representation(const HyperbolicOperator& op, const Field& f0, int row_lo,
                           int row_hi) {
    const GridSpec& g = op.grid();
    if (row_lo < 2 || row_hi > g.nt - 3 || row_lo >= row_hi)
        throw std::invalid_argument("slice_representation: bad strip");
    double res = l2_norm(op.apply(f0), op.interior());
    double scale = l2_norm(f0);
    if (scale > 0.0 && res > 1e-8 * scale)
        throw std::runtime_error("slice_representation: input is not a solution of D");
    Field chi_f(g);
    const long stride = static_cast<long>(g.nx) * g.n_components;
    for (int i = 0; i < g.nt; ++i) {
        double chi = time_smoothstep(i, row_lo, row_hi);
        if (chi == 0.0) continue;
        for (long k = 0; k < stride; ++k)
            chi_f.data()[i * stride + k] = chi * f0.data()[i * stride + k];
    }
    Field gsrc = -op.apply(chi_f);
    // supp g in rows [row_lo, row_hi]: outside the strip chi is constant and
    // D f0 = 0, but enforce the window exactly against roundoff spill.
    return mask_rows(gsrc, row_lo, row_hi);
}

} // namespace nlhyp
