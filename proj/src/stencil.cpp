#include "nlhyp/stencil.hpp"

#include <cmath>
#include <stdexcept>

#include "nlhyp/parallel.hpp"

namespace nlhyp {

Mat mat_zero() { return Mat{cplx(0), cplx(0), cplx(0), cplx(0)}; }

Mat mat_identity(int n) {
    Mat m = mat_zero();
    m[0] = cplx(1.0);
    if (n == 2) m[3] = cplx(1.0);
    return m;
}

Mat mat_scale(int n, cplx s) {
    Mat m = mat_identity(n);
    m[0] *= s;
    if (n == 2) m[3] *= s;
    return m;
}

Mat mat_add(int n, const Mat& a, const Mat& b) {
    Mat r = mat_zero();
    int k = n * n;
    for (int i = 0; i < k; ++i) r[i] = a[i] + b[i];
    return r;
}

Mat mat_mul(int n, const Mat& a, const Mat& b) {
    Mat r = mat_zero();
    if (n == 1) {
        r[0] = a[0] * b[0];
        return r;
    }
    r[0] = a[0] * b[0] + a[1] * b[2];
    r[1] = a[0] * b[1] + a[1] * b[3];
    r[2] = a[2] * b[0] + a[3] * b[2];
    r[3] = a[2] * b[1] + a[3] * b[3];
    return r;
}

Mat mat_dagger(int n, const Mat& a) {
    Mat r = mat_zero();
    r[0] = std::conj(a[0]);
    if (n == 2) {
        r[1] = std::conj(a[2]);
        r[2] = std::conj(a[1]);
        r[3] = std::conj(a[3]);
    }
    return r;
}

Mat mat_inverse(int n, const Mat& a) {
    Mat r = mat_zero();
    if (n == 1) {
        if (a[0] == cplx(0)) throw std::runtime_error("singular 1x1 coefficient");
        r[0] = cplx(1.0) / a[0];
        return r;
    }
    cplx det = a[0] * a[3] - a[1] * a[2];
    if (std::abs(det) == 0.0) throw std::runtime_error("singular 2x2 coefficient");
    cplx inv = cplx(1.0) / det;
    r[0] = a[3] * inv;
    r[1] = -a[1] * inv;
    r[2] = -a[2] * inv;
    r[3] = a[0] * inv;
    return r;
}

void mat_vec_acc(int n, const cplx* m, const cplx* x, cplx* y) {
    if (n == 1) {
        y[0] += m[0] * x[0];
        return;
    }
    y[0] += m[0] * x[0] + m[1] * x[1];
    y[1] += m[2] * x[0] + m[3] * x[1];
}

CoeffField CoeffField::constant(int n, const Mat& m) {
    CoeffField c;
    c.n_ = n;
    c.c_ = m;
    return c;
}

CoeffField CoeffField::varying(const GridSpec& g,
                               const std::function<Mat(int, int)>& sample) {
    CoeffField c;
    c.n_ = g.n_components;
    c.values_.resize(g.nodes() * 4);
    for (int i = 0; i < g.nt; ++i)
        for (int j = 0; j < g.nx; ++j) {
            Mat m = sample(i, j);
            long node = static_cast<long>(i) * g.nx + j;
            for (int k = 0; k < 4; ++k) c.values_[node * 4 + k] = m[k];
        }
    return c;
}

Mat CoeffField::mat_at(int nx, int i, int j) const {
    const cplx* p = at(static_cast<long>(i) * nx + j);
    return Mat{p[0], p[1], p[2], p[3]};
}

CoeffField CoeffField::shifted_dagger(const GridSpec& g, int di, int dj) const {
    if (is_constant()) return constant(n_, mat_dagger(n_, c_));
    return varying(g, [&](int i, int j) {
        int si = std::min(std::max(i + di, 0), g.nt - 1);
        int sj = std::min(std::max(j + dj, 0), g.nx - 1);
        return mat_dagger(n_, mat_at(g.nx, si, sj));
    });
}

CoeffField CoeffField::pointwise_inverse(const GridSpec& g) const {
    if (is_constant()) return constant(n_, mat_inverse(n_, c_));
    return varying(g, [&](int i, int j) { return mat_inverse(n_, mat_at(g.nx, i, j)); });
}

ThreeLevelStencil::ThreeLevelStencil(const GridSpec& g, CoeffField a_plus,
                                     CoeffField a_minus, CoeffField b_plus,
                                     CoeffField b_minus, CoeffField c)
    : g_(g), ap_(std::move(a_plus)), am_(std::move(a_minus)), bp_(std::move(b_plus)),
      bm_(std::move(b_minus)), c_(std::move(c)) {
    try {
        inv_ap_ = ap_.pointwise_inverse(g);
        inv_am_ = am_.pointwise_inverse(g);
    } catch (const std::runtime_error&) {
        inv_ap_.reset();
        inv_am_.reset();
    }
}

Field ThreeLevelStencil::apply(const Field& f) const {
    if (!f.grid().same(g_)) throw std::invalid_argument("apply: grid mismatch");
    const int N = g_.n_components;
    const int nx = g_.nx;
    Field out(g_);
    const cplx* fv = f.data().data();
    cplx* ov = out.data().data();
    parallel_for(static_cast<long>(g_.nt - 2) * (nx - 2), [&](long idx) {
        int i = 1 + static_cast<int>(idx / (nx - 2));
        int j = 1 + static_cast<int>(idx % (nx - 2));
        long node = static_cast<long>(i) * nx + j;
        cplx* y = ov + node * N;
        mat_vec_acc(N, ap_.at(node), fv + (node + nx) * N, y);
        mat_vec_acc(N, am_.at(node), fv + (node - nx) * N, y);
        mat_vec_acc(N, bp_.at(node), fv + (node + 1) * N, y);
        mat_vec_acc(N, bm_.at(node), fv + (node - 1) * N, y);
        mat_vec_acc(N, c_.at(node), fv + node * N, y);
    });
    return out;
}

// Row i of the stencil equation, with u known at levels i-1 and i (retarded,
// target = i+1) or levels i+1 and i (advanced, target = i-1), is solved for
// the target level.
void ThreeLevelStencil::step_row(int i, int target, const cplx* src_row, Field& u) const {
    const int N = g_.n_components;
    const int nx = g_.nx;
    const bool forward = target > i;
    if (!inv_ap_ || !inv_am_)
        throw std::runtime_error("stencil has singular level coefficients; cannot march");
    const CoeffField& lead_inv = forward ? *inv_ap_ : *inv_am_;
    const CoeffField& lag = forward ? am_ : ap_;
    const int lag_level = forward ? i - 1 : i + 1;
    const cplx* u_mid = u.data().data() + static_cast<long>(i) * nx * N;
    const cplx* u_lag = u.data().data() + static_cast<long>(lag_level) * nx * N;
    cplx* u_tgt = u.data().data() + static_cast<long>(target) * nx * N;
    // per-level work is too small to amortize a parallel region on desk-scale
    // grids (see bench_march_*); wide grids still fan out
    auto body = [&](long jj) {
        int j = 1 + static_cast<int>(jj);
        long node = static_cast<long>(i) * nx + j;
        cplx rhs[2] = {src_row ? src_row[j * N] : cplx(0),
                       (N == 2 && src_row) ? src_row[j * N + 1] : cplx(0)};
        cplx neg[2] = {cplx(0), cplx(0)};
        mat_vec_acc(N, lag.at(node), u_lag + j * N, neg);
        mat_vec_acc(N, bp_.at(node), u_mid + (j + 1) * N, neg);
        mat_vec_acc(N, bm_.at(node), u_mid + (j - 1) * N, neg);
        mat_vec_acc(N, c_.at(node), u_mid + j * N, neg);
        rhs[0] -= neg[0];
        if (N == 2) rhs[1] -= neg[1];
        cplx res[2] = {cplx(0), cplx(0)};
        mat_vec_acc(N, lead_inv.at(node), rhs, res);
        u_tgt[j * N] = res[0];
        if (N == 2) u_tgt[j * N + 1] = res[1];
    };
    if (nx >= 1024) {
        parallel_for(nx - 2, body);
    } else {
        for (long jj = 0; jj < nx - 2; ++jj) body(jj);
    }
}

Field ThreeLevelStencil::retarded(const Field& src) const {
    if (!src.grid().same(g_)) throw std::invalid_argument("retarded: grid mismatch");
    const int N = g_.n_components;
    Field u(g_);
    const cplx* sv = src.data().data();
    for (int i = 1; i <= g_.nt - 2; ++i)
        step_row(i, i + 1, sv + static_cast<long>(i) * g_.nx * N, u);
    return u;
}

Field ThreeLevelStencil::advanced(const Field& src) const {
    if (!src.grid().same(g_)) throw std::invalid_argument("advanced: grid mismatch");
    const int N = g_.n_components;
    Field u(g_);
    const cplx* sv = src.data().data();
    for (int i = g_.nt - 2; i >= 1; --i)
        step_row(i, i - 1, sv + static_cast<long>(i) * g_.nx * N, u);
    return u;
}

ThreeLevelStencil ThreeLevelStencil::adjoint() const {
    return ThreeLevelStencil(g_, am_.shifted_dagger(g_, +1, 0), ap_.shifted_dagger(g_, -1, 0),
                             bm_.shifted_dagger(g_, 0, +1), bp_.shifted_dagger(g_, 0, -1),
                             c_.shifted_dagger(g_, 0, 0));
}

Field ThreeLevelStencil::continue_from_levels(const Field& data, int level) const {
    if (!data.grid().same(g_)) throw std::invalid_argument("continue_from_levels: grid mismatch");
    if (level < 1 || level + 1 > g_.nt - 2)
        throw std::invalid_argument("continue_from_levels: seed levels too close to the boundary");
    const int N = g_.n_components;
    const long stride = static_cast<long>(g_.nx) * N;
    Field u(g_);
    for (long k = 0; k < 2 * stride; ++k)
        u.data()[level * stride + k] = data.data()[level * stride + k];
    extend_up(u, level, nullptr);
    extend_down(u, level, nullptr);
    return u;
}

void ThreeLevelStencil::extend_up(Field& u, int level, const Field* src) const {
    const int N = g_.n_components;
    const cplx* sv = src ? src->data().data() : nullptr;
    for (int i = level + 1; i <= g_.nt - 2; ++i)
        step_row(i, i + 1, sv ? sv + static_cast<long>(i) * g_.nx * N : nullptr, u);
}

void ThreeLevelStencil::extend_down(Field& u, int level, const Field* src) const {
    const int N = g_.n_components;
    const cplx* sv = src ? src->data().data() : nullptr;
    for (int i = level; i >= 1; --i)
        step_row(i, i - 1, sv ? sv + static_cast<long>(i) * g_.nx * N : nullptr, u);
}

} // namespace nlhyp
