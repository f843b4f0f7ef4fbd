#include "nlhyp/kernels.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "nlhyp/linops.hpp"
#include "nlhyp/parallel.hpp"

namespace nlhyp {

KernelOperator KernelOperator::dense(const GridSpec& g, const NodeBox& box,
                                     std::vector<cplx> values) {
    KernelOperator w;
    w.repr_ = Repr::Dense;
    w.grid_ = g;
    w.box_ = box;
    long d = box.count() * g.n_components;
    if (static_cast<long>(values.size()) != d * d)
        throw std::invalid_argument("dense kernel: value size mismatch");
    w.values_ = std::move(values);
    for (const auto& z : w.values_)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            throw std::invalid_argument("dense kernel: non-finite values");
    return w;
}

KernelOperator KernelOperator::dense_sampled(
    const GridSpec& g, const NodeBox& box,
    const std::function<Mat(int, int, int, int)>& w) {
    const int N = g.n_components;
    const long nk = box.count();
    const long d = nk * N;
    std::vector<cplx> vals(d * d, cplx(0));
    parallel_for(nk * nk, [&](long pq) {
        long p = pq / nk, q = pq % nk;
        int pi = box.i_lo + static_cast<int>(p / box.cols());
        int pj = box.j_lo + static_cast<int>(p % box.cols());
        int qi = box.i_lo + static_cast<int>(q / box.cols());
        int qj = box.j_lo + static_cast<int>(q % box.cols());
        Mat m = w(pi, pj, qi, qj);
        for (int a = 0; a < N; ++a)
            for (int b = 0; b < N; ++b)
                vals[(p * N + a) * d + q * N + b] = m[a * N + b];
    });
    return dense(g, box, std::move(vals));
}

KernelOperator KernelOperator::rank_one(std::vector<RankOneTerm> terms) {
    if (terms.empty()) throw std::invalid_argument("rank_one kernel: no terms");
    KernelOperator w;
    w.repr_ = Repr::RankOne;
    w.grid_ = terms.front().first.grid();
    w.terms_ = std::move(terms);
    // K = bounding box of all factor supports.
    int ilo = w.grid_.nt, ihi = -1, jlo = w.grid_.nx, jhi = -1;
    for (const auto& t : w.terms_) {
        if (!t.first.grid().same(w.grid_) || !t.second.grid().same(w.grid_))
            throw std::invalid_argument("rank_one kernel: grid mismatch");
        for (const Field* f : {&t.first, &t.second}) {
            Region s = empirical_support(*f, 0.0);
            if (s.empty()) continue;
            ilo = std::min(ilo, s.i_min());
            ihi = std::max(ihi, s.i_max());
            jlo = std::min(jlo, s.j_min());
            jhi = std::max(jhi, s.j_max());
        }
    }
    if (ihi < 0) throw std::invalid_argument("rank_one kernel: all factors vanish");
    w.box_ = NodeBox{ilo, ihi, jlo, jhi};
    return w;
}

Field KernelOperator::apply(const Field& f) const {
    if (!f.grid().same(grid_)) throw std::invalid_argument("kernel apply: grid mismatch");
    Field out(grid_);
    if (repr_ == Repr::RankOne) {
        for (const auto& t : terms_) {
            cplx c = inner_product(t.first, f);
            out += t.second * c;
        }
        return out;
    }
    const int N = grid_.n_components;
    const long nk = box_.count();
    const long d = nk * N;
    const double h2 = grid_.dt * grid_.dx();
    // gather source values over K
    std::vector<cplx> src(d);
    for (long q = 0; q < nk; ++q) {
        int qi = box_.i_lo + static_cast<int>(q / box_.cols());
        int qj = box_.j_lo + static_cast<int>(q % box_.cols());
        for (int c = 0; c < N; ++c) src[q * N + c] = f.at(qi, qj, c);
    }
    parallel_for(d, [&](long row) {
        cplx acc(0);
        const cplx* mrow = values_.data() + row * d;
        for (long k = 0; k < d; ++k) acc += mrow[k] * src[k];
        long p = row / N;
        int c = static_cast<int>(row % N);
        int pi = box_.i_lo + static_cast<int>(p / box_.cols());
        int pj = box_.j_lo + static_cast<int>(p % box_.cols());
        out.at(pi, pj, c) = acc * h2;
    });
    return out;
}

KernelOperator KernelOperator::adjoint() const {
    if (repr_ == Repr::RankOne) {
        std::vector<RankOneTerm> sw;
        sw.reserve(terms_.size());
        for (const auto& t : terms_) sw.emplace_back(t.second, t.first);
        return rank_one(std::move(sw));
    }
    const long d = dense_dim();
    std::vector<cplx> vals(d * d);
    parallel_for(d, [&](long r) {
        for (long k = 0; k < d; ++k) vals[r * d + k] = std::conj(values_[k * d + r]);
    });
    return dense(grid_, box_, std::move(vals));
}

KernelOperator KernelOperator::scaled(cplx s) const {
    KernelOperator w = *this;
    if (repr_ == Repr::RankOne) {
        for (auto& t : w.terms_) t.second *= s;
    } else {
        for (auto& z : w.values_) z *= s;
    }
    return w;
}

Mat KernelOperator::kernel_at(int pi, int pj, int qi, int qj) const {
    const int N = grid_.n_components;
    Mat m = mat_zero();
    if (!box_.contains(pi, pj) || !box_.contains(qi, qj)) return m;
    if (repr_ == Repr::RankOne) {
        // w(x,y) = sum_i w2_i(x) w1_i(y)^dagger
        for (const auto& t : terms_)
            for (int a = 0; a < N; ++a)
                for (int b = 0; b < N; ++b)
                    m[a * N + b] += t.second.at(pi, pj, a) * std::conj(t.first.at(qi, qj, b));
        return m;
    }
    const long d = dense_dim();
    for (int a = 0; a < N; ++a)
        for (int b = 0; b < N; ++b)
            m[a * N + b] = values_[(flat(pi, pj, a)) * d + flat(qi, qj, b)];
    return m;
}

double KernelOperator::norm_estimate(unsigned seed) const {
    KernelOperator adj = adjoint();
    Field start = random_field_on(support_region(), seed);
    auto fwd = [this](const Field& f) { return apply(f); };
    auto bwd = [&adj](const Field& f) { return adj.apply(f); };
    return power_iteration_norm(fwd, bwd, start, 200, 1e-10).value;
}

bool KernelOperator::commutes_with_conjugation() const {
    if (repr_ == Repr::Dense) {
        for (const auto& z : values_)
            if (z.imag() != 0.0) return false;
        return true;
    }
    for (const auto& t : terms_)
        for (const Field* f : {&t.first, &t.second})
            for (const auto& z : f->data())
                if (z.imag() != 0.0) return false;
    return true;
}

void KernelOperator::dump_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    const int N = grid_.n_components;
    out.precision(17);
    if (N == 1)
        out << "tx,xx,ty,xy,re,im\n";
    else
        out << "tx,xx,ty,xy,ci,cj,re,im\n";
    for (int pi = box_.i_lo; pi <= box_.i_hi; ++pi)
        for (int pj = box_.j_lo; pj <= box_.j_hi; ++pj)
            for (int qi = box_.i_lo; qi <= box_.i_hi; ++qi)
                for (int qj = box_.j_lo; qj <= box_.j_hi; ++qj) {
                    Mat m = kernel_at(pi, pj, qi, qj);
                    for (int a = 0; a < N; ++a)
                        for (int b = 0; b < N; ++b) {
                            out << grid_.t(pi) << ',' << grid_.x(pj) << ',' << grid_.t(qi)
                                << ',' << grid_.x(qj) << ',';
                            if (N > 1) out << a << ',' << b << ',';
                            out << m[a * N + b].real() << ',' << m[a * N + b].imag() << '\n';
                        }
                }
}

KernelOperator compose_with_differential(const ThreeLevelStencil& q, const KernelOperator& w,
                                         Side side) {
    const GridSpec& g = w.grid();
    const int N = g.n_components;
    NodeBox nbox = w.box().dilated(1, g);
    if (w.repr() == KernelOperator::Repr::RankOne) {
        std::vector<KernelOperator::RankOneTerm> terms;
        for (const auto& t : w.terms()) {
            if (side == Side::Left)
                terms.emplace_back(t.first, q.apply(t.second));
            else
                terms.emplace_back(q.adjoint().apply(t.first), t.second);
        }
        return KernelOperator::rank_one(std::move(terms));
    }
    const ThreeLevelStencil stencil = side == Side::Left ? q : q.adjoint();
    const NodeBox& old_box = w.box();
    const long cols_in = old_box.count() * N;
    const long dim_out = nbox.count() * N;
    std::vector<cplx> vals(dim_out * dim_out, cplx(0));
    // Column by column: each source column of the kernel is a field over K;
    // the stencil acts on its x-argument (Left) or, via the adjoint stencil,
    // on its y-argument (Right). The Right case conjugates around the
    // adjoint so that w'(x,z) = sum_y w(x,y) Q(y,z).
    parallel_for(cols_in, [&](long col) {
        long qn = col / N;
        int cb = static_cast<int>(col % N);
        int qi = old_box.i_lo + static_cast<int>(qn / old_box.cols());
        int qj = old_box.j_lo + static_cast<int>(qn % old_box.cols());
        Field column(g);
        for (int pi = old_box.i_lo; pi <= old_box.i_hi; ++pi)
            for (int pj = old_box.j_lo; pj <= old_box.j_hi; ++pj) {
                Mat m = side == Side::Left ? w.kernel_at(pi, pj, qi, qj)
                                           : w.kernel_at(qi, qj, pi, pj);
                for (int a = 0; a < N; ++a)
                    column.at(pi, pj, a) =
                        side == Side::Left ? m[a * N + cb] : std::conj(m[cb * N + a]);
            }
        Field res = stencil.apply(column);
        auto flat_out = [&](int i, int j, int c) {
            return (static_cast<long>(i - nbox.i_lo) * nbox.cols() + (j - nbox.j_lo)) * N + c;
        };
        for (int pi = nbox.i_lo; pi <= nbox.i_hi; ++pi)
            for (int pj = nbox.j_lo; pj <= nbox.j_hi; ++pj)
                for (int a = 0; a < N; ++a) {
                    cplx v = res.at(pi, pj, a);
                    if (side == Side::Left) {
                        // rows transformed: w'(x,y) = (Q_x w)(x,y)
                        vals[flat_out(pi, pj, a) * dim_out +
                             flat_out(qi, qj, cb)] = v;
                    } else {
                        // w'(x,z) = [ (Q* r_x)(z) ]^dagger with r_x(y) = w(x,y)^dagger;
                        // here `column` carried r for fixed x-row (qi,qj,cb).
                        vals[flat_out(qi, qj, cb) * dim_out +
                             flat_out(pi, pj, a)] = std::conj(v);
                    }
                }
    });
    return KernelOperator::dense(g, nbox, std::move(vals));
}

KernelOperator make_bump_kernel(const GridSpec& g, const BumpKernelParams& p) {
    const int N = g.n_components;
    std::mt19937_64 rng(p.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const NodeBox& b = p.box;
    struct Mode {
        double ci, cj, si, sj, di, dj, ti, tj, coef;
    };
    std::vector<Mode> modes;
    for (int m = 0; m < p.modes; ++m) {
        Mode md;
        md.ci = b.i_lo + (0.25 + 0.5 * unit(rng)) * b.rows();
        md.cj = b.j_lo + (0.25 + 0.5 * unit(rng)) * b.cols();
        md.si = (0.15 + 0.2 * unit(rng)) * b.rows();
        md.sj = (0.15 + 0.2 * unit(rng)) * b.cols();
        md.di = b.i_lo + (0.25 + 0.5 * unit(rng)) * b.rows();
        md.dj = b.j_lo + (0.25 + 0.5 * unit(rng)) * b.cols();
        md.ti = (0.15 + 0.2 * unit(rng)) * b.rows();
        md.tj = (0.15 + 0.2 * unit(rng)) * b.cols();
        md.coef = 0.5 + unit(rng);
        modes.push_back(md);
    }
    double ramp_i = std::max(1.5, 0.25 * b.rows());
    double ramp_j = std::max(1.5, 0.25 * b.cols());
    auto window = [&](double i, double j) {
        return box_window(i, b.i_lo, b.i_hi, ramp_i) * box_window(j, b.j_lo, b.j_hi, ramp_j);
    };
    auto phi = [&](const Mode& m, double i, double j) {
        double u = (i - m.ci) / m.si, v = (j - m.cj) / m.sj;
        return window(i, j) * std::exp(-0.5 * (u * u + v * v));
    };
    auto psi = [&](const Mode& m, double i, double j) {
        double u = (i - m.di) / m.ti, v = (j - m.dj) / m.tj;
        return window(i, j) * std::exp(-0.5 * (u * u + v * v));
    };
    KernelOperator w = KernelOperator::dense_sampled(g, b, [&](int pi, int pj, int qi, int qj) {
        double s = 0.0;
        for (const Mode& m : modes) {
            double v = phi(m, pi, pj) * psi(m, qi, qj);
            if (p.symmetric) v = 0.5 * (v + phi(m, qi, qj) * psi(m, pi, pj));
            s += m.coef * v;
        }
        return mat_scale(N, cplx(s, 0.0));
    });
    double nrm = w.norm_estimate(p.seed + 11);
    if (nrm == 0.0) throw std::runtime_error("bump kernel degenerated to zero");
    return w.scaled(cplx(p.amp / nrm, 0.0));
}

} // namespace nlhyp
