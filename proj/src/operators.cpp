#include "nlhyp/operators.hpp"

#include <cmath>
#include <stdexcept>

namespace nlhyp {

namespace {

// Majorana representation: gamma0 = sigma_2, gamma1 = i sigma_1. Both have
// purely imaginary entries, so conj(gamma^mu) = -gamma^mu and the charge
// conjugation is plain complex conjugation with C^2 = 1.
const Mat kGamma0 = {cplx(0, 0), cplx(0, -1), cplx(0, 1), cplx(0, 0)};
const Mat kGamma1 = {cplx(0, 0), cplx(0, 1), cplx(0, 1), cplx(0, 0)};

bool mat_equal(int n, const Mat& a, const Mat& b) {
    for (int k = 0; k < n * n; ++k)
        if (a[k] != b[k]) return false;
    return true;
}

void check_clifford_invariants() {
    const int n = 2;
    Mat g0g0 = mat_mul(n, kGamma0, kGamma0);
    Mat g1g1 = mat_mul(n, kGamma1, kGamma1);
    if (!mat_equal(n, g0g0, mat_identity(n))) throw std::logic_error("gamma0^2 != 1");
    if (!mat_equal(n, g1g1, mat_scale(n, cplx(-1)))) throw std::logic_error("gamma1^2 != -1");
    if (!mat_equal(n, mat_dagger(n, kGamma0), kGamma0)) throw std::logic_error("gamma0 not hermitian");
    Mat mg1 = mat_scale(n, cplx(-1));
    if (!mat_equal(n, mat_dagger(n, kGamma1), mat_mul(n, mg1, kGamma1)))
        throw std::logic_error("gamma1 not anti-hermitian");
    Mat anti = mat_add(n, mat_mul(n, kGamma0, kGamma1), mat_mul(n, kGamma1, kGamma0));
    if (!mat_equal(n, anti, mat_zero())) throw std::logic_error("gamma0 gamma1 + gamma1 gamma0 != 0");
    for (const Mat& g : {kGamma0, kGamma1}) {
        Mat cgc = mat_zero();
        for (int k = 0; k < 4; ++k) cgc[k] = std::conj(g[k]);
        if (!mat_equal(n, cgc, mat_mul(n, mg1, g))) throw std::logic_error("C gamma C != -gamma");
    }
}

} // namespace

PotentialSpec PotentialSpec::free() { return PotentialSpec{}; }

PotentialSpec PotentialSpec::mass_term(double m) {
    PotentialSpec p;
    p.preset = Preset::Mass;
    p.mass = m;
    return p;
}

PotentialSpec PotentialSpec::gaussian(double amp, double center_t, double center_x,
                                      double width) {
    PotentialSpec p;
    p.preset = Preset::GaussianPotential;
    p.amp = amp;
    p.center_t = center_t;
    p.center_x = center_x;
    p.width = width;
    return p;
}

double PotentialSpec::value(OperatorKind kind, double t, double x) const {
    switch (preset) {
        case Preset::Free:
            return 0.0;
        case Preset::Mass:
            return kind == OperatorKind::Wave ? mass * mass : mass;
        case Preset::GaussianPotential: {
            double dt = t - center_t;
            double dx = x - center_x;
            return amp * std::exp(-(dt * dt + dx * dx) / (width * width));
        }
    }
    return 0.0;
}

HyperbolicOperator::HyperbolicOperator(OperatorKind kind,
                                       std::shared_ptr<const ThreeLevelStencil> s,
                                       PotentialSpec pot)
    : kind_(kind), stencil_(std::move(s)), potential_(pot) {}

HyperbolicOperator HyperbolicOperator::wave(const GridSpec& g, const PotentialSpec& v) {
    if (g.n_components != 1)
        throw std::invalid_argument("wave preset uses scalar fields (N=1)");
    const int n = 1;
    double idt2 = 1.0 / (g.dt * g.dt);
    CoeffField ap = CoeffField::constant(n, mat_scale(n, idt2));
    CoeffField am = CoeffField::constant(n, mat_scale(n, idt2));
    CoeffField bp = CoeffField::constant(n, mat_scale(n, -idt2));
    CoeffField bm = CoeffField::constant(n, mat_scale(n, -idt2));
    // unit CFL: the center term of the d'Alembertian cancels, leaving V.
    CoeffField c =
        v.is_constant()
            ? CoeffField::constant(n, mat_scale(n, v.value(OperatorKind::Wave, 0, 0)))
            : CoeffField::varying(g, [&](int i, int j) {
                  return mat_scale(n, v.value(OperatorKind::Wave, g.t(i), g.x(j)));
              });
    auto st = std::make_shared<ThreeLevelStencil>(g, ap, am, bp, bm, c);
    return HyperbolicOperator(OperatorKind::Wave, st, v);
}

HyperbolicOperator HyperbolicOperator::wave_general(
    const GridSpec& g, const std::function<Mat(double, double)>& u0,
    const std::function<Mat(double, double)>& u1,
    const std::function<Mat(double, double)>& v) {
    const int n = g.n_components;
    double idt2 = 1.0 / (g.dt * g.dt);
    double h2dt = 1.0 / (2.0 * g.dt);
    auto ap = CoeffField::varying(g, [&](int i, int j) {
        Mat m = u0(g.t(i), g.x(j));
        for (auto& z : m) z *= h2dt;
        return mat_add(n, mat_scale(n, idt2), m);
    });
    auto am = CoeffField::varying(g, [&](int i, int j) {
        Mat m = u0(g.t(i), g.x(j));
        for (auto& z : m) z *= -h2dt;
        return mat_add(n, mat_scale(n, idt2), m);
    });
    auto bp = CoeffField::varying(g, [&](int i, int j) {
        Mat m = u1(g.t(i), g.x(j));
        for (auto& z : m) z *= h2dt;
        return mat_add(n, mat_scale(n, -idt2), m);
    });
    auto bm = CoeffField::varying(g, [&](int i, int j) {
        Mat m = u1(g.t(i), g.x(j));
        for (auto& z : m) z *= -h2dt;
        return mat_add(n, mat_scale(n, -idt2), m);
    });
    auto c = CoeffField::varying(g, [&](int i, int j) { return v(g.t(i), g.x(j)); });
    auto st = std::make_shared<ThreeLevelStencil>(g, ap, am, bp, bm, c);
    return HyperbolicOperator(OperatorKind::Wave, st, PotentialSpec::free());
}

HyperbolicOperator HyperbolicOperator::dirac(const GridSpec& g, const PotentialSpec& v) {
    if (g.n_components != 2)
        throw std::invalid_argument("dirac preset needs N=2 grids");
    check_clifford_invariants();
    const int n = 2;
    cplx ct(0.0, -1.0 / (2.0 * g.dt));  // -i/(2 dt)
    Mat ap_m = mat_mul(n, mat_scale(n, ct), kGamma0);
    Mat am_m = mat_mul(n, mat_scale(n, -ct), kGamma0);
    Mat bp_m = mat_mul(n, mat_scale(n, ct), kGamma1);
    Mat bm_m = mat_mul(n, mat_scale(n, -ct), kGamma1);
    CoeffField c =
        v.is_constant()
            ? CoeffField::constant(n, mat_scale(n, v.value(OperatorKind::Dirac, 0, 0)))
            : CoeffField::varying(g, [&](int i, int j) {
                  return mat_scale(n, v.value(OperatorKind::Dirac, g.t(i), g.x(j)));
              });
    auto st = std::make_shared<ThreeLevelStencil>(g, CoeffField::constant(n, ap_m),
                                                  CoeffField::constant(n, am_m),
                                                  CoeffField::constant(n, bp_m),
                                                  CoeffField::constant(n, bm_m), c);
    return HyperbolicOperator(OperatorKind::Dirac, st, v);
}

const ThreeLevelStencil& HyperbolicOperator::adjoint_stencil() const {
    if (!adjoint_) adjoint_ = std::make_shared<const ThreeLevelStencil>(stencil_->adjoint());
    return *adjoint_;
}

Region HyperbolicOperator::interior() const {
    const GridSpec& g = grid();
    return Region::box(g, 1, g.nt - 2, 1, g.nx - 2);
}

bool HyperbolicOperator::locality_check(const Field& f, double eta) const {
    Field df = apply(f);
    return empirical_support(df, eta).subset_of(dilate_cross(empirical_support(f, eta)));
}

bool HyperbolicOperator::commutes_with_conjugation() const {
    const GridSpec& g = grid();
    const int n = g.n_components;
    auto real_coeff = [&](const CoeffField& c) {
        auto real_mat = [&](const Mat& m) {
            for (int k = 0; k < n * n; ++k)
                if (m[k].imag() != 0.0) return false;
            return true;
        };
        if (c.is_constant()) return real_mat(c.mat_at(g.nx, 0, 0));
        for (int i = 0; i < g.nt; ++i)
            for (int j = 0; j < g.nx; ++j)
                if (!real_mat(c.mat_at(g.nx, i, j))) return false;
        return true;
    };
    // For the Dirac stencil the A/B coefficients are -i gamma^mu / (2h):
    // purely real in the Majorana representation.
    return real_coeff(stencil_->a_plus()) && real_coeff(stencil_->a_minus()) &&
           real_coeff(stencil_->b_plus()) && real_coeff(stencil_->b_minus()) &&
           real_coeff(stencil_->c());
}

Mat HyperbolicOperator::gamma0() const {
    if (kind_ != OperatorKind::Dirac) throw std::logic_error("gamma0 on non-Dirac operator");
    return kGamma0;
}

Mat HyperbolicOperator::gamma1() const {
    if (kind_ != OperatorKind::Dirac) throw std::logic_error("gamma1 on non-Dirac operator");
    return kGamma1;
}

Field HyperbolicOperator::gamma0_times(const Field& f) const {
    Mat g0 = gamma0();
    const GridSpec& g = grid();
    Field out(g);
    for (int i = 0; i < g.nt; ++i)
        for (int j = 0; j < g.nx; ++j) {
            cplx y[2] = {cplx(0), cplx(0)};
            const cplx x[2] = {f.at(i, j, 0), f.at(i, j, 1)};
            mat_vec_acc(2, g0.data(), x, y);
            out.at(i, j, 0) = y[0];
            out.at(i, j, 1) = y[1];
        }
    return out;
}

Field conjugate_field(const Field& f) {
    Field out(f.grid());
    for (std::size_t k = 0; k < f.data().size(); ++k) out.data()[k] = std::conj(f.data()[k]);
    return out;
}

Region dilate_cross(const Region& r) {
    const GridSpec& g = r.grid();
    Region out(g);
    for (int i = 0; i < g.nt; ++i)
        for (int j = 0; j < g.nx; ++j) {
            if (!r.contains(i, j)) continue;
            out.add(i, j);
            if (i > 0) out.add(i - 1, j);
            if (i + 1 < g.nt) out.add(i + 1, j);
            if (j > 0) out.add(i, j - 1);
            if (j + 1 < g.nx) out.add(i, j + 1);
        }
    return out;
}

double relative_residual(const HyperbolicOperator& op, const Field& u, const Field& f) {
    Region interior = op.interior();
    Field r = op.apply(u) - f;
    double denom = l2_norm(f, interior);
    if (denom == 0.0) denom = 1.0;
    return l2_norm(r, interior) / denom;
}

} // namespace nlhyp
