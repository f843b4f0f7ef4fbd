#pragma once

#include "nlhyp/kernels.hpp"

namespace nlhyp {

/// Scalar symbol on R^2: a Gaussian, optionally cut off by a smoothstep
/// window so that it is compactly supported. The Fourier transform uses the
/// unitary convention w~(k) = (2 pi)^{-1} int e^{-i k.u} w(u) du; it is
/// analytic for the pure Gaussian and computed by quadrature otherwise.
struct StarSymbol {
    double amp = 1.0;
    double center0 = 0.0, center1 = 0.0;
    double sigma = 0.3;
    double window_half = 0.0;  // 0: pure Gaussian; > 0: support box half-width

    double eval(double u0, double u1) const;
    cplx fourier(double k0, double k1) const;
    /// Half-width of the box outside which the symbol is zero (windowed) or
    /// numerically negligible (Gaussian).
    double support_radius() const;
};

/// Deformation data for the Rieffel-type products: theta = theta0 J with
/// J = [[0,1],[-1,0]], a smooth cutoff chi (1 on [-inner, inner], smoothstep
/// to 0 at +-outer, per component), and for the locally noncommutative
/// variant the invariant box K = center +- k_half in both coordinates, with
/// the diffeomorphism gamma acting on u = (x - center)/k_half.
struct StarProductSpec {
    enum class Variant { Moyal, LocalNC };
    Variant variant = Variant::Moyal;
    double theta0 = 0.5;
    StarSymbol symbol;
    double chi_inner = 0.5;
    double chi_outer = 1.0;
    double k_center0 = 0.0, k_center1 = 0.0;
    double k_half = 1.0;
};

/// Antisymmetric diffeomorphism (-1,1) -> R: gamma(u) = exp(1/(1-u)) for
/// u > 1/2, cubic-matched on [0, 1/2]. Evaluation is clamped at
/// |u| <= 1 - 1e-3 and refuses values whose exponential would overflow.
double gamma_diffeo(double u);
double gamma_diffeo_prime(double u);
double gamma_diffeo_inverse(double v);

/// Smooth per-component cutoff chi(s): 1 on |s| <= inner, 0 beyond outer.
double star_cutoff(double s, double inner, double outer);

struct StarKernelValue {
    cplx value{0.0, 0.0};
    double quad_error = 0.0;  // Richardson estimate of the p-quadrature error
    bool converged = true;
};

/// Closed-form limit kernels. Point coordinates are lattice (t, x) pairs.
cplx moyal_limit_kernel(const StarProductSpec& spec, const double x[2], const double y[2]);
cplx local_nc_limit_kernel(const StarProductSpec& spec, const double x[2], const double y[2]);

/// epsilon-truncated kernels by oscillatory quadrature in p (trapezoid with
/// at least 8 points per oscillation, Richardson-checked).
StarKernelValue moyal_eps_kernel(const StarProductSpec& spec, double eps, const double x[2],
                                 const double y[2]);
StarKernelValue local_nc_eps_kernel(const StarProductSpec& spec, double eps, const double x[2],
                                    const double y[2]);

/// (W f)(x) at one lattice node by quadrature of the kernel against f over
/// the support of f; eps <= 0 selects the limit kernel.
cplx star_apply_at(const StarProductSpec& spec, double eps, const Field& f, int i, int j);

/// Dense kernel operators on the lattice (N = 1 grids). The Moyal builder
/// assembles over the given box; the locally noncommutative builder uses the
/// node box of K shrunk to |u| <= interior_clamp.
KernelOperator build_moyal_eps(const GridSpec& g, const StarProductSpec& spec, double eps,
                               const NodeBox& box);
KernelOperator build_moyal_limit(const GridSpec& g, const StarProductSpec& spec,
                                 const NodeBox& box);
KernelOperator build_local_nc(const GridSpec& g, const StarProductSpec& spec, double eps,
                              double interior_clamp = 0.95);

/// Node box of the invariant set K of a local-nc spec, shrunk to
/// |u| <= clamp.
NodeBox local_nc_box(const GridSpec& g, const StarProductSpec& spec, double clamp);

} // namespace nlhyp
