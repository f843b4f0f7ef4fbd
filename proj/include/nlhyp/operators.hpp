#pragma once

#include <memory>
#include <optional>

#include "nlhyp/stencil.hpp"

namespace nlhyp {

enum class OperatorKind { Wave, Dirac };

/// Named coefficient presets for the potential term.
struct PotentialSpec {
    enum class Preset { Free, Mass, GaussianPotential };
    Preset preset = Preset::Free;
    double mass = 0.0;
    double amp = 0.0;
    double center_t = 0.0;
    double center_x = 0.0;
    double width = 1.0;

    static PotentialSpec free();
    static PotentialSpec mass_term(double m);
    static PotentialSpec gaussian(double amp, double center_t, double center_x, double width);

    /// Scalar value entering the operator: m^2 for the wave equation, m for
    /// the Dirac equation, the sampled Gaussian otherwise.
    double value(OperatorKind kind, double t, double x) const;
    bool is_constant() const { return preset != Preset::GaussianPotential; }
};

/// Discrete (pre-)normally hyperbolic operator on the lattice. The wave form
/// is the leapfrog d'Alembertian plus drift and potential terms; the Dirac
/// form uses central differences in the Majorana representation
/// (gamma0 = sigma_2, gamma1 = i sigma_1, charge conjugation = plain complex
/// conjugation). Both are three-level stencils whose retarded/advanced
/// marching inverts the stencil exactly.
class HyperbolicOperator {
public:
    static HyperbolicOperator wave(const GridSpec& g, const PotentialSpec& v);
    /// General wave operator with drift coefficients U^0, U^1 (matrix-valued
    /// samplers); used by tests, not exposed as a config preset.
    static HyperbolicOperator wave_general(const GridSpec& g,
                                           const std::function<Mat(double, double)>& u0,
                                           const std::function<Mat(double, double)>& u1,
                                           const std::function<Mat(double, double)>& v);
    static HyperbolicOperator dirac(const GridSpec& g, const PotentialSpec& v);

    OperatorKind kind() const { return kind_; }
    const GridSpec& grid() const { return stencil_->grid(); }
    int cauchy_levels() const { return kind_ == OperatorKind::Wave ? 2 : 1; }

    const ThreeLevelStencil& stencil() const { return *stencil_; }
    const ThreeLevelStencil& adjoint_stencil() const;

    Field apply(const Field& f) const { return stencil_->apply(f); }
    Field apply_adjoint(const Field& f) const { return adjoint_stencil().apply(f); }

    /// Rows/columns where the stencil is defined; the one-node temporal and
    /// spatial boundary layer is excluded from residual norms.
    Region interior() const;

    /// supp(Df) within a one-node cross dilation of supp(f).
    bool locality_check(const Field& f, double eta = kSupportEta) const;

    /// True when all stencil coefficients are real, so D commutes with the
    /// componentwise conjugation C.
    bool commutes_with_conjugation() const;

    Mat gamma0() const;
    Mat gamma1() const;
    Field gamma0_times(const Field& f) const;

    const PotentialSpec& potential() const { return potential_; }

private:
    HyperbolicOperator(OperatorKind kind, std::shared_ptr<const ThreeLevelStencil> s,
                       PotentialSpec pot);

    OperatorKind kind_;
    std::shared_ptr<const ThreeLevelStencil> stencil_;
    mutable std::shared_ptr<const ThreeLevelStencil> adjoint_;
    PotentialSpec potential_;
};

/// Componentwise complex conjugation (the charge conjugation C in the
/// Majorana representation).
Field conjugate_field(const Field& f);

/// One-node cross dilation of a region (the stencil footprint).
Region dilate_cross(const Region& r);

/// ||(D u - f) restricted to the interior|| / ||f||.
double relative_residual(const HyperbolicOperator& op, const Field& u, const Field& f);

} // namespace nlhyp
