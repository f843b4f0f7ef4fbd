#pragma once

#include "nlhyp/perturbed.hpp"

namespace nlhyp {

/// A solution of D_lambda (or of D, at lambda = 0) together with a generator
/// g satisfying R_lambda g = field, and the strip of rows carrying g.
struct SolutionRep {
    Field field;
    Field generator;
    int strip_lo = 0;
    int strip_hi = 0;
};

/// Moller operators, the scattering operator (Neumann formula and evolution
/// oracle), its lambda-derivative, and the sesquilinear/symplectic/Hilbert
/// forms on solution spaces.
class Scattering {
public:
    explicit Scattering(const PerturbedSystem& sys, int strip_steps = 4);

    const PerturbedSystem& system() const { return sys_; }

    int past_lo() const { return past_lo_; }
    int past_hi() const { return past_hi_; }
    int future_lo() const { return future_lo_; }
    int future_hi() const { return future_hi_; }

    /// Free solution R g from a compactly supported generator.
    SolutionRep free_from_generator(const Field& g) const;
    /// Re-representation of a free solution on the given strip.
    SolutionRep represent_free(const Field& f0, int lo, int hi) const;

    /// The perturbed solution sharing the past asymptotics of f0:
    /// f_lambda = R_lambda g- with R g- = f0, supp g- in the past strip.
    SolutionRep perturbed_from_past(const Field& f0) const;
    /// Same from the future side.
    SolutionRep perturbed_from_future(const Field& f0) const;

    /// Omega_{lambda,+-}: the free solution with the same far future (+) /
    /// far past (-) as the given perturbed solution. Returns a rep whose
    /// generator lies in the matching strip.
    SolutionRep moller(Direction dir, const SolutionRep& f_lambda) const;

    /// S_lambda f0 = f0 + lambda R W N^+_{tau,lambda} (f0 restricted to the slice).
    Field scattering_formula(const Field& f0) const;
    /// S_lambda through the Moller evolution: represent f0 in the past,
    /// solve with D_lambda, read off the outgoing free asymptotics.
    Field scattering_evolution(const Field& f0, SolutionRep* outgoing = nullptr) const;
    /// Inverse map (future to past), for the bijectivity check.
    Field scattering_evolution_inverse(const Field& f0) const;

    struct DerivativeReport {
        Field rw_f0;                  // the generator R W f0 of dS/dlambda at 0
        std::vector<double> lambdas;  // sampled couplings
        std::vector<double> errors;   // ||(S_l f0 - f0)/l - R W f0||
    };
    /// Finite-difference quotients against the closed-form derivative at
    /// lambda = 0, sampled at lambda0/4, lambda0/8, lambda0/16.
    DerivativeReport scattering_derivative(const Field& f0) const;

    /// rho_lambda(a, b) = <g_a, R_lambda g_b>; `welldef_gap` reports the
    /// change under an alternative generator for a.
    cplx form_rho(const SolutionRep& a, const SolutionRep& b,
                  double* welldef_gap = nullptr) const;
    /// Real symplectic form on conjugation-real solutions.
    double form_sigma(const SolutionRep& a, const SolutionRep& b) const;
    /// Dirac inner product delta_lambda(a,b) = i <g_a, gamma0 R_lambda g_b>.
    cplx form_delta(const SolutionRep& a, const SolutionRep& b) const;
    /// The staggered slice pairing whose value equals delta_lambda at every
    /// admissible slice (K strictly to one side of rows {t, t+1}).
    cplx conserved_charge(const SolutionRep& a, const SolutionRep& b, int slice_row) const;

    /// Checks gamma0 V gamma0 = V* and gamma0 W gamma0 = W* on the lattice.
    bool dirac_form_conditions() const;

private:
    PerturbedSystem sys_;
    int strip_steps_;
    int past_lo_, past_hi_, future_lo_, future_hi_;

    const HyperbolicOperator& op() const { return sys_.op(); }
};

} // namespace nlhyp
