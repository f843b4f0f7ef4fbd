#pragma once

#include "nlhyp/report.hpp"
#include "nlhyp/scattering.hpp"
#include "nlhyp/star.hpp"

namespace nlhyp {

struct DemoResult {
    Report report;
    bool pass = false;
};

/// W f = <w1,f> D w2 acquires the compactly supported solution w2 at
/// lambda* = -1/<w1,w2>; the certificate pins the residual at lambda*, a
/// control coupling away from it, and compares |lambda*| against lambda0.
DemoResult compact_solution_demo(const HyperbolicOperator& op, unsigned seed);

/// Rank-one kernel over spacelike-separated bumps: f_lambda = f0[u] - R+ w2
/// is a nonzero solution of D_lambda with vanishing Cauchy data on Sigma.
DemoResult nonunique_cauchy_demo(const HyperbolicOperator& op, unsigned seed);

/// Spacelike double cones over Sigma: data in O1 force the solution on O2 to
/// be a nonzero multiple of R w2 there, contradicting zero prescribed data.
DemoResult nosolution_cauchy_demo(const HyperbolicOperator& op, unsigned seed,
                                  const PerturbedOptions& opts = {});

/// Table of |W_eps f - W f| at sample points over eps in {0.4,0.2,0.1,0.05};
/// asserts the gap never grows as eps shrinks and, for the Moyal variant,
/// that the truncated kernel's support radius grows like 1/eps.
DemoResult star_convergence_demo(const GridSpec& g, const StarProductSpec& spec,
                                 unsigned seed);

} // namespace nlhyp
