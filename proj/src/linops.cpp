#include "nlhyp/linops.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace nlhyp {

Field random_field_on(const Region& region, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    const GridSpec& g = region.grid();
    Field f(g);
    for (int i = 0; i < g.nt; ++i)
        for (int j = 0; j < g.nx; ++j) {
            if (!region.contains(i, j)) continue;
            for (int c = 0; c < g.n_components; ++c)
                f.at(i, j, c) = cplx(unit(rng), unit(rng));
        }
    return f;
}

NormEstimate power_iteration_norm(const FieldMap& apply, const FieldMap& apply_adjoint,
                                  const Field& start, int max_iters, double tol) {
    NormEstimate est;
    Field v = start;
    double nv = l2_norm(v);
    if (nv == 0.0) throw std::invalid_argument("power_iteration_norm: zero start vector");
    v *= cplx(1.0 / nv);
    double sigma2 = 0.0;
    for (int it = 0; it < max_iters; ++it) {
        Field av = apply(v);
        Field bv = apply_adjoint(av);  // A*A v
        double new_sigma2 = inner_product(v, bv).real();
        double nb = l2_norm(bv);
        est.iterations = it + 1;
        if (nb == 0.0) {
            est.value = 0.0;
            est.error = 0.0;
            est.converged = true;
            return est;
        }
        v = bv * cplx(1.0 / nb);
        double rel = std::abs(new_sigma2 - sigma2) / std::max(std::abs(new_sigma2), 1e-300);
        sigma2 = new_sigma2;
        est.error = rel;
        if (it > 0 && rel < tol) {
            est.converged = true;
            break;
        }
    }
    est.value = std::sqrt(std::max(sigma2, 0.0));
    // report the increment on the norm scale
    est.error = 0.5 * est.error * est.value;
    return est;
}

} // namespace nlhyp
