#pragma once

#include <functional>

#include "nlhyp/grid.hpp"

namespace nlhyp {

using FieldMap = std::function<Field(const Field&)>;

struct NormEstimate {
    double value = 0.0;
    double error = 0.0;  // last relative increment
    int iterations = 0;
    bool converged = false;
};

/// ||A|| via power iteration on A*A. The start vector is a seeded random
/// field restricted by `start`; iteration stops after `max_iters` rounds or
/// when the relative change drops below `tol`.
NormEstimate power_iteration_norm(const FieldMap& apply, const FieldMap& apply_adjoint,
                                  const Field& start, int max_iters = 100,
                                  double tol = 1e-6);

/// Seeded random field supported on `region` (every node, every component).
Field random_field_on(const Region& region, unsigned seed);

} // namespace nlhyp
