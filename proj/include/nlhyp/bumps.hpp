#pragma once

#include <random>

#include "nlhyp/grid.hpp"

namespace nlhyp {

/// Inclusive node box.
struct NodeBox {
    int i_lo = 0, i_hi = 0, j_lo = 0, j_hi = 0;

    bool contains(int i, int j) const {
        return i_lo <= i && i <= i_hi && j_lo <= j && j <= j_hi;
    }
    int rows() const { return i_hi - i_lo + 1; }
    int cols() const { return j_hi - j_lo + 1; }
    long count() const { return static_cast<long>(rows()) * cols(); }
    NodeBox dilated(int m, const GridSpec& g) const {
        return NodeBox{std::max(i_lo - m, 0), std::min(i_hi + m, g.nt - 1),
                       std::max(j_lo - m, 0), std::min(j_hi + m, g.nx - 1)};
    }
    Region region(const GridSpec& g) const { return Region::box(g, i_lo, i_hi, j_lo, j_hi); }
};

/// Smoothstep window over [lo, hi], identically zero at and outside the
/// endpoints, 1 on the middle part; edges ramp over `ramp` nodes.
double box_window(double s, double lo, double hi, double ramp);

/// Smooth compactly supported random field: sum of a few windowed Gaussian
/// bumps with seeded centers/widths/amplitudes, supported strictly inside
/// the box. Deterministic in `seed`.
Field make_bump_field(const GridSpec& g, const NodeBox& box, unsigned seed,
                      bool complex_amplitudes = true, int bumps = 2);

/// Spatial bump data for a Cauchy slice, supported strictly inside
/// [j_lo, j_hi]; one vector per component layout (nx * n_components).
std::vector<cplx> make_bump_slice(const GridSpec& g, int j_lo, int j_hi, unsigned seed,
                                  bool complex_amplitudes = true);

} // namespace nlhyp
