#include "nlhyp/bumps.hpp"

#include <cmath>

namespace nlhyp {

double box_window(double s, double lo, double hi, double ramp) {
    if (s <= lo || s >= hi) return 0.0;
    auto smooth = [](double x) { return ((6.0 * x - 15.0) * x + 10.0) * x * x * x; };
    double up = (s - lo) / ramp;
    double down = (hi - s) / ramp;
    double w = 1.0;
    if (up < 1.0) w *= smooth(up);
    if (down < 1.0) w *= smooth(down);
    return w;
}

Field make_bump_field(const GridSpec& g, const NodeBox& box, unsigned seed,
                      bool complex_amplitudes, int bumps) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Field f(g);
    double ti = box.i_lo, tf = box.i_hi;
    double xi = box.j_lo, xf = box.j_hi;
    double ramp_t = std::max(1.5, 0.25 * (tf - ti));
    double ramp_x = std::max(1.5, 0.25 * (xf - xi));
    for (int b = 0; b < bumps; ++b) {
        double ci = ti + (0.3 + 0.4 * unit(rng)) * (tf - ti);
        double cj = xi + (0.3 + 0.4 * unit(rng)) * (xf - xi);
        double si = (0.12 + 0.18 * unit(rng)) * (tf - ti);
        double sj = (0.12 + 0.18 * unit(rng)) * (xf - xi);
        for (int c = 0; c < g.n_components; ++c) {
            double re = 2.0 * unit(rng) - 1.0;
            double im = complex_amplitudes ? 2.0 * unit(rng) - 1.0 : 0.0;
            cplx amp(re, im);
            for (int i = box.i_lo; i <= box.i_hi; ++i)
                for (int j = box.j_lo; j <= box.j_hi; ++j) {
                    double w = box_window(i, ti, tf, ramp_t) * box_window(j, xi, xf, ramp_x);
                    if (w == 0.0) continue;
                    double dti = (i - ci) / si;
                    double dxj = (j - cj) / sj;
                    f.at(i, j, c) += amp * w * std::exp(-0.5 * (dti * dti + dxj * dxj));
                }
        }
    }
    return f;
}

std::vector<cplx> make_bump_slice(const GridSpec& g, int j_lo, int j_hi, unsigned seed,
                                  bool complex_amplitudes) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<cplx> u(static_cast<long>(g.nx) * g.n_components, cplx(0));
    double ramp = std::max(1.5, 0.25 * (j_hi - j_lo));
    for (int c = 0; c < g.n_components; ++c) {
        double cj = j_lo + (0.3 + 0.4 * unit(rng)) * (j_hi - j_lo);
        double sj = (0.15 + 0.2 * unit(rng)) * (j_hi - j_lo);
        double re = 2.0 * unit(rng) - 1.0;
        double im = complex_amplitudes ? 2.0 * unit(rng) - 1.0 : 0.0;
        cplx amp(re, im);
        for (int j = j_lo; j <= j_hi; ++j) {
            double w = box_window(j, j_lo, j_hi, ramp);
            if (w == 0.0) continue;
            double d = (j - cj) / sj;
            u[static_cast<long>(j) * g.n_components + c] = amp * w * std::exp(-0.5 * d * d);
        }
    }
    return u;
}

} // namespace nlhyp
