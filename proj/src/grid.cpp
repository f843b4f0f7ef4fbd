#include "nlhyp/grid.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "nlhyp/parallel.hpp"

namespace nlhyp {

namespace {

int snap_index(double offset, double dt, const char* what) {
    double raw = offset / dt;
    double rounded = std::round(raw);
    if (std::abs(raw - rounded) > 1e-9)
        throw std::invalid_argument(std::string(what) + " does not lie on a grid line");
    return static_cast<int>(rounded);
}

} // namespace

GridSpec::GridSpec(double t_min_, double t_max_, double x_half_width_, double dt_,
                   int n_components_, double tau_minus_, double tau_plus_)
    : t_min(t_min_), t_max(t_max_), x_half_width(x_half_width_), dt(dt_),
      n_components(n_components_), tau_minus(tau_minus_), tau_plus(tau_plus_) {
    if (dt <= 0.0) throw std::invalid_argument("dt must be positive");
    if (n_components < 1) throw std::invalid_argument("n_components must be positive");
    nt = snap_index(t_max - t_min, dt, "t_max - t_min") + 1;
    nx = 2 * snap_index(x_half_width, dt, "x_half_width") + 1;
    if (nt < 8 || nx < 8) throw std::invalid_argument("grid needs >= 8 nodes per direction");
    if (!(t_min <= tau_minus && tau_minus < tau_plus && tau_plus <= t_max))
        throw std::invalid_argument("need t_min <= tau_minus < tau_plus <= t_max");
    snap_index(tau_minus - t_min, dt, "tau_minus");
    snap_index(tau_plus - t_min, dt, "tau_plus");
}

int GridSpec::t_index(double t) const {
    int i = snap_index(t - t_min, dt, "time coordinate");
    if (i < 0 || i >= nt) throw std::invalid_argument("time coordinate outside grid");
    return i;
}

int GridSpec::x_index(double x) const {
    int j = snap_index(x + x_half_width, dt, "space coordinate");
    if (j < 0 || j >= nx) throw std::invalid_argument("space coordinate outside grid");
    return j;
}

bool GridSpec::same(const GridSpec& o) const {
    return t_min == o.t_min && t_max == o.t_max && x_half_width == o.x_half_width &&
           dt == o.dt && n_components == o.n_components;
}

Field::Field(const GridSpec& grid) : grid_(grid), v_(grid.values(), cplx(0.0, 0.0)) {}

double Field::node_abs(int i, int j) const {
    double s = 0.0;
    for (int c = 0; c < grid_.n_components; ++c) s += std::norm(at(i, j, c));
    return std::sqrt(s);
}

Field& Field::operator+=(const Field& o) {
    if (!grid_.same(o.grid_)) throw std::invalid_argument("grid mismatch");
    for (std::size_t k = 0; k < v_.size(); ++k) v_[k] += o.v_[k];
    return *this;
}

Field& Field::operator-=(const Field& o) {
    if (!grid_.same(o.grid_)) throw std::invalid_argument("grid mismatch");
    for (std::size_t k = 0; k < v_.size(); ++k) v_[k] -= o.v_[k];
    return *this;
}

Field& Field::operator*=(cplx s) {
    for (auto& z : v_) z *= s;
    return *this;
}

Field Field::operator+(const Field& o) const { Field r = *this; r += o; return r; }
Field Field::operator-(const Field& o) const { Field r = *this; r -= o; return r; }
Field Field::operator*(cplx s) const { Field r = *this; r *= s; return r; }
Field Field::operator-() const { return *this * cplx(-1.0, 0.0); }

bool Field::all_finite() const {
    for (const auto& z : v_)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
}

void Field::check_finite(const char* where) const {
    if (!all_finite()) throw std::runtime_error(std::string(where) + ": non-finite field values");
}

Region::Region(const GridSpec& grid) : grid_(grid), mask_(grid.nodes(), 0) {}

Region Region::box(const GridSpec& g, int i_lo, int i_hi, int j_lo, int j_hi) {
    Region r(g);
    i_lo = std::max(i_lo, 0);
    j_lo = std::max(j_lo, 0);
    i_hi = std::min(i_hi, g.nt - 1);
    j_hi = std::min(j_hi, g.nx - 1);
    for (int i = i_lo; i <= i_hi; ++i)
        for (int j = j_lo; j <= j_hi; ++j) r.add(i, j);
    return r;
}

Region Region::time_slab(const GridSpec& g, int i_lo, int i_hi) {
    return box(g, i_lo, i_hi, 0, g.nx - 1);
}

Region Region::half_space(const GridSpec& g, int level, int sign) {
    if (sign > 0) return time_slab(g, level + 1, g.nt - 1);
    return time_slab(g, 0, level - 1);
}

Region Region::united(const Region& o) const {
    if (!grid_.same(o.grid_)) throw std::invalid_argument("grid mismatch");
    Region r = *this;
    for (std::size_t k = 0; k < mask_.size(); ++k) r.mask_[k] |= o.mask_[k];
    return r;
}

Region Region::intersected(const Region& o) const {
    if (!grid_.same(o.grid_)) throw std::invalid_argument("grid mismatch");
    Region r = *this;
    for (std::size_t k = 0; k < mask_.size(); ++k) r.mask_[k] &= o.mask_[k];
    return r;
}

Region Region::complement() const {
    Region r = *this;
    for (auto& m : r.mask_) m = m ? 0 : 1;
    return r;
}

bool Region::subset_of(const Region& o) const {
    if (!grid_.same(o.grid_)) throw std::invalid_argument("grid mismatch");
    for (std::size_t k = 0; k < mask_.size(); ++k)
        if (mask_[k] && !o.mask_[k]) return false;
    return true;
}

bool Region::empty() const {
    for (auto m : mask_)
        if (m) return false;
    return true;
}

long Region::count() const {
    long n = 0;
    for (auto m : mask_) n += m;
    return n;
}

int Region::i_min() const {
    for (int i = 0; i < grid_.nt; ++i)
        for (int j = 0; j < grid_.nx; ++j)
            if (contains(i, j)) return i;
    throw std::logic_error("i_min of empty region");
}

int Region::i_max() const {
    for (int i = grid_.nt - 1; i >= 0; --i)
        for (int j = 0; j < grid_.nx; ++j)
            if (contains(i, j)) return i;
    throw std::logic_error("i_max of empty region");
}

int Region::j_min() const {
    for (int j = 0; j < grid_.nx; ++j)
        for (int i = 0; i < grid_.nt; ++i)
            if (contains(i, j)) return j;
    throw std::logic_error("j_min of empty region");
}

int Region::j_max() const {
    for (int j = grid_.nx - 1; j >= 0; --j)
        for (int i = 0; i < grid_.nt; ++i)
            if (contains(i, j)) return j;
    throw std::logic_error("j_max of empty region");
}

cplx inner_product(const Field& f, const Field& g, const Region& region) {
    if (!f.grid().same(g.grid()) || !f.grid().same(region.grid()))
        throw std::invalid_argument("inner_product: grid mismatch");
    const GridSpec& gs = f.grid();
    cplx acc(0.0, 0.0);
    for (int i = 0; i < gs.nt; ++i)
        for (int j = 0; j < gs.nx; ++j) {
            if (!region.contains(i, j)) continue;
            for (int c = 0; c < gs.n_components; ++c)
                acc += std::conj(f.at(i, j, c)) * g.at(i, j, c);
        }
    return acc * (gs.dt * gs.dx());
}

cplx inner_product(const Field& f, const Field& g) {
    if (!f.grid().same(g.grid())) throw std::invalid_argument("inner_product: grid mismatch");
    const auto& a = f.data();
    const auto& b = g.data();
    cplx acc(0.0, 0.0);
    for (std::size_t k = 0; k < a.size(); ++k) acc += std::conj(a[k]) * b[k];
    return acc * (f.grid().dt * f.grid().dx());
}

double l2_norm(const Field& f) { return std::sqrt(std::abs(inner_product(f, f).real())); }

double l2_norm(const Field& f, const Region& region) {
    return std::sqrt(std::abs(inner_product(f, f, region).real()));
}

Region causal_cone(const Region& region, int direction) {
    const GridSpec& g = region.grid();
    Region cone(g);
    // March level by level: the reachable set grows by one column per step.
    std::vector<std::uint8_t> reach(g.nx, 0);
    auto sweep = [&](int i) {
        std::vector<std::uint8_t> next(g.nx, 0);
        for (int j = 0; j < g.nx; ++j) {
            std::uint8_t r = reach[j];
            if (!r && j > 0) r = reach[j - 1];
            if (!r && j + 1 < g.nx) r = reach[j + 1];
            if (!r && region.contains(i, j)) r = 1;
            next[j] = r;
        }
        reach.swap(next);
        for (int j = 0; j < g.nx; ++j)
            if (reach[j]) cone.add(i, j);
    };
    if (direction > 0) {
        for (int i = 0; i < g.nt; ++i) sweep(i);
    } else {
        for (int i = g.nt - 1; i >= 0; --i) sweep(i);
    }
    return cone;
}

Region empirical_support(const Field& f, double eta) {
    const GridSpec& g = f.grid();
    double peak = 0.0;
    for (int i = 0; i < g.nt; ++i)
        for (int j = 0; j < g.nx; ++j) peak = std::max(peak, f.node_abs(i, j));
    Region r(g);
    if (peak == 0.0) return r;
    double cut = eta * peak;
    for (int i = 0; i < g.nt; ++i)
        for (int j = 0; j < g.nx; ++j)
            if (f.node_abs(i, j) > cut) r.add(i, j);
    return r;
}

bool margin_ok(const Region& support) {
    if (support.empty()) return true;
    const GridSpec& g = support.grid();
    Region cones = causal_cone(support, +1).united(causal_cone(support, -1));
    return cones.j_min() >= 2 && cones.j_max() <= g.nx - 3;
}

void require_margin(const Region& support, const char* where) {
    if (!margin_ok(support))
        throw std::runtime_error(std::string(where) +
                                 ": support violates the spatial safety margin");
}

bool clears_boundary(const Field& f) {
    const GridSpec& g = f.grid();
    for (int i = 0; i < g.nt; ++i)
        for (int j : {0, 1, g.nx - 2, g.nx - 1})
            if (f.node_abs(i, j) != 0.0) return false;
    return true;
}

void require_clears_boundary(const Field& f, const char* where) {
    if (!clears_boundary(f))
        throw std::runtime_error(std::string(where) + ": field reaches the spatial boundary");
}

void dump_field_csv(const Field& f, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << "t,x,component,re,im\n";
    const GridSpec& g = f.grid();
    out.precision(17);
    for (int i = 0; i < g.nt; ++i)
        for (int j = 0; j < g.nx; ++j)
            for (int c = 0; c < g.n_components; ++c)
                out << g.t(i) << ',' << g.x(j) << ',' << c << ','
                    << f.at(i, j, c).real() << ',' << f.at(i, j, c).imag() << '\n';
}

void dump_region_csv(const Region& r, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << "t,x\n";
    const GridSpec& g = r.grid();
    out.precision(17);
    for (int i = 0; i < g.nt; ++i)
        for (int j = 0; j < g.nx; ++j)
            if (r.contains(i, j)) out << g.t(i) << ',' << g.x(j) << '\n';
}

} // namespace nlhyp
