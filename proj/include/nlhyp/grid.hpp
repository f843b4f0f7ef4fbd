#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace nlhyp {

using cplx = std::complex<double>;

/// Uniform 1+1d spacetime lattice with unit CFL (dt == dx). Time level i and
/// spatial column j address the node (t_min + i*dt, -L + j*dt). Fields carry
/// n_components complex entries per node. The slice (tau_minus, tau_plus) is
/// the window that will host kernel perturbations; both bounds must lie on
/// grid lines.
struct GridSpec {
    double t_min = 0.0;
    double t_max = 0.0;
    double x_half_width = 0.0;
    double dt = 0.0;
    int n_components = 1;
    double tau_minus = 0.0;
    double tau_plus = 0.0;

    int nt = 0;
    int nx = 0;

    GridSpec() = default;
    GridSpec(double t_min_, double t_max_, double x_half_width_, double dt_,
             int n_components_, double tau_minus_, double tau_plus_);

    double dx() const { return dt; }
    double t(int i) const { return t_min + i * dt; }
    double x(int j) const { return -x_half_width + j * dt; }
    long nodes() const { return static_cast<long>(nt) * nx; }
    long values() const { return nodes() * n_components; }

    /// Nearest grid index; throws if `t` is farther than 1e-9*dt off-grid.
    int t_index(double t) const;
    int x_index(double x) const;
    int tau_minus_index() const { return t_index(tau_minus); }
    int tau_plus_index() const { return t_index(tau_plus); }

    /// x_half_width - (t_max - t_min) - data_extent; nonnegative means no
    /// causal cone launched from |x| <= data_extent can reach the boundary.
    double safety_margin(double data_extent) const {
        return x_half_width - (t_max - t_min) - data_extent;
    }

    bool same(const GridSpec& o) const;
};

/// Complex n_components-vector lattice function.
class Field {
public:
    Field() = default;
    explicit Field(const GridSpec& grid);

    const GridSpec& grid() const { return grid_; }

    cplx& at(int i, int j, int c = 0) {
        return v_[(static_cast<long>(i) * grid_.nx + j) * grid_.n_components + c];
    }
    const cplx& at(int i, int j, int c = 0) const {
        return v_[(static_cast<long>(i) * grid_.nx + j) * grid_.n_components + c];
    }

    std::vector<cplx>& data() { return v_; }
    const std::vector<cplx>& data() const { return v_; }

    /// Euclidean norm of the component vector at one node.
    double node_abs(int i, int j) const;

    Field& operator+=(const Field& o);
    Field& operator-=(const Field& o);
    Field& operator*=(cplx s);
    Field operator+(const Field& o) const;
    Field operator-(const Field& o) const;
    Field operator*(cplx s) const;
    Field operator-() const;

    bool all_finite() const;
    void check_finite(const char* where) const;

private:
    GridSpec grid_;
    std::vector<cplx> v_;
};

/// Node set on a grid.
class Region {
public:
    Region() = default;
    explicit Region(const GridSpec& grid);

    static Region box(const GridSpec& g, int i_lo, int i_hi, int j_lo, int j_hi);
    static Region time_slab(const GridSpec& g, int i_lo, int i_hi);
    /// Half-space strictly above (+) / below (-) level i (level excluded).
    static Region half_space(const GridSpec& g, int level, int sign);

    const GridSpec& grid() const { return grid_; }
    bool contains(int i, int j) const { return mask_[static_cast<long>(i) * grid_.nx + j] != 0; }
    void add(int i, int j) { mask_[static_cast<long>(i) * grid_.nx + j] = 1; }

    Region united(const Region& o) const;
    Region intersected(const Region& o) const;
    Region complement() const;
    bool subset_of(const Region& o) const;
    bool empty() const;
    long count() const;

    /// Extremes; only valid on nonempty regions.
    int i_min() const;
    int i_max() const;
    int j_min() const;
    int j_max() const;

private:
    GridSpec grid_;
    std::vector<std::uint8_t> mask_;
};

/// Compactly supported slice data. Wave operators take the pair (u0, u1)
/// (value and time derivative), Dirac operators a single function u0.
struct CauchyData {
    int level = 0;                 // on-grid slice index
    std::vector<cplx> u0;          // nx * n_components
    std::vector<cplx> u1;          // empty for first-order operators
};

/// <f,g> = dt*dx * sum over region of (f(x), g(x)); conjugate-linear in f.
cplx inner_product(const Field& f, const Field& g, const Region& region);
cplx inner_product(const Field& f, const Field& g);
double l2_norm(const Field& f);
double l2_norm(const Field& f, const Region& region);

/// Lattice causal future (+1) / past (-1): node (i,j) belongs to the cone of
/// B iff some (i0,j0) in B has sign*(i-i0) >= 0 and |j-j0| <= |i-i0|.
Region causal_cone(const Region& region, int direction);

/// Nodes where |f| > eta * max|f|; empty for f == 0.
Region empirical_support(const Field& f, double eta);

constexpr double kSupportEta = 1e-10;

/// True when both causal cones of `support` stay at least two columns away
/// from the pinned spatial boundary. Solvers require this of their sources
/// and data so the zero boundary condition is never exercised.
bool margin_ok(const Region& support);
void require_margin(const Region& support, const char* where);

/// Weaker check for fields that already fill their causal cone (solutions):
/// the field itself must stay two columns off the boundary.
bool clears_boundary(const Field& f);
void require_clears_boundary(const Field& f, const char* where);

void dump_field_csv(const Field& f, const std::string& path);
void dump_region_csv(const Region& r, const std::string& path);

} // namespace nlhyp
