#pragma once

#include <array>
#include <functional>
#include <optional>

#include "nlhyp/grid.hpp"

namespace nlhyp {

/// Small dense matrix helpers for the per-node N x N blocks (N <= 2),
/// stored row-major in a fixed array of four entries.
using Mat = std::array<cplx, 4>;

Mat mat_zero();
Mat mat_identity(int n);
Mat mat_scale(int n, cplx s);
Mat mat_add(int n, const Mat& a, const Mat& b);
Mat mat_mul(int n, const Mat& a, const Mat& b);
Mat mat_dagger(int n, const Mat& a);
Mat mat_inverse(int n, const Mat& a);
void mat_vec_acc(int n, const cplx* m, const cplx* x, cplx* y);

/// Per-node matrix coefficient; either one constant matrix or a full field.
class CoeffField {
public:
    static CoeffField constant(int n, const Mat& m);
    static CoeffField varying(const GridSpec& g,
                              const std::function<Mat(int, int)>& sample);

    int n() const { return n_; }
    bool is_constant() const { return values_.empty(); }
    const cplx* at(long node) const {
        return is_constant() ? c_.data() : values_.data() + node * 4;
    }
    Mat mat_at(int nx, int i, int j) const;

    /// out(i,j) = in(i+di, j+dj)^dagger, clamped at the grid edge (the
    /// clamped rows/columns are never read by interior stencils).
    CoeffField shifted_dagger(const GridSpec& g, int di, int dj) const;
    CoeffField pointwise_inverse(const GridSpec& g) const;

private:
    int n_ = 1;
    Mat c_ = {};
    std::vector<cplx> values_;
};

/// Generalized three-level stencil
///   (D g)(i,j) = A+ g(i+1,j) + A- g(i-1,j) + B+ g(i,j+1) + B- g(i,j-1) + C g(i,j)
/// evaluated on interior rows 1..nt-2 and interior columns 1..nx-2; the
/// boundary layer is left at zero. A+ and A- must be pointwise invertible so
/// the row equation can be marched forward (retarded) or backward (advanced).
/// The marching solves are exact inversions of the stencil, which is what
/// makes the Green identities hold at machine precision.
class ThreeLevelStencil {
public:
    ThreeLevelStencil(const GridSpec& g, CoeffField a_plus, CoeffField a_minus,
                      CoeffField b_plus, CoeffField b_minus, CoeffField c);

    const GridSpec& grid() const { return g_; }

    Field apply(const Field& f) const;

    /// Causal inversions: retarded steps forward in time with vanishing data
    /// in the far past, advanced backward with vanishing data in the far
    /// future. Sources are read on interior rows only.
    Field retarded(const Field& src) const;
    Field advanced(const Field& src) const;
    Field invert(int direction, const Field& src) const {
        return direction > 0 ? retarded(src) : advanced(src);
    }

    /// Exact transposed stencil w.r.t. the uniform lattice inner product.
    ThreeLevelStencil adjoint() const;

    /// Homogeneous extension of the two levels (level, level+1) of `data` to
    /// the whole grid; the result solves the stencil equations on every
    /// interior row.
    Field continue_from_levels(const Field& data, int level) const;

    /// March `u` upward from its levels (level, level+1), enforcing the row
    /// equations with the given source (nullptr = homogeneous) on rows
    /// level+1..nt-2. Levels <= level+1 are left untouched.
    void extend_up(Field& u, int level, const Field* src) const;
    /// Downward counterpart: enforces rows level..1 and fills levels < level.
    void extend_down(Field& u, int level, const Field* src) const;

    const CoeffField& a_plus() const { return ap_; }
    const CoeffField& a_minus() const { return am_; }
    const CoeffField& b_plus() const { return bp_; }
    const CoeffField& b_minus() const { return bm_; }
    const CoeffField& c() const { return c_; }

private:
    GridSpec g_;
    CoeffField ap_, am_, bp_, bm_, c_;
    // Pointwise inverses of A+/A-; absent when a level coefficient is
    // singular (such stencils can be applied but not marched).
    std::optional<CoeffField> inv_ap_, inv_am_;

    void step_row(int i, int target, const cplx* src_row, Field& u) const;
};

} // namespace nlhyp
