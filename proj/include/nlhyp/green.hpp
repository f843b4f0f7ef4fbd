#pragma once

#include <optional>

#include "nlhyp/operators.hpp"

namespace nlhyp {

enum class Direction : int { Retarded = +1, Advanced = -1 };

inline int direction_sign(Direction d) { return static_cast<int>(d); }
inline Direction flip(Direction d) {
    return d == Direction::Retarded ? Direction::Advanced : Direction::Retarded;
}

/// Interior row window [lo, hi] (inclusive); the lattice realization of the
/// open time slice tau_minus < x0 < tau_plus.
struct RowWindow {
    int lo = 0;
    int hi = 0;
    static RowWindow slice(const GridSpec& g) {
        return RowWindow{g.tau_minus_index() + 1, g.tau_plus_index() - 1};
    }
    bool contains_row(int i) const { return lo <= i && i <= hi; }
};

/// Zero the field outside rows [lo, hi].
Field mask_rows(const Field& f, int lo, int hi);

/// R^+/R^- applied to a compactly supported source; checks the spatial
/// safety margin before solving.
Field green_apply(const HyperbolicOperator& op, Direction dir, const Field& f);

/// Fundamental solutions S^+/S^- of the adjoint stencil D*.
Field green_apply_adjoint(const HyperbolicOperator& op, Direction dir, const Field& f);

/// Restriction of R^+/- in domain and range to a row window.
Field green_restricted(const HyperbolicOperator& op, Direction dir, const Field& f,
                       RowWindow w);
Field green_restricted_adjoint(const HyperbolicOperator& op, Direction dir, const Field& f,
                               RowWindow w);

/// Causal propagator R = R^- - R^+.
Field propagator_apply(const HyperbolicOperator& op, const Field& f);

/// Retarded/advanced fundamental solution with an optional slice window.
class GreenOperator {
public:
    GreenOperator(const HyperbolicOperator& op, Direction dir,
                  std::optional<RowWindow> window = std::nullopt)
        : op_(&op), dir_(dir), window_(window) {}

    Field apply(const Field& f) const {
        return window_ ? green_restricted(*op_, dir_, f, *window_)
                       : green_apply(*op_, dir_, f);
    }
    Direction direction() const { return dir_; }
    const HyperbolicOperator& op() const { return *op_; }

private:
    const HyperbolicOperator* op_;
    Direction dir_;
    std::optional<RowWindow> window_;
};

/// Unique discrete solution with the given slice data: the second seed level
/// is a second-order Taylor start, after which the stencil recursion extends
/// exactly in both time directions.
Field solve_cauchy(const HyperbolicOperator& op, const CauchyData& u);

/// Exact homogeneous extension of two adjacent levels of `data`.
Field continue_solution(const HyperbolicOperator& op, const Field& data, int level);

/// Independent oracle for the free scalar wave equation: direct quadrature of
/// the source over the backward (retarded) / forward (advanced)
/// characteristic triangle, scaled by 1/2.
Field dalembert_oracle(const HyperbolicOperator& op, Direction dir, const Field& f);

/// Given a solution f0 of D, returns g supported in rows [lo, hi] with
/// R g = f0. Uses g = -D(chi f0) with a quintic smoothstep chi rising across
/// the strip (chi = 0 at and below row lo, chi = 1 at and above row hi).
Field slice_representation(const HyperbolicOperator& op, const Field& f0, int row_lo,
                           int row_hi);

/// Smoothstep in time: 0 at and below row lo, 1 at and above row hi.
double time_smoothstep(int row, int lo, int hi);

} // namespace nlhyp
