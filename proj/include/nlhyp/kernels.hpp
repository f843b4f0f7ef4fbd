#pragma once

#include <utility>
#include <vector>

#include "nlhyp/bumps.hpp"
#include "nlhyp/operators.hpp"

namespace nlhyp {

/// Compactly supported kernel perturbation W, (Wf)(x) = sum_y w(x,y) f(y) h^2
/// with h^2 = dt*dx the quadrature weight. Two representations: a dense
/// matrix of kernel values over the support box K, or a rank-one list
/// f -> sum_i <w1_i, f> w2_i.
class KernelOperator {
public:
    enum class Repr { Dense, RankOne };
    using RankOneTerm = std::pair<Field, Field>;  // (w1, w2)

    static KernelOperator dense(const GridSpec& g, const NodeBox& box,
                                std::vector<cplx> values);
    static KernelOperator dense_sampled(const GridSpec& g, const NodeBox& box,
                                        const std::function<Mat(int, int, int, int)>& w);
    static KernelOperator rank_one(std::vector<RankOneTerm> terms);

    Repr repr() const { return repr_; }
    const GridSpec& grid() const { return grid_; }
    /// Support box K (kernel values vanish outside K x K).
    const NodeBox& box() const { return box_; }
    Region support_region() const { return box_.region(grid_); }

    Field apply(const Field& f) const;
    KernelOperator adjoint() const;
    KernelOperator scaled(cplx s) const;

    /// Dense kernel value w(x,y) as an N x N block; zero outside K x K.
    Mat kernel_at(int pi, int pj, int qi, int qj) const;
    const std::vector<cplx>& dense_values() const { return values_; }
    const std::vector<RankOneTerm>& terms() const { return terms_; }

    /// Operator norm on the lattice L^2 (power iteration on W*W).
    double norm_estimate(unsigned seed = 7) const;

    /// True when the kernel is invariant under componentwise conjugation
    /// (real kernel values), so W commutes with C.
    bool commutes_with_conjugation() const;

    void dump_csv(const std::string& path) const;

private:
    Repr repr_ = Repr::Dense;
    GridSpec grid_;
    NodeBox box_{};
    std::vector<cplx> values_;        // dense: (nK*N)^2, row-major
    std::vector<RankOneTerm> terms_;  // rank-one list

    long dense_dim() const { return box_.count() * grid_.n_components; }
    long flat(int i, int j, int c) const {
        return (static_cast<long>(i - box_.i_lo) * box_.cols() + (j - box_.j_lo)) *
                   grid_.n_components +
               c;
    }
};

enum class Side { Left, Right };

/// Composition with a differential stencil: Left gives Q W (stencil applied
/// to the x-argument), Right gives W Q (adjoint stencil applied to the
/// y-argument, the discrete integration by parts). The support box dilates
/// by one stencil width.
KernelOperator compose_with_differential(const ThreeLevelStencil& q, const KernelOperator& w,
                                         Side side);

/// Smooth dense bump kernel: a few separable windowed-Gaussian modes,
/// optionally symmetrized (w(x,y) = w(y,x), making W = W* for real values),
/// renormalized so the operator norm equals `amp`. For N = 2 the kernel is a
/// real scalar profile times the identity, which keeps it compatible with
/// both the conjugation C and the Dirac adjoint conditions.
struct BumpKernelParams {
    NodeBox box{};
    int modes = 3;
    unsigned seed = 1;
    bool symmetric = true;
    double amp = 1.0;
};
KernelOperator make_bump_kernel(const GridSpec& g, const BumpKernelParams& p);

} // namespace nlhyp
