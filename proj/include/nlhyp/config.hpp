#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "nlhyp/perturbed.hpp"
#include "nlhyp/report.hpp"
#include "nlhyp/star.hpp"

namespace nlhyp {

/// Configuration problems exit with status 2, distinct from failed checks.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Parsed run configuration: a single JSON file holding the grid, the
/// operator and kernel presets, and the coupling parameters. All defaults
/// are materialized at load time and echoed into reports for provenance.
struct RunConfig {
    // grid
    double t_min = -3.5, t_max = 3.5;
    double x_half_width = 10.0;
    double dt = 0.125;
    double tau_minus = -2.0, tau_plus = 2.0;

    // operator
    OperatorKind kind = OperatorKind::Wave;
    PotentialSpec potential;

    // kernel
    enum class KernelType { Bump, RankOne, Moyal, LocalNC };
    KernelType kernel_type = KernelType::Bump;
    // bump / rank1 support box in physical coordinates
    double box_t_lo = -0.3, box_t_hi = 0.3, box_x_lo = -1.25, box_x_hi = 1.25;
    int modes = 3;
    double amp = 1.0;
    bool symmetric = true;
    StarProductSpec star;  // moyal / local-nc parameters
    double eps = 0.1;      // 0 selects the limit kernel where available

    // perturbation
    std::optional<double> lambda_abs;  // explicit coupling
    double lambda_rel = 0.5;           // otherwise lambda = lambda_rel * lambda0
    PerturbedOptions opts;
    int strip_steps = 4;  // Moller generator strips beyond tau-+

    unsigned seed = 1;

    /// Parse from a JSON file; throws std::runtime_error with a
    /// line-numbered diagnostic on malformed input.
    static RunConfig load(const std::string& path);

    /// Halve the resolution for --grid-scale small.
    void apply_grid_scale(const std::string& scale);

    GridSpec make_grid() const;
    HyperbolicOperator make_operator(const GridSpec& g) const;
    KernelOperator make_kernel(const GridSpec& g) const;
    /// Builds the system and resolves the coupling (lambda_rel * lambda0
    /// unless an explicit lambda was given).
    PerturbedSystem make_system(const HyperbolicOperator& op, const KernelOperator& w) const;

    NodeBox kernel_box(const GridSpec& g) const;
    void echo(Report& into) const;
};

} // namespace nlhyp
