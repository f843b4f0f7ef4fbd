#pragma once

#include <Eigen/Dense>

#include "nlhyp/linops.hpp"

namespace nlhyp {

/// Dense paths are capped at 33 x 65 slice nodes; larger systems run
/// matrix-free only and SVD-based checks are skipped.
constexpr long kDenseNodeCap = 33L * 65L;

/// Scan-ordered node list of a region, for moving fields in and out of dense
/// vectors (component-major within each node).
class NodeList {
public:
    explicit NodeList(const Region& r);
    const GridSpec& grid() const { return grid_; }
    long size() const { return static_cast<long>(nodes_.size()); }
    long dim() const { return size() * grid_.n_components; }

    Eigen::VectorXcd to_vector(const Field& f) const;
    Field to_field(const Eigen::VectorXcd& v) const;

private:
    GridSpec grid_;
    std::vector<std::pair<int, int>> nodes_;
};

/// Matrix of a linear field map with inputs spanning `domain` and outputs
/// sampled on `range`. Throws when the domain exceeds the dense cap unless
/// `enforce_cap` is disabled (tests only).
Eigen::MatrixXcd assemble_dense(const FieldMap& op, const NodeList& domain,
                                const NodeList& range, bool enforce_cap = true);

double largest_singular_value(const Eigen::MatrixXcd& m);
double smallest_singular_value(const Eigen::MatrixXcd& m);

} // namespace nlhyp
