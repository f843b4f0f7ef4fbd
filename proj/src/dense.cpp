#include "nlhyp/dense.hpp"

#include <stdexcept>

#include "nlhyp/parallel.hpp"

namespace nlhyp {

NodeList::NodeList(const Region& r) : grid_(r.grid()) {
    for (int i = 0; i < grid_.nt; ++i)
        for (int j = 0; j < grid_.nx; ++j)
            if (r.contains(i, j)) nodes_.emplace_back(i, j);
}

Eigen::VectorXcd NodeList::to_vector(const Field& f) const {
    const int N = grid_.n_components;
    Eigen::VectorXcd v(dim());
    for (long k = 0; k < size(); ++k)
        for (int c = 0; c < N; ++c)
            v[k * N + c] = f.at(nodes_[k].first, nodes_[k].second, c);
    return v;
}

Field NodeList::to_field(const Eigen::VectorXcd& v) const {
    const int N = grid_.n_components;
    if (v.size() != dim()) throw std::invalid_argument("NodeList::to_field: size mismatch");
    Field f(grid_);
    for (long k = 0; k < size(); ++k)
        for (int c = 0; c < N; ++c)
            f.at(nodes_[k].first, nodes_[k].second, c) = v[k * N + c];
    return f;
}

Eigen::MatrixXcd assemble_dense(const FieldMap& op, const NodeList& domain,
                                const NodeList& range, bool enforce_cap) {
    if (enforce_cap && domain.size() > kDenseNodeCap)
        throw std::runtime_error("assemble_dense: domain exceeds the 33x65 dense cap");
    Eigen::MatrixXcd m(range.dim(), domain.dim());
    const long cols = domain.dim();
    parallel_for(cols, [&](long col) {
        Eigen::VectorXcd e = Eigen::VectorXcd::Zero(cols);
        e[col] = cplx(1.0);
        Field basis = domain.to_field(e);
        m.col(col) = range.to_vector(op(basis));
    });
    return m;
}

double largest_singular_value(const Eigen::MatrixXcd& m) {
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(m);
    return svd.singularValues()(0);
}

double smallest_singular_value(const Eigen::MatrixXcd& m) {
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(m);
    return svd.singularValues()(svd.singularValues().size() - 1);
}

} // namespace nlhyp
