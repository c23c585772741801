#include "ggdd/separable.hpp"

#include "ggdd/errors.hpp"

#include <limits>

namespace ggdd {

namespace {

Eigen::MatrixXd second_difference(const Grid& g, int axis, Stagger s) {
    const int m = stagger_size(g, axis, s);
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m, m);
    if (s == Stagger::Flat) return a;
    const double h2 = 1.0 / (g.h(axis) * g.h(axis));
    for (int k = 0; k < m; ++k) {
        a(k, k) = 2.0 * h2;
        if (k > 0) a(k, k - 1) = -h2;
        if (k + 1 < m) a(k, k + 1) = -h2;
    }
    switch (s) {
        case Stagger::Full:
            a(0, 0) = 2.0 * h2;
            a(0, 1) = -2.0 * h2;
            a(m - 1, m - 1) = 2.0 * h2;
            a(m - 1, m - 2) = -2.0 * h2;
            break;
        case Stagger::Half:
            a(0, 0) = h2;
            a(m - 1, m - 1) = h2;
            break;
        case Stagger::Node:
        case Stagger::HalfP:
            a(0, m - 1) += -h2;
            a(m - 1, 0) += -h2;
            break;
        default:
            break;
    }
    return a;
}

}  // namespace

void apply_along_axis(double* data, const std::array<int, 3>& shape, int axis, const Eigen::MatrixXd& m) {
    const int n = shape[axis];
    if (m.rows() != n || m.cols() != n) throw Error(ErrorKind::DimMismatch, "axis transform size mismatch");
    if (n == 1) {
        const double f = m(0, 0);
        const std::size_t total = static_cast<std::size_t>(shape[0]) * shape[1] * shape[2];
        for (std::size_t i = 0; i < total; ++i) data[i] *= f;
        return;
    }
    const std::size_t stride = axis == 0 ? 1 : axis == 1 ? static_cast<std::size_t>(shape[0])
                                                         : static_cast<std::size_t>(shape[0]) * shape[1];
    const int o1 = axis == 0 ? 1 : 0;
    const int o2 = axis == 2 ? 1 : 2;
    const std::size_t s1 = o1 == 0 ? 1 : static_cast<std::size_t>(shape[0]);
    const std::size_t s2 = o2 == 1 ? static_cast<std::size_t>(shape[0])
                                   : static_cast<std::size_t>(shape[0]) * shape[1];
    Eigen::VectorXd line(n), out(n);
    for (int b = 0; b < shape[o2]; ++b)
        for (int a = 0; a < shape[o1]; ++a) {
            double* base = data + a * s1 + b * s2;
            for (int k = 0; k < n; ++k) line[k] = base[k * stride];
            out.noalias() = m * line;
            for (int k = 0; k < n; ++k) base[k * stride] = out[k];
        }
}

SeparableLaplacian::SeparableLaplacian(SpacePtr sp, double shift) : space_(std::move(sp)), shift_(shift) {
    const Grid& g = space_->grid();
    for (const auto& c : space_->comps()) {
        Comp cc{c.shape, c.offset, {0, 0, 0}};
        for (int a = 0; a < 3; ++a) {
            const std::pair<int, int> key{a, static_cast<int>(c.layout[a])};
            int found = -1;
            for (const auto& [k, idx] : cache_)
                if (k == key) found = idx;
            if (found < 0) {
                Axis ax;
                ax.op = second_difference(g, a, c.layout[a]);
                const int m = static_cast<int>(ax.op.rows());
                Eigen::VectorXd w(m);
                for (int k = 0; k < m; ++k) w[k] = a < g.dim ? stagger_weight(g, a, c.layout[a], k) : 1.0;
                const Eigen::VectorXd ws = w.cwiseSqrt();
                Eigen::MatrixXd sym = ws.asDiagonal() * ax.op * ws.cwiseInverse().asDiagonal();
                sym = 0.5 * (sym + sym.transpose()).eval();
                Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
                ax.lambda = es.eigenvalues();
                ax.to_eig = es.eigenvectors().transpose() * ws.asDiagonal();
                ax.from_eig = ws.cwiseInverse().asDiagonal() * es.eigenvectors();
                found = static_cast<int>(axes_.size());
                axes_.push_back(std::move(ax));
                cache_.push_back({key, found});
            }
            cc.axis[a] = found;
        }
        comps_.push_back(cc);
    }
}

Eigen::VectorXd SeparableLaplacian::apply(const Eigen::VectorXd& x) const {
    Eigen::VectorXd y = shift_ * x;
    for (const auto& c : comps_)
        for (int a = 0; a < 3; ++a) {
            Eigen::VectorXd t = x.segment(static_cast<Eigen::Index>(c.offset),
                                          static_cast<Eigen::Index>(c.shape[0]) * c.shape[1] * c.shape[2]);
            apply_along_axis(t.data(), c.shape, a, axes_[static_cast<std::size_t>(c.axis[a])].op);
            y.segment(static_cast<Eigen::Index>(c.offset), t.size()) += t;
        }
    return y;
}

Eigen::VectorXd SeparableLaplacian::solve(const Eigen::VectorXd& x, int power) const {
    Eigen::VectorXd y = x;
    for (const auto& c : comps_) {
        double* d = y.data() + c.offset;
        for (int a = 0; a < 3; ++a) apply_along_axis(d, c.shape, a, axes_[static_cast<std::size_t>(c.axis[a])].to_eig);
        const auto& l0 = axes_[static_cast<std::size_t>(c.axis[0])].lambda;
        const auto& l1 = axes_[static_cast<std::size_t>(c.axis[1])].lambda;
        const auto& l2 = axes_[static_cast<std::size_t>(c.axis[2])].lambda;
        std::size_t idx = 0;
        for (int k = 0; k < c.shape[2]; ++k)
            for (int j = 0; j < c.shape[1]; ++j)
                for (int i = 0; i < c.shape[0]; ++i) {
                    const double lam = l0[i] + l1[j] + l2[k] + shift_;
                    if (lam <= 1e-14 * std::max(1.0, std::abs(l0[l0.size() - 1])))
                        throw Error(ErrorKind::InvalidArgument, "separable operator is singular; add a shift");
                    d[idx++] /= std::pow(lam, power);
                }
        for (int a = 0; a < 3; ++a)
            apply_along_axis(d, c.shape, a, axes_[static_cast<std::size_t>(c.axis[a])].from_eig);
    }
    return y;
}

double SeparableLaplacian::min_eigenvalue() const {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& c : comps_) {
        double s = shift_;
        for (int a = 0; a < 3; ++a) s += axes_[static_cast<std::size_t>(c.axis[a])].lambda.minCoeff();
        best = std::min(best, s);
    }
    return best;
}

}  // namespace ggdd
