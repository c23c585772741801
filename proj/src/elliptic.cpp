#include "ggdd/elliptic.hpp"

namespace ggdd {

LinOp as_linop(const OperatorHandle& a) {
    auto m = std::make_shared<const SpMat>(a.matrix());
    return [m](const Eigen::VectorXd& x) -> Eigen::VectorXd { return *m * x; };
}

PoissonSolver::PoissonSolver(const Grid& g)
    : grad_(build_first_order(g, "grad", BcKind::Mathring)),
      grad_adj_(grad_.adjoint()),
      sep_(grad_.domain(), g.periodic() ? 1.0 : 0.0) {}

Eigen::VectorXd PoissonSolver::apply(const Eigen::VectorXd& u) const {
    Eigen::VectorXd r = grad_adj_.matrix() * (grad_.matrix() * u);
    if (grad_.domain()->grid().periodic()) r += u;
    return r;
}

Eigen::VectorXd PoissonSolver::solve(const Eigen::VectorXd& rhs, double tol, SolveReport* rep,
                                     const std::string& stage) const {
    KrylovOptions opt;
    opt.tol = tol;
    opt.stage = stage;
    opt.check_symmetry = false;
    Eigen::VectorXd x = sep_.solve(rhs);
    SolveReport r = cg([this](const Eigen::VectorXd& v) { return apply(v); }, rhs, x, grad_.domain()->weights(),
                       [this](const Eigen::VectorXd& v) { return sep_.solve(v); }, opt);
    if (rep) *rep = r;
    return x;
}

GradgradNormalSolver::GradgradNormalSolver(const Grid& g)
    : gg_(build_composite(g, "Gradgrad")), gg_adj_(gg_.adjoint()), sep_(gg_.domain(), g.periodic() ? 1.0 : 0.0) {}

Eigen::VectorXd GradgradNormalSolver::apply(const Eigen::VectorXd& u) const {
    return gg_adj_.matrix() * (gg_.matrix() * u);
}

Eigen::VectorXd GradgradNormalSolver::solve(const Eigen::VectorXd& rhs, double tol, SolveReport* rep,
                                            const std::string& stage) const {
    KrylovOptions opt;
    opt.tol = tol;
    opt.stage = stage;
    opt.check_symmetry = false;
    Eigen::VectorXd x = Eigen::VectorXd::Zero(rhs.size());
    SolveReport r = cg([this](const Eigen::VectorXd& v) { return apply(v); }, rhs, x, gg_.domain()->weights(),
                       [this](const Eigen::VectorXd& v) { return sep_.solve(v, 2); }, opt);
    if (rep) *rep = r;
    return x;
}

}  // namespace ggdd
