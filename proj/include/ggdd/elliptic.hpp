#pragma once

#include "ggdd/diffops.hpp"
#include "ggdd/krylov.hpp"
#include "ggdd/separable.hpp"

namespace ggdd {

LinOp as_linop(const OperatorHandle& a);

// K = grad0* grad0 = -Δ0 on the mathring scalars U of a box (or the periodic scalars, with a unit shift).
class PoissonSolver {
public:
    explicit PoissonSolver(const Grid& g);
    const OperatorHandle& grad() const { return grad_; }
    Eigen::VectorXd apply(const Eigen::VectorXd& u) const;
    // CG preconditioned by the separable direct solver.
    Eigen::VectorXd solve(const Eigen::VectorXd& rhs, double tol, SolveReport* rep = nullptr,
                          const std::string& stage = "poisson") const;
    const SeparableLaplacian& separable() const { return sep_; }

private:
    OperatorHandle grad_;
    OperatorHandle grad_adj_;
    SeparableLaplacian sep_;
};

// G* G u = rhs for G = Gradgrad0, PCG preconditioned with K^{-2}.
class GradgradNormalSolver {
public:
    explicit GradgradNormalSolver(const Grid& g);
    const OperatorHandle& op() const { return gg_; }
    Eigen::VectorXd apply(const Eigen::VectorXd& u) const;
    Eigen::VectorXd solve(const Eigen::VectorXd& rhs, double tol, SolveReport* rep = nullptr,
                          const std::string& stage = "primal") const;

private:
    OperatorHandle gg_;
    OperatorHandle gg_adj_;
    SeparableLaplacian sep_;
};

}  // namespace ggdd
