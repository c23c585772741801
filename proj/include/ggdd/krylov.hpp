#pragma once

#include <Eigen/Core>

#include <functional>
#include <string>

namespace ggdd {

using LinOp = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

struct SolveReport {
    std::string method;
    std::string stage;
    int iterations = 0;
    double rel_residual = 0.0;
    double seconds = 0.0;
    double tol = 0.0;
    std::string grid;
    bool converged = false;
    // CGLS only: the least-squares residual stopped decreasing above tol.
    bool plateau = false;
};

struct KrylovOptions {
    double tol = 1e-10;
    int maxit = 0;  // 0 picks a size-based default
    bool check_symmetry = true;
    bool throw_on_failure = true;
    std::string stage;
    // CGLS only: converge on |A* r| / max(|A* b|, |A| |b|) instead of |r| / |b|.
    bool least_squares = false;
};

// All inner products are diagonal-weighted, <x,y> = sum w_i x_i y_i; an empty weight vector means Euclidean.
// A and the preconditioner must be self-adjoint in that product (checked on 3 probes when requested).
SolveReport cg(const LinOp& a, const Eigen::VectorXd& b, Eigen::VectorXd& x, const Eigen::VectorXd& w,
               const LinOp& precond, const KrylovOptions& opt);
SolveReport minres(const LinOp& a, const Eigen::VectorXd& b, Eigen::VectorXd& x, const Eigen::VectorXd& w,
                   const LinOp& precond, const KrylovOptions& opt);
// Minimum-norm least squares for A: (dom, wd) -> (cod, wc) with weighted adjoint at; x starts at zero.
SolveReport cgls(const LinOp& a, const LinOp& at, const Eigen::VectorXd& b, Eigen::VectorXd& x,
                 const Eigen::VectorXd& wd, const Eigen::VectorXd& wc, const KrylovOptions& opt);

double symmetry_defect(const LinOp& a, Eigen::Index n, const Eigen::VectorXd& w, std::uint64_t seed);
double wdot(const Eigen::VectorXd& w, const Eigen::VectorXd& x, const Eigen::VectorXd& y);

}  // namespace ggdd
