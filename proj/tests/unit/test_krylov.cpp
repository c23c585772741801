#include "doctest.h"

#include "ggdd/elliptic.hpp"
#include "ggdd/errors.hpp"

using namespace ggdd;

TEST_CASE("cg on the mathring Laplacian") {
    const Grid g = Grid::box(16);
    PoissonSolver k(g);
    const auto& w = k.grad().domain()->weights();
    const Eigen::VectorXd x0 = random_vector(w.size(), 3);
    const Eigen::VectorXd b = k.apply(x0);
    Eigen::VectorXd x;
    KrylovOptions opt;
    opt.tol = 1e-10;
    const SolveReport r = cg([&](const Eigen::VectorXd& v) { return k.apply(v); }, b, x, w, {}, opt);
    CHECK(r.converged);
    CHECK(r.iterations < 200);
    CHECK(r.rel_residual <= 1e-10);
    CHECK(std::sqrt(wdot(w, x - x0, x - x0) / wdot(w, x0, x0)) < 1e-6);

    Eigen::VectorXd z;
    const SolveReport rz = cg([&](const Eigen::VectorXd& v) { return k.apply(v); }, Eigen::VectorXd::Zero(w.size()), z, w, {}, opt);
    CHECK(rz.iterations == 0);
    CHECK(z.norm() == 0.0);

    // the separable preconditioner is exact on U
    const SolveReport rp = cg([&](const Eigen::VectorXd& v) { return k.apply(v); }, b, x, w,
                              [&](const Eigen::VectorXd& v) { return k.separable().solve(v); }, opt);
    CHECK(rp.iterations <= 2);
}

TEST_CASE("minres on a symmetric indefinite system") {
    const Eigen::Index n = 60;
    Eigen::VectorXd d(n);
    for (Eigen::Index i = 0; i < n; ++i) d[i] = (i % 2 ? -1.0 : 1.0) * (1.0 + static_cast<double>(i));
    auto a = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd { return d.cwiseProduct(v); };
    const Eigen::VectorXd b = random_vector(static_cast<std::size_t>(n), 8);
    Eigen::VectorXd x;
    KrylovOptions opt;
    const SolveReport r = minres(a, b, x, Eigen::VectorXd(), {}, opt);
    CHECK(r.converged);
    CHECK((d.cwiseProduct(x) - b).norm() <= 1e-10 * b.norm());
}

TEST_CASE("solver failures are reported") {
    const Eigen::Index n = 20;
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n);
    m(0, 1) = 0.5;
    auto a = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd { return m * v; };
    Eigen::VectorXd x;
    KrylovOptions opt;
    const Eigen::VectorXd b = Eigen::VectorXd::Ones(n);
    try {
        cg(a, b, x, Eigen::VectorXd(), {}, opt);
        FAIL("non-symmetric operator accepted");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NonSymmetricOperator);
    }

    PoissonSolver k(Grid::box(12));
    const auto& w = k.grad().domain()->weights();
    opt.maxit = 3;
    try {
        cg([&](const Eigen::VectorXd& v) { return k.apply(v); }, random_vector(w.size(), 1), x, w, {}, opt);
        FAIL("three iterations reported as converged");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NoConvergence);
    }
}

TEST_CASE("cgls finds minimum-norm preimages and flags plateaus") {
    const Grid g = Grid::box(6);
    const auto grad = build_first_order(g, "grad", BcKind::Free);  // cells -> faces, kernel = constants
    const auto gt = grad.adjoint();
    const Eigen::VectorXd u0 = random_smooth_field(grad.domain(), 2, 1).values();
    const Eigen::VectorXd y = grad.apply(u0);
    Eigen::VectorXd x;
    KrylovOptions opt;
    opt.tol = 1e-10;
    const SolveReport r = cgls(as_linop(grad), as_linop(gt), y, x, grad.domain()->weights(), grad.codomain()->weights(), opt);
    CHECK(r.converged);
    const auto one = make_R(grad.domain()).basis[0];
    CHECK(std::abs(weighted_dot(*grad.domain(), x, one.values())) < 1e-10);

    const auto rot = build_first_order(g, "rot", BcKind::Mathring);
    const Eigen::VectorXd outside = grad.apply(random_vector(grad.domain()->dof(), 3));  // orthogonal to rot0 range
    opt.throw_on_failure = false;
    const auto rt = rot.adjoint();
    const SolveReport p = cgls(as_linop(rot), as_linop(rt), outside, x, rot.domain()->weights(), rot.codomain()->weights(), opt);
    CHECK_FALSE(p.converged);
    CHECK(p.plateau);
}
