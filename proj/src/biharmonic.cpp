#include "ggdd/biharmonic.hpp"

#include "ggdd/complex_tools.hpp"
#include "ggdd/dense.hpp"
#include "ggdd/elliptic.hpp"
#include "ggdd/errors.hpp"
#include "ggdd/separable.hpp"

#include <Eigen/Eigenvalues>

#include <chrono>
#include <cmath>

namespace ggdd {

namespace {

using Vec = Eigen::VectorXd;

const SpacePtr& require_box_scalar(const Field& f, int dim) {
    const Grid& g = f.grid();
    if (g.periodic()) throw Error(ErrorKind::WrongMode, "biharmonic solvers need a box grid");
    if (g.dim != dim)
        throw Error(ErrorKind::BadSpacePairing, "method expects a " + std::to_string(dim) + "D grid");
    if (!f.space()->compatible(*spaces::U(g)))
        throw Error(ErrorKind::BadSpacePairing, "right-hand side must live on the mathring scalar space U");
    return f.space();
}

Vec concat(std::initializer_list<const Vec*> parts) {
    Eigen::Index n = 0;
    for (const Vec* p : parts) n += p->size();
    Vec out(n);
    Eigen::Index o = 0;
    for (const Vec* p : parts) {
        out.segment(o, p->size()) = *p;
        o += p->size();
    }
    return out;
}

KrylovOptions krylov_options(const BiharmonicOptions& opt, const std::string& stage, double factor = 1.0) {
    KrylovOptions k;
    k.tol = opt.tol * factor;
    k.maxit = opt.maxit;
    k.stage = stage;
    return k;
}

void tag(SolveReport& r, const Grid& g) { r.grid = g.describe(); }

// Basis of a finite subspace as dense columns, orthonormal in the space's weighted product.
Eigen::MatrixXd basis_columns(const FiniteSubspace& s) {
    Eigen::MatrixXd c(s.basis.front().values().size(), s.dim());
    for (int k = 0; k < s.dim(); ++k) c.col(k) = s.basis[static_cast<std::size_t>(k)].values();
    return c;
}

// The trace rows of u -> uI restricted to U, i.e. (uI)^*.
struct ScalarPart {
    OperatorHandle ui;
    OperatorHandle uit;
};

ScalarPart scalar_part(const Grid& g) {
    OperatorHandle ui = scalar_identity_map(g);
    return {ui, ui.adjoint()};
}

// Stage 3 of the split formulations: K u = -(uI)^*(pI + M0).
Field recover_u(const PoissonSolver& k, const ScalarPart& sp, const Vec& m, const SpacePtr& U,
                const BiharmonicOptions& opt, BiharmonicSolution& sol) {
    SolveReport rep;
    Vec u = k.solve(-sp.uit.apply(m), opt.tol * 1e-2, &rep, "u");
    tag(rep, U->grid());
    sol.reports.push_back(rep);
    return Field(U, u);
}

Field solve_p(const PoissonSolver& k, const Field& f, const BiharmonicOptions& opt, BiharmonicSolution& sol) {
    SolveReport rep;
    Vec p = k.solve(-f.values(), opt.tol * 1e-2, &rep, "p");
    tag(rep, f.grid());
    sol.reports.push_back(rep);
    return Field(f.space(), p);
}

BiharmonicSolution empty_solution(const std::string& method, const Field& f) {
    BiharmonicSolution s{method, Field(f.space()), {}, {}, {}, {}, {}, 0.0, 0.0, 0.0, {}};
    return s;
}

}  // namespace

double BiharmonicSolution::total_seconds() const {
    double t = 0.0;
    for (const auto& r : reports) t += r.seconds;
    return t;
}

OperatorHandle airy_map(const Grid& g) {
    if (g.dim != 2) throw Error(ErrorKind::BadSpacePairing, "the stress function map is two-dimensional");
    OperatorHandle a = assemble("airy", spaces::V2(g), spaces::S(g),
                                {{0, 0, 0, 1, 1.0, 1},
                                 {1, 1, 0, 0, 1.0, 0},
                                 {0, 1, 0, 0, -0.5, 1},
                                 {0, 1, 0, 1, -0.5, 0},
                                 {1, 0, 0, 0, -0.5, 1},
                                 {1, 0, 0, 1, -0.5, 0}});
    return a.with_adjoint("airy*");
}

OperatorHandle scalar_identity_map(const Grid& g) {
    OperatorHandle m = pointwise("uI", spaces::U(g), spaces::S(g),
                                 [](const Mat3& a) { return a(0, 0) * Mat3::identity(); });
    return m.with_adjoint("tr");
}

BiharmonicSolution solve_primal(const Field& f, const BiharmonicOptions& opt) {
    require_box_scalar(f, 3);
    BiharmonicSolution sol = empty_solution("primal", f);
    GradgradNormalSolver gs(f.grid());
    SolveReport rep;
    sol.u.values() = gs.solve(f.values(), opt.tol, &rep, "primal");
    tag(rep, f.grid());
    sol.reports.push_back(rep);
    return sol;
}

BiharmonicSolution solve_primal_2d(const Field& f, const BiharmonicOptions& opt) {
    require_box_scalar(f, 2);
    BiharmonicSolution sol = empty_solution("primal2d", f);
    GradgradNormalSolver gs(f.grid());
    SolveReport rep;
    sol.u.values() = gs.solve(f.values(), opt.tol, &rep, "primal2d");
    tag(rep, f.grid());
    sol.reports.push_back(rep);
    return sol;
}

BiharmonicSolution solve_mixed(const Field& f, const BiharmonicOptions& opt) {
    require_box_scalar(f, 3);
    const Grid& g = f.grid();
    BiharmonicSolution sol = empty_solution("mixed", f);
    const OperatorHandle G = build_composite(g, "Gradgrad");
    const OperatorHandle Gt = G.adjoint();
    const SpMat& gm = G.matrix();
    const SpMat& gtm = Gt.matrix();
    const Eigen::Index ns = G.codomain()->dof(), nu = G.domain()->dof();
    SeparableLaplacian sep(G.domain());
    auto a = [&](const Vec& x) -> Vec {
        Vec y(ns + nu);
        y.head(ns) = x.head(ns) + gm * x.tail(nu);
        y.tail(nu) = gtm * x.head(ns);
        return y;
    };
    auto prec = [&](const Vec& x) -> Vec {
        Vec y(ns + nu);
        y.head(ns) = x.head(ns);
        y.tail(nu) = sep.solve(x.tail(nu), 2);
        return y;
    };
    const Vec zero = Vec::Zero(ns);
    const Vec mf = -f.values();
    const Vec b = concat({&zero, &mf});
    const Vec w = concat({&G.codomain()->weights(), &G.domain()->weights()});
    Vec x;
    SolveReport rep = minres(a, b, x, w, prec, krylov_options(opt, "mixed", 1e-2));
    tag(rep, g);
    sol.reports.push_back(rep);
    sol.m = Field(G.codomain(), x.head(ns));
    sol.u.values() = x.tail(nu);
    return sol;
}

BiharmonicSolution solve_ddz(const Field& f, const BiharmonicOptions& opt) {
    require_box_scalar(f, 3);
    const Grid& g = f.grid();
    BiharmonicSolution sol = empty_solution("ddz", f);
    PoissonSolver k(g);
    const Field p = solve_p(k, f, opt, sol);
    const OperatorHandle G = build_composite(g, "Gradgrad");
    const SpMat& gm = G.matrix();
    const SpMat gtm = G.adjoint().matrix();
    const ScalarPart sp = scalar_part(g);
    const Eigen::Index ns = G.codomain()->dof(), nu = G.domain()->dof();
    SeparableLaplacian sep(G.domain());
    // M0 is the part of -pI orthogonal to the range of Gradgrad0, i.e. in the kernel of divDiv.
    auto a = [&](const Vec& x) -> Vec {
        Vec y(ns + nu);
        y.head(ns) = x.head(ns) + gm * x.tail(nu);
        y.tail(nu) = gtm * x.head(ns);
        return y;
    };
    auto prec = [&](const Vec& x) -> Vec {
        Vec y(ns + nu);
        y.head(ns) = x.head(ns);
        y.tail(nu) = sep.solve(x.tail(nu), 2);
        return y;
    };
    const Vec pi = sp.ui.apply(p.values());
    const Vec mpi = -pi;
    const Vec zero = Vec::Zero(nu);
    const Vec b = concat({&mpi, &zero});
    const Vec w = concat({&G.codomain()->weights(), &G.domain()->weights()});
    Vec x;
    SolveReport rep = minres(a, b, x, w, prec, krylov_options(opt, "M0", 1e-2));
    tag(rep, g);
    sol.reports.push_back(rep);
    const Vec m0 = x.head(ns);
    const Vec m = pi + m0;
    sol.u = recover_u(k, sp, m, G.domain(), opt, sol);
    sol.p = p;
    sol.m0 = Field(G.codomain(), m0);
    sol.m = Field(G.codomain(), m);
    return sol;
}

BiharmonicSolution solve_decomposed(const Field& f, const BiharmonicOptions& opt) {
    require_box_scalar(f, 3);
    const Grid& g = f.grid();
    BiharmonicSolution sol = empty_solution("decomposed", f);
    PoissonSolver k(g);
    const Field p = solve_p(k, f, opt, sol);
    const OperatorHandle R = build_composite(g, "symRot");   // T -> S
    const OperatorHandle D = build_composite(g, "devGrad");  // V -> T
    const SpMat& rm = R.matrix();
    const SpMat rtm = R.adjoint().matrix();
    const SpMat& dm = D.matrix();
    const SpMat dtm = D.adjoint().matrix();
    const Eigen::MatrixXd c = basis_columns(make_RT0(D.domain()));
    const Vec& wv = D.domain()->weights();
    const Eigen::Index ne = R.domain()->dof(), nv = D.domain()->dof(), nc = c.cols();
    const ScalarPart sp = scalar_part(g);
    SeparableLaplacian sep(R.domain(), 1.0);
    auto a = [&](const Vec& x) -> Vec {
        Vec y(ne + nv + nc);
        const auto e = x.head(ne);
        const auto v = x.segment(ne, nv);
        const auto mu = x.tail(nc);
        y.head(ne) = rtm * (rm * e) + dm * v;
        y.segment(ne, nv) = dtm * e + c * mu;
        y.tail(nc) = c.transpose() * (wv.asDiagonal() * v);
        return y;
    };
    auto prec = [&](const Vec& x) -> Vec {
        Vec y = x;
        y.head(ne) = sep.solve(x.head(ne));
        return y;
    };
    const Vec pi = sp.ui.apply(p.values());
    Vec b = Vec::Zero(ne + nv + nc);
    b.head(ne) = -(rtm * pi);
    const Vec ones = Vec::Ones(nc);
    const Vec w = concat({&R.domain()->weights(), &wv, &ones});
    Vec x;
    SolveReport rep = minres(a, b, x, w, prec, krylov_options(opt, "E,v", 1e-2));
    tag(rep, g);
    sol.reports.push_back(rep);
    const Vec e = x.head(ne);
    const Vec v = x.segment(ne, nv);
    const Vec m0 = rm * e;
    sol.u = recover_u(k, sp, Vec(pi + m0), f.space(), opt, sol);
    sol.p = p;
    sol.e = Field(R.domain(), e);
    sol.v = Field(D.domain(), v);
    sol.m0 = Field(R.codomain(), m0);
    sol.m = Field(R.codomain(), Vec(pi + m0));
    sol.e_norm = norm(*sol.e);
    sol.v_norm = norm(*sol.v);
    return sol;
}

BiharmonicSolution solve_decomposed_2d(const Field& f, const BiharmonicOptions& opt) {
    require_box_scalar(f, 2);
    const Grid& g = f.grid();
    BiharmonicSolution sol = empty_solution("decomposed2d", f);
    PoissonSolver k(g);
    const Field p = solve_p(k, f, opt, sol);
    const OperatorHandle A = airy_map(g);
    const SpMat& am = A.matrix();
    const SpMat atm = A.adjoint().matrix();
    const Eigen::MatrixXd c = basis_columns(make_RM(A.domain()));
    const Vec& wv = A.domain()->weights();
    const Eigen::Index nv = A.domain()->dof(), nc = c.cols();
    const ScalarPart sp = scalar_part(g);
    SeparableLaplacian sep(A.domain(), 1.0);
    auto a = [&](const Vec& x) -> Vec {
        Vec y(nv + nc);
        y.head(nv) = atm * (am * x.head(nv)) + c * x.tail(nc);
        y.tail(nc) = c.transpose() * (wv.asDiagonal() * x.head(nv));
        return y;
    };
    auto prec = [&](const Vec& x) -> Vec {
        Vec y = x;
        y.head(nv) = sep.solve(x.head(nv));
        return y;
    };
    const Vec pi = sp.ui.apply(p.values());
    Vec b = Vec::Zero(nv + nc);
    b.head(nv) = -(atm * pi);
    const Vec ones = Vec::Ones(nc);
    const Vec w = concat({&wv, &ones});
    Vec x;
    SolveReport rep = minres(a, b, x, w, prec, krylov_options(opt, "elasticity", 1e-2));
    tag(rep, g);
    sol.reports.push_back(rep);
    const Vec v = x.head(nv);
    const Vec r = b.head(nv) - atm * (am * v);
    const double bn = std::max(weighted_norm(*A.domain(), b.head(nv)), 1e-300);
    sol.rm_defect = (c.transpose() * (wv.asDiagonal() * r)).cwiseAbs().maxCoeff() / bn;
    const Vec m0 = am * v;
    sol.u = recover_u(k, sp, Vec(pi + m0), f.space(), opt, sol);
    sol.p = p;
    sol.v = Field(A.domain(), v);
    sol.m0 = Field(A.codomain(), m0);
    sol.m = Field(A.codomain(), Vec(pi + m0));
    sol.v_norm = norm(*sol.v);
    return sol;
}

bool method_is_2d(const std::string& method) { return method == "decomposed2d" || method == "primal2d"; }

BiharmonicSolution solve_by_name(const std::string& method, const Field& f, const BiharmonicOptions& opt) {
    if (method == "primal") return solve_primal(f, opt);
    if (method == "mixed") return solve_mixed(f, opt);
    if (method == "ddz") return solve_ddz(f, opt);
    if (method == "decomposed") return solve_decomposed(f, opt);
    if (method == "decomposed2d") return solve_decomposed_2d(f, opt);
    if (method == "primal2d") return solve_primal_2d(f, opt);
    throw Error(ErrorKind::InvalidArgument, "unknown method " + method);
}

InfSupResult check_infsup(const Grid& g, int probes) {
    if (g.periodic() || g.dim != 3) throw Error(ErrorKind::WrongMode, "inf-sup check needs a 3D box grid");
    const OperatorHandle G = build_composite(g, "Gradgrad");
    const OperatorHandle grad0 = build_first_order(g, "grad", BcKind::Mathring);
    const Eigen::Index nu = G.domain()->dof();
    if (static_cast<double>(nu) > 4096.0) throw Error(ErrorKind::GridTooLarge, "inf-sup check is dense; use n <= 16");
    const Vec& w = G.domain()->weights();
    // Symmetric forms W K and W G*G on U.
    const Eigen::MatrixXd gd = Eigen::MatrixXd(G.matrix());
    const Eigen::MatrixXd dd = Eigen::MatrixXd(grad0.matrix());
    const Eigen::MatrixXd q = gd.transpose() * G.codomain()->weights().asDiagonal() * gd;
    const Eigen::MatrixXd kk = dd.transpose() * grad0.codomain()->weights().asDiagonal() * dd;
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(kk, q, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw Error(ErrorKind::NoConvergence, "generalized eigenproblem failed");
    InfSupResult r;
    r.value = 1.0 / std::sqrt(1.0 + es.eigenvalues().maxCoeff());
    r.c_g = estimate_constant("c_g", g).value;
    r.bound = 1.0 / std::sqrt(3.0 * r.c_g * r.c_g + 1.0);

    // Quotient at M = -phi I: <divDiv M, phi> / (|M|_{divDiv} |grad phi|), with the H^-1 norm through K.
    PoissonSolver k(g);
    const OperatorHandle ui = scalar_identity_map(g);
    const OperatorHandle gt = G.adjoint();
    r.test_quotient = std::numeric_limits<double>::infinity();
    for (int t = 0; t < probes; ++t) {
        const Vec phi = t == 0 ? Vec(random_smooth_field(G.domain(), 77, 1).values())
                               : random_vector(static_cast<std::size_t>(nu), 900 + static_cast<std::uint64_t>(t));
        const Vec m = -ui.apply(phi);
        const Vec dm = gt.apply(m);
        const double num = wdot(w, dm, phi);
        const double hm1 = wdot(w, dm, k.solve(dm, 1e-12));
        const double mnorm = std::sqrt(weighted_norm(*G.codomain(), m) * weighted_norm(*G.codomain(), m) + hm1);
        const double gphi = weighted_norm(*grad0.codomain(), grad0.apply(phi));
        r.test_quotient = std::min(r.test_quotient, num / (mnorm * gphi));
    }
    return r;
}

}  // namespace ggdd
