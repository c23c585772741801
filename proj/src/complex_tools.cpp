#include "ggdd/complex_tools.hpp"

#include "ggdd/dense.hpp"
#include "ggdd/elliptic.hpp"
#include "ggdd/errors.hpp"

#include <cmath>

namespace ggdd {

namespace {

constexpr double kNull = 1e-8;
constexpr double kMaxDenseEntries = 2.0e7;

OperatorHandle embed(const SpacePtr& from, const SpacePtr& to) {
    return pointwise("embed", from, to, [](const Mat3& m) { return m; });
}

OperatorHandle sym_op(const SpacePtr& from, const SpacePtr& to) {
    return pointwise("sym", from, to, [](const Mat3& m) { return sym(m); });
}

OperatorHandle dev_op(const SpacePtr& from, const SpacePtr& to) {
    return pointwise("dev", from, to, [](const Mat3& m) { return dev(m); });
}

// Least-squares preimage used inside composed chains (range membership is certified at the end).
Eigen::VectorXd ls_solve(const OperatorHandle& a, const Eigen::VectorXd& y, double tol, const std::string& stage) {
    KrylovOptions opt;
    opt.tol = tol;
    opt.least_squares = true;
    opt.stage = stage;
    opt.throw_on_failure = false;
    Eigen::VectorXd x;
    const OperatorHandle at = a.has_adjoint() ? a.adjoint() : a.with_adjoint().adjoint();
    SolveReport rep = cgls(as_linop(a), as_linop(at), y, x, a.domain()->weights(), a.codomain()->weights(), opt);
    if (!rep.converged)
        throw Error(ErrorKind::SolverStall, stage + ": least-squares solve stalled at " +
                                                sci(rep.rel_residual));
    return x;
}

double rel_norm(const Space& s, const Eigen::VectorXd& x, double ref) {
    return ref > 0.0 ? weighted_norm(s, x) / ref : weighted_norm(s, x);
}

DecompositionResult finish(const Field& input, std::vector<DecompositionPart> parts) {
    DecompositionResult r;
    const std::size_t n = parts.size();
    r.gram = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    const double in2 = std::max(inner_product(input, input), 1e-300);
    Field sum(input.space());
    for (std::size_t i = 0; i < n; ++i) {
        parts[i].norm = norm(parts[i].field);
        sum += parts[i].field;
        for (std::size_t j = 0; j < n; ++j) {
            const double v = inner_product(parts[i].field, parts[j].field);
            r.gram(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
            if (i != j) r.orthogonality_max = std::max(r.orthogonality_max, std::abs(v) / in2);
        }
    }
    sum -= input;
    r.reconstruction_residual = norm(sum) / std::sqrt(in2);
    r.parts = std::move(parts);
    return r;
}

int small_harmonic_dim(const ComplexDescriptor& c, int pos) {
    try {
        return cohomology_dim(c, pos);
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::GridTooLarge) return -1;
        throw;
    }
}

void require_space(const Field& f, const SpacePtr& expected, const std::string& what) {
    if (!f.space()->compatible(*expected))
        throw Error(ErrorKind::BadSpacePairing, what + " expects a field on " + expected->name() + ", got " +
                                                    f.space()->name());
}

}  // namespace

ComplexDescriptor make_complex(const std::string& name, const Grid& g) {
    ComplexDescriptor c{name, g, {}};
    if (name == "derham-mathring" || name == "derham") {
        c.name = "derham-mathring";
        c.ops = {build_first_order(g, "grad", BcKind::Mathring), build_first_order(g, "rot", BcKind::Mathring),
                 build_first_order(g, "div", BcKind::Mathring)};
    } else if (name == "derham-free") {
        c.ops = {build_first_order(g, "grad", BcKind::Free), build_first_order(g, "rot", BcKind::Free),
                 build_first_order(g, "div", BcKind::Free)};
    } else if (name == "gradgrad-mathring" || name == "gradgrad") {
        c.name = "gradgrad-mathring";
        c.ops = {build_composite(g, "Gradgrad"), build_composite(g, "RotS"), build_composite(g, "DivT")};
    } else if (name == "divdiv-dual" || name == "divdiv") {
        c.name = "divdiv-dual";
        c.ops = {build_composite(g, "devGrad"), build_composite(g, "symRot"), build_composite(g, "divDiv")};
    } else {
        throw Error(ErrorKind::InvalidArgument, "unknown complex " + name);
    }
    for (std::size_t k = 0; k + 1 < c.ops.size(); ++k)
        if (!c.ops[k].codomain()->compatible(*c.ops[k + 1].domain()))
            throw Error(ErrorKind::BadSpacePairing, "complex " + c.name + " has mismatched spaces");
    return c;
}

double complex_defect(const ComplexDescriptor& c, int trials, std::uint64_t seed) {
    double worst = 0.0;
    for (std::size_t k = 0; k + 1 < c.ops.size(); ++k) {
        const auto& a = c.ops[k];
        const auto& b = c.ops[k + 1];
        const double na = estimate_norm(a), nb = estimate_norm(b);
        for (int t = 0; t < trials; ++t) {
            Eigen::VectorXd x = random_vector(a.domain()->dof(), seed + static_cast<std::uint64_t>(t));
            Eigen::VectorXd y = b.apply(a.apply(x));
            const double scale = na * nb * weighted_norm(*a.domain(), x);
            worst = std::max(worst, weighted_norm(*b.codomain(), y) / scale);
        }
    }
    return worst;
}

int cohomology_dim(const ComplexDescriptor& c, int position) {
    const int nops = static_cast<int>(c.ops.size());
    if (position < 0 || position > nops) throw Error(ErrorKind::InvalidArgument, "position out of range");
    const SpacePtr sp = position < nops ? c.ops[static_cast<std::size_t>(position)].domain()
                                        : c.ops[static_cast<std::size_t>(nops - 1)].codomain();
    const auto n = static_cast<Eigen::Index>(sp->dof());
    Eigen::Index rows = 0;
    if (position < nops) rows += static_cast<Eigen::Index>(c.ops[static_cast<std::size_t>(position)].codomain()->dof());
    if (position > 0) rows += static_cast<Eigen::Index>(c.ops[static_cast<std::size_t>(position - 1)].domain()->dof());
    if (static_cast<double>(rows) * static_cast<double>(n) > kMaxDenseEntries)
        throw Error(ErrorKind::GridTooLarge, "dense cohomology count needs a smaller grid");
    Eigen::MatrixXd m(rows, n);
    Eigen::Index r = 0;
    if (position < nops) {
        Eigen::MatrixXd a = isometric_dense(c.ops[static_cast<std::size_t>(position)]);
        m.topRows(a.rows()) = a;
        r = a.rows();
    }
    if (position > 0) {
        Eigen::MatrixXd a = isometric_dense(c.ops[static_cast<std::size_t>(position - 1)]);
        m.bottomRows(rows - r) = a.transpose();
    }
    return null_count(m, kNull);
}

std::vector<int> cohomology_dims(const ComplexDescriptor& c) {
    std::vector<int> d;
    for (int k = 0; k <= static_cast<int>(c.ops.size()); ++k) d.push_back(cohomology_dim(c, k));
    return d;
}

DecompositionResult helmholtz_vector(const Field& v, const std::string& variant, double tol) {
    const Grid& g = v.grid();
    if (g.dim != 3) throw Error(ErrorKind::BadSpacePairing, "vector decompositions need a 3D grid");
    ComplexDescriptor dr = make_complex(g.periodic() || variant == "dirichlet" ? "derham-mathring" : "derham-free", g);
    std::vector<DecompositionPart> parts;
    DecompositionResult res;
    if (variant == "dirichlet") {
        const auto& grad = dr.ops[0];
        const auto& rot = dr.ops[1];
        require_space(v, grad.codomain(), "helmholtz_vector(dirichlet)");
        Eigen::VectorXd alpha;
        if (g.periodic()) {
            alpha = ls_solve(grad, v.values(), tol, "gradient");
        } else {
            PoissonSolver k(g);
            SolveReport rep;
            alpha = k.solve(grad.adjoint().apply(v.values()), tol * 1e-2, &rep, "gradient");
            res.reports.push_back(rep);
        }
        const OperatorHandle rs = rot.adjoint();
        Eigen::VectorXd beta = ls_solve(rs, v.values(), tol, "rotational");
        Field gp(v.space(), grad.apply(alpha));
        Field rp(v.space(), rs.apply(beta));
        Field hp = v - gp - rp;
        parts = {{"gradient", gp, 0}, {"harmonic", hp, 0}, {"rotational", rp, 0}};
        DecompositionResult out = finish(v, std::move(parts));
        out.reports = res.reports;
        out.harmonic_dim = small_harmonic_dim(dr, 1);
        return out;
    }
    if (variant == "neumann") {
        // faces = free grad (cells) + rot0 (edges) + harmonic
        const OperatorHandle rot = build_first_order(g, "rot", BcKind::Mathring);
        const OperatorHandle gradf = g.periodic() ? build_first_order(g, "div", BcKind::Mathring).adjoint()
                                                  : build_first_order(g, "grad", BcKind::Free);
        require_space(v, rot.codomain(), "helmholtz_vector(neumann)");
        Eigen::VectorXd alpha = ls_solve(gradf, v.values(), tol, "gradient");
        Eigen::VectorXd beta = ls_solve(rot, v.values(), tol, "rotational");
        Field gp(v.space(), gradf.apply(alpha));
        Field rp(v.space(), rot.apply(beta));
        Field hp = v - gp - rp;
        parts = {{"gradient", gp, 0}, {"harmonic", hp, 0}, {"rotational", rp, 0}};
        DecompositionResult out = finish(v, std::move(parts));
        out.harmonic_dim = small_harmonic_dim(make_complex("derham-mathring", g), 2);
        return out;
    }
    throw Error(ErrorKind::InvalidArgument, "unknown vector decomposition variant " + variant);
}

DecompositionResult helmholtz_tensor(const Field& m, const std::string& space, double tol) {
    const Grid& g = m.grid();
    if (g.dim != 3) throw Error(ErrorKind::BadSpacePairing, "tensor decompositions need a 3D grid");
    ComplexDescriptor gg = make_complex("gradgrad-mathring", g);
    const OperatorHandle& G = gg.ops[0];
    const OperatorHandle& R = gg.ops[1];
    const OperatorHandle& D = gg.ops[2];
    if (space == "S") {
        Field in = m;
        if (!m.space()->compatible(*G.codomain())) {
            if (m.rank() != Rank::Tensor || m.space()->constraint() != Constraint::None ||
                !m.space()->compatible(*spaces::Sfull(g)))
                throw Error(ErrorKind::ConstraintViolated, "input is not a symmetric tensor field on the S layout");
            Field symm = sym_op(m.space(), m.space()).apply(m);
            if (max_abs(Field(m - symm)) > 1e-12 * std::max(max_abs(m), 1e-300))
                throw Error(ErrorKind::ConstraintViolated, "tensor field is not symmetric");
            in = sym_op(m.space(), G.codomain()).apply(m);
        }
        GradgradNormalSolver gs(g);
        SolveReport rep;
        Eigen::VectorXd alpha = gs.solve(G.adjoint().apply(in.values()), tol * 1e-2, &rep, "Gradgrad");
        const OperatorHandle sr = R.adjoint();
        Eigen::VectorXd beta = ls_solve(sr, in.values(), tol, "symRot");
        Field gp(in.space(), G.apply(alpha));
        Field sp(in.space(), sr.apply(beta));
        Field hp = in - gp - sp;
        DecompositionResult out = finish(in, {{"Gradgrad", gp, 0}, {"harmonic", hp, 0}, {"symRot", sp, 0}});
        out.reports.push_back(rep);
        out.harmonic_dim = small_harmonic_dim(gg, 1);
        return out;
    }
    if (space == "T") {
        Field in = m;
        if (!m.space()->compatible(*R.codomain())) {
            if (m.rank() != Rank::Tensor || !m.space()->compatible(*spaces::Tfull(g)))
                throw Error(ErrorKind::ConstraintViolated, "input is not a trace-free tensor field on the T layout");
            Field dv = dev_op(m.space(), m.space()).apply(m);
            if (max_abs(Field(m - dv)) > 1e-12 * std::max(max_abs(m), 1e-300))
                throw Error(ErrorKind::ConstraintViolated, "tensor field is not trace-free");
            in = dev_op(m.space(), R.codomain()).apply(m);
        }
        Eigen::VectorXd alpha = ls_solve(R, in.values(), tol, "RotS");
        const OperatorHandle dg = scaled(D.adjoint(), -1.0, "devGrad");
        Eigen::VectorXd beta = ls_solve(dg, in.values(), tol, "devGrad");
        Field rp(in.space(), R.apply(alpha));
        Field dp(in.space(), dg.apply(beta));
        Field hp = in - rp - dp;
        DecompositionResult out = finish(in, {{"RotS", rp, 0}, {"harmonic", hp, 0}, {"devGrad", dp, 0}});
        out.harmonic_dim = small_harmonic_dim(gg, 2);
        return out;
    }
    throw Error(ErrorKind::InvalidArgument, "unknown tensor space " + space + " (expected S or T)");
}

OperatorHandle constant_operator(const std::string& tag, const Grid& g) {
    if (tag == "c_g" || tag == "cg") return build_first_order(g, "grad", BcKind::Mathring);
    if (tag == "c_r" || tag == "cr") return build_first_order(g, "rot", BcKind::Mathring);
    if (tag == "c_d" || tag == "cd") return build_first_order(g, "div", BcKind::Mathring);
    if (tag == "c_Gg" || tag == "cGg") return build_composite(g, "Gradgrad");
    if (tag == "c_R" || tag == "cR") return build_composite(g, "RotS");
    if (tag == "c_D" || tag == "cD") return build_composite(g, "DivT");
    throw Error(ErrorKind::InvalidArgument, "unknown constant tag " + tag);
}

ConstantEstimate estimate_constant(const std::string& tag, const Grid& g, double tol, bool dual) {
    const OperatorHandle a0 = constant_operator(tag, g);
    const OperatorHandle a = dual ? a0.adjoint() : a0;
    const OperatorHandle at = a.adjoint();
    ConstantEstimate est;
    est.tag = tag;
    est.dual = dual;
    const Space& dom = *a.domain();
    const Eigen::VectorXd& w = dom.weights();
    auto ata = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd { return at.matrix() * (a.matrix() * x); };
    LinOp precond;
    std::unique_ptr<SeparableLaplacian> sep;
    const std::string base = a0.name();
    if (!dual && !g.periodic() && (base == "grad0" || base == "Gradgrad0")) {
        sep = std::make_unique<SeparableLaplacian>(a.domain());
        const int power = base == "grad0" ? 1 : 2;
        precond = [&sep, power](const Eigen::VectorXd& x) { return sep->solve(x, power); };
    }
    const bool injective = !dual && !g.periodic() && (base == "grad0" || base == "Gradgrad0");
    auto project = [&](const Eigen::VectorXd& y) -> Eigen::VectorXd {
        if (injective) return y;
        KrylovOptions po;
        po.tol = 1e-13;
        po.least_squares = true;
        po.throw_on_failure = false;
        Eigen::VectorXd z;
        cgls(as_linop(at), as_linop(a), y, z, a.codomain()->weights(), w, po);
        return at.apply(z);
    };
    Eigen::VectorXd x = at.apply(random_vector(a.codomain()->dof(), 4242));
    x /= weighted_norm(dom, x);
    KrylovOptions opt;
    opt.tol = 1e-12;
    opt.check_symmetry = false;
    opt.throw_on_failure = false;
    opt.maxit = 20000;
    double prev = 0.0;
    const int maxouter = 400;
    for (int it = 0; it < maxouter; ++it) {
        Eigen::VectorXd y = Eigen::VectorXd::Zero(x.size());
        cg(ata, x, y, w, precond, opt);
        y = project(y);
        const double yn = weighted_norm(dom, y);
        const Eigen::VectorXd ay = a.apply(y);
        const double an = weighted_norm(*a.codomain(), ay);
        const double lambda = (an * an) / (yn * yn);
        est.history.push_back(1.0 / std::sqrt(lambda));
        est.iterations = it + 1;
        x = y / yn;
        if (it > 0 && std::abs(lambda - prev) <= tol * lambda) {
            est.converged = true;
            break;
        }
        prev = lambda;
    }
    est.value = est.history.back();
    if (!est.converged)
        throw Error(ErrorKind::NoConvergence, "inverse iteration for " + tag + " did not settle");
    return est;
}

double constant_dense(const std::string& tag, const Grid& g) {
    const OperatorHandle a = constant_operator(tag, g);
    const double entries = static_cast<double>(a.domain()->dof()) * static_cast<double>(a.codomain()->dof());
    if (entries > kMaxDenseEntries) throw Error(ErrorKind::GridTooLarge, "dense constant needs a smaller grid");
    const Eigen::VectorXd s = singular_values(isometric_dense(a));
    double smin = s[0];
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s[i] > kNull * s[0]) smin = s[i];
    return 1.0 / smin;
}

Field potential(const OperatorHandle& a, const Field& y, double tol, SolveReport* report) {
    if (!y.space()->compatible(*a.codomain()))
        throw Error(ErrorKind::BadSpacePairing, "right-hand side does not live in the codomain of " + a.name());
    KrylovOptions opt;
    opt.tol = tol;
    opt.throw_on_failure = false;
    opt.stage = a.name();
    const OperatorHandle at = a.has_adjoint() ? a.adjoint() : a.with_adjoint().adjoint();
    Eigen::VectorXd x;
    SolveReport rep =
        cgls(as_linop(a), as_linop(at), y.values(), x, a.domain()->weights(), a.codomain()->weights(), opt);
    if (report) *report = rep;
    if (!rep.converged) {
        if (rep.plateau)
            throw Error(ErrorKind::NotInRange, "residual of " + a.name() + " potential stalls at " +
                                                   sci(rep.rel_residual));
        throw Error(ErrorKind::SolverStall, "potential of " + a.name() + " reached " +
                                                sci(rep.rel_residual) + " after " +
                                                std::to_string(rep.iterations) + " iterations");
    }
    return Field(a.domain(), x);
}

OperatorHandle composed_forward(const std::string& name, const Grid& g) {
    if (name == "Pot_Gradgrad") return build_composite(g, "Gradgrad");
    if (name == "Pot_RotS") return build_composite(g, "RotS");
    if (name == "Pot_DivT") return build_composite(g, "DivT");
    if (name == "Pot_devGrad") return build_composite(g, "devGrad");
    if (name == "Pot_symRot") return build_composite(g, "symRot");
    if (name == "Pot_divDiv") return build_composite(g, "divDiv");
    throw Error(ErrorKind::InvalidArgument, "unknown composed potential " + name);
}

ComposedPotential potential_composed(const std::string& name, const Field& y, double tol) {
    const Grid& g = y.grid();
    if (g.periodic() || g.dim != 3)
        throw Error(ErrorKind::WrongMode, "composed potentials are defined on 3D box grids");
    const OperatorHandle fwd = composed_forward(name, g);
    require_space(y, fwd.codomain(), name);
    const double yn = norm(y);
    const double inner = std::min(tol * 1e-3, 1e-12);

    // Kernel (or RT0-orthogonality) precondition on the input.
    auto require_kernel = [&](const OperatorHandle& next) {
        const double r = weighted_norm(*next.codomain(), next.apply(y.values()));
        if (r > 1e-8 * estimate_norm(next) * std::max(yn, 1e-300))
            throw Error(ErrorKind::NotInKernel, name + ": input is not in the kernel of " + next.name());
    };

    Eigen::VectorXd x;
    if (name == "Pot_Gradgrad") {
        require_kernel(build_composite(g, "RotS"));
        const OperatorHandle Gr = build_first_order(g, "Grad", BcKind::Mathring);
        const OperatorHandle gr = build_first_order(g, "grad", BcKind::Mathring);
        const Eigen::VectorXd yf = embed(y.space(), Gr.codomain()).apply(y.values());
        const Eigen::VectorXd v = ls_solve(Gr, yf, inner, "Pot_Grad0");
        x = ls_solve(gr, v, inner, "Pot_grad0");
    } else if (name == "Pot_RotS") {
        require_kernel(build_composite(g, "DivT"));
        const OperatorHandle Ro = build_first_order(g, "Rot", BcKind::Mathring);
        const OperatorHandle ro = build_first_order(g, "rot", BcKind::Mathring);
        const OperatorHandle Gr = build_first_order(g, "Grad", BcKind::Mathring);
        const Eigen::VectorXd yf = embed(y.space(), Ro.codomain()).apply(y.values());
        const Eigen::VectorXd n = ls_solve(Ro, yf, inner, "Pot_Rot0");
        const OperatorHandle axl = pointwise("spn^-1 skw", Ro.domain(), ro.codomain(), [](const Mat3& m) {
            return Mat3::from_rows(spn_inv_unchecked(skw(m)), Vec3{}, Vec3{});
        });
        const Eigen::VectorXd a = axl.apply(n);
        const Eigen::VectorXd w = ls_solve(ro, a, inner, "Pot_rot0");
        const SpacePtr s = spaces::S(g);
        x = sym_op(Ro.domain(), s).apply(n) - 2.0 * sym_op(Gr.codomain(), s).apply(Gr.apply(w));
    } else if (name == "Pot_DivT") {
        const FiniteSubspace rt = make_RT0(y.space());
        const Projection p = project_subspace(y, rt);
        if (norm(p.projection) > 1e-8 * std::max(yn, 1e-300))
            throw Error(ErrorKind::NotInKernel, name + ": input has a nonzero RT0 component");
        const OperatorHandle Dv = build_first_order(g, "Div", BcKind::Mathring);
        const OperatorHandle dv = build_first_order(g, "div", BcKind::Mathring);
        const Eigen::VectorXd f = ls_solve(Dv, y.values(), inner, "Pot_Div0");
        const OperatorHandle trop = pointwise("tr", Dv.domain(), dv.codomain(), [](const Mat3& m) {
            Mat3 r;
            r(0, 0) = trace(m);
            return r;
        });
        const Eigen::VectorXd w = ls_solve(dv, trop.apply(f), inner, "Pot_div0");
        std::vector<Term> terms;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) terms.push_back({i, j, 0, j, 1.0, i});
        const OperatorHandle gradT = assemble("(Grad w)^T", dv.domain(), Dv.domain(), terms);
        x = dev_op(Dv.domain(), spaces::T(g)).apply(f + 0.5 * gradT.apply(w));
    } else if (name == "Pot_devGrad") {
        require_kernel(build_composite(g, "symRot"));
        const OperatorHandle Grf = build_first_order(g, "Grad", BcKind::Free);   // V -> Tfull
        const OperatorHandle grf = build_first_order(g, "grad", BcKind::Free);   // cells -> faces
        std::vector<Term> terms;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) terms.push_back({0, i, j, i, 1.0, j});
        const OperatorHandle divT = assemble("Div (.)^T", Grf.codomain(), grf.codomain(), terms);
        const Eigen::VectorXd ef = embed(y.space(), Grf.codomain()).apply(y.values());
        const Eigen::VectorXd s = ls_solve(grf, divT.apply(ef), inner, "grad^-1 Div E^T");
        const OperatorHandle uI = pointwise("uI", grf.domain(), Grf.codomain(),
                                            [](const Mat3& m) { return m(0, 0) * Mat3::identity(); });
        x = ls_solve(Grf, ef + 0.5 * uI.apply(s), inner, "Grad^-1");
    } else if (name == "Pot_symRot") {
        require_kernel(build_composite(g, "divDiv"));
        const OperatorHandle Dvf = build_first_order(g, "Div", BcKind::Free);   // Sfull -> edges
        const OperatorHandle rof = build_first_order(g, "rot", BcKind::Free);   // faces -> edges
        const OperatorHandle Rof = build_first_order(g, "Rot", BcKind::Free);   // Tfull -> Sfull
        const Eigen::VectorXd mf = embed(y.space(), Dvf.domain()).apply(y.values());
        const Eigen::VectorXd v = ls_solve(rof, Dvf.apply(mf), inner, "rot^-1 Div");
        const OperatorHandle spn_op = pointwise("spn", rof.domain(), Rof.codomain(),
                                                [](const Mat3& m) { return spn(m.row(0)); });
        const Eigen::VectorXd f = ls_solve(Rof, mf + spn_op.apply(v), inner, "Pot_Rot");
        x = dev_op(Rof.domain(), spaces::T(g)).apply(f);
    } else if (name == "Pot_divDiv") {
        const OperatorHandle dvf = build_first_order(g, "div", BcKind::Free);   // edges -> U
        const OperatorHandle Dvf = build_first_order(g, "Div", BcKind::Free);   // Sfull -> edges
        const Eigen::VectorXd v = ls_solve(dvf, y.values(), inner, "Pot_div");
        const Eigen::VectorXd n = ls_solve(Dvf, v, inner, "Pot_Div");
        x = sym_op(Dvf.domain(), spaces::S(g)).apply(n);
    } else {
        throw Error(ErrorKind::InvalidArgument, "unknown composed potential " + name);
    }
    Field out(fwd.domain(), x);
    const Eigen::VectorXd r = fwd.apply(x) - y.values();
    ComposedPotential res{out, rel_norm(*y.space(), r, yn)};
    if (res.forward_residual > 10.0 * tol)
        throw Error(ErrorKind::SolverStall, name + ": forward residual " + sci(res.forward_residual));
    return res;
}

SplitResult split_H0m1(const Field& m, double tol) {
    const Grid& g = m.grid();
    if (g.periodic()) throw Error(ErrorKind::WrongMode, "split_H0m1 needs a box grid");
    const OperatorHandle G = build_composite(g, "Gradgrad");
    require_space(m, G.codomain(), "split_H0m1");
    PoissonSolver k(g);
    SplitResult r{Field(G.domain()), Field(m.space()), {}};
    r.u.values() = k.solve(-G.adjoint().apply(m.values()), tol, &r.report, "split");
    const OperatorHandle uI = pointwise("uI", G.domain(), G.codomain(),
                                        [](const Mat3& a) { return a(0, 0) * Mat3::identity(); });
    r.m0.values() = m.values() - uI.apply(r.u.values());
    return r;
}

}  // namespace ggdd
