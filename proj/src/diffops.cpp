#include "ggdd/diffops.hpp"

#include "ggdd/errors.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <tuple>

namespace ggdd {

OperatorHandle::OperatorHandle(std::string name, SpacePtr domain, SpacePtr codomain, SpMat matrix)
    : name_(std::move(name)), domain_(std::move(domain)), codomain_(std::move(codomain)), matrix_(std::move(matrix)) {
    if (static_cast<std::size_t>(matrix_.rows()) != codomain_->dof() ||
        static_cast<std::size_t>(matrix_.cols()) != domain_->dof())
        throw Error(ErrorKind::DimMismatch, "matrix shape does not match the space descriptors of " + name_);
    matrix_.makeCompressed();
}

OperatorHandle OperatorHandle::with_adjoint(std::string adjoint_name) const {
    OperatorHandle h = *this;
    h.has_adjoint_ = true;
    h.adjoint_name_ = adjoint_name.empty() ? name_ + "*" : std::move(adjoint_name);
    h.adjoint_matrix_ = std::make_shared<const SpMat>(weighted_transpose(matrix_, *domain_, *codomain_));
    return h;
}

OperatorHandle OperatorHandle::adjoint() const {
    if (!has_adjoint_) throw Error(ErrorKind::NoAdjoint, name_ + " has no adjoint link");
    OperatorHandle h(adjoint_name_, codomain_, domain_, *adjoint_matrix_);
    h.has_adjoint_ = true;
    h.adjoint_name_ = name_;
    h.adjoint_matrix_ = std::make_shared<const SpMat>(matrix_);
    return h;
}

Eigen::VectorXd OperatorHandle::apply(const Eigen::VectorXd& x) const { return matrix_ * x; }

Field OperatorHandle::apply(const Field& f) const {
    if (!f.space()->compatible(*domain_))
        throw Error(ErrorKind::GridMismatch, "field space " + f.space()->name() + " is not the domain of " + name_);
    return Field(codomain_, matrix_ * f.values());
}

SpMat weighted_transpose(const SpMat& a, const Space& domain, const Space& codomain) {
    SpMat t = a.transpose();
    const auto& wd = domain.rel_weights();
    const auto& wc = codomain.rel_weights();
    for (Eigen::Index r = 0; r < t.outerSize(); ++r)
        for (SpMat::InnerIterator it(t, r); it; ++it) it.valueRef() = it.value() * (wc[it.col()] / wd[r]);
    return t;
}

OperatorHandle compose(const OperatorHandle& outer, const OperatorHandle& inner, const std::string& name) {
    if (!inner.codomain()->compatible(*outer.domain()))
        throw Error(ErrorKind::BadSpacePairing, "cannot compose " + outer.name() + " after " + inner.name());
    SpMat m = (outer.matrix() * inner.matrix()).pruned();
    return OperatorHandle(name.empty() ? outer.name() + "*" + inner.name() : name, inner.domain(), outer.codomain(),
                          m);
}

OperatorHandle scaled(const OperatorHandle& op, double s, const std::string& name) {
    return OperatorHandle(name.empty() ? op.name() : name, op.domain(), op.codomain(), SpMat(s * op.matrix()));
}

OperatorHandle sum(const OperatorHandle& a, const OperatorHandle& b, const std::string& name) {
    if (!a.domain()->compatible(*b.domain()) || !a.codomain()->compatible(*b.codomain()))
        throw Error(ErrorKind::BadSpacePairing, "cannot add " + a.name() + " and " + b.name());
    return OperatorHandle(name.empty() ? a.name() + "+" + b.name() : name, a.domain(), a.codomain(),
                          SpMat(a.matrix() + b.matrix()));
}

namespace {

using Trip = Eigen::Triplet<double>;

struct Small {
    int rows = 0, cols = 0;
    std::vector<std::tuple<int, int, double>> nz;
};

// 1D factor along one axis: derivative (from -> to) or identity/embedding/restriction.
Small axis_factor(const Grid& g, int axis, Stagger from, Stagger to, bool derivative, bool& ok) {
    ok = true;
    Small m;
    m.cols = stagger_size(g, axis, from);
    m.rows = stagger_size(g, axis, to);
    const int n = g.n[axis];
    if (!derivative) {
        if (from == to) {
            for (int i = 0; i < m.rows; ++i) m.nz.emplace_back(i, i, 1.0);
        } else if (from == Stagger::Interior && to == Stagger::Full) {
            for (int i = 0; i < n; ++i) m.nz.emplace_back(i + 1, i, 1.0);
        } else if (from == Stagger::Full && to == Stagger::Interior) {
            for (int i = 0; i < n; ++i) m.nz.emplace_back(i, i + 1, 1.0);
        } else {
            ok = false;
        }
        return m;
    }
    const double ih = 1.0 / g.h(axis);
    if (from == Stagger::Interior && to == Stagger::Half) {
        for (int k = 0; k <= n; ++k) {
            if (k < n) m.nz.emplace_back(k, k, ih);
            if (k >= 1) m.nz.emplace_back(k, k - 1, -ih);
        }
    } else if (from == Stagger::Full && to == Stagger::Half) {
        for (int k = 0; k <= n; ++k) {
            m.nz.emplace_back(k, k + 1, ih);
            m.nz.emplace_back(k, k, -ih);
        }
    } else if (from == Stagger::Half && to == Stagger::Interior) {
        for (int j = 0; j < n; ++j) {
            m.nz.emplace_back(j, j + 1, ih);
            m.nz.emplace_back(j, j, -ih);
        }
    } else if (from == Stagger::Half && to == Stagger::Full) {
        m.nz.emplace_back(0, 0, 2.0 * ih);
        for (int k = 1; k <= n; ++k) {
            m.nz.emplace_back(k, k, ih);
            m.nz.emplace_back(k, k - 1, -ih);
        }
        m.nz.emplace_back(n + 1, n, -2.0 * ih);
    } else if (from == Stagger::Node && to == Stagger::HalfP) {
        for (int k = 0; k < n; ++k) {
            m.nz.emplace_back(k, (k + 1) % n, ih);
            m.nz.emplace_back(k, k, -ih);
        }
    } else if (from == Stagger::HalfP && to == Stagger::Node) {
        for (int k = 0; k < n; ++k) {
            m.nz.emplace_back(k, k, ih);
            m.nz.emplace_back(k, (k + n - 1) % n, -ih);
        }
    } else {
        ok = false;
    }
    return m;
}

std::string layout_str(const Layout& l) {
    return std::string(stagger_name(l[0])) + stagger_name(l[1]) + stagger_name(l[2]);
}

class BlockAssembler {
public:
    BlockAssembler(std::string name, SpacePtr dom, SpacePtr cod)
        : name_(std::move(name)), dom_(std::move(dom)), cod_(std::move(cod)) {}

    void add(int tc, int sc, double coeff, int axis) { blocks_[{tc, sc, axis}] += coeff; }

    OperatorHandle build() const {
        std::vector<Trip> trips;
        const Grid& g = dom_->grid();
        for (const auto& [key, coeff] : blocks_) {
            if (coeff == 0.0) continue;
            const auto [tc, sc, axis] = key;
            const auto& t = cod_->comps()[static_cast<std::size_t>(tc)];
            const auto& s = dom_->comps()[static_cast<std::size_t>(sc)];
            std::array<Small, 3> f;
            for (int a = 0; a < 3; ++a) {
                bool ok = false;
                f[a] = axis_factor(g, a, s.layout[a], t.layout[a], a == axis, ok);
                if (!ok)
                    throw Error(ErrorKind::BadSpacePairing,
                                name_ + ": component " + s.label + " [" + layout_str(s.layout) + "] of " +
                                    dom_->name() + " cannot reach " + t.label + " [" + layout_str(t.layout) +
                                    "] of " + cod_->name() + (a == axis ? " by differentiation" : " pointwise"));
            }
            const int r0 = f[0].rows, r1 = f[1].rows;
            const int c0 = f[0].cols, c1 = f[1].cols;
            for (const auto& [i2, j2, v2] : f[2].nz)
                for (const auto& [i1, j1, v1] : f[1].nz)
                    for (const auto& [i0, j0, v0] : f[0].nz) {
                        const auto row = t.offset + static_cast<std::size_t>(i0 + r0 * (i1 + r1 * i2));
                        const auto col = s.offset + static_cast<std::size_t>(j0 + c0 * (j1 + c1 * j2));
                        trips.emplace_back(static_cast<int>(row), static_cast<int>(col), coeff * v0 * v1 * v2);
                    }
        }
        SpMat m(static_cast<Eigen::Index>(cod_->dof()), static_cast<Eigen::Index>(dom_->dof()));
        m.setFromTriplets(trips.begin(), trips.end());
        m.prune(0.0);
        return OperatorHandle(name_, dom_, cod_, std::move(m));
    }

private:
    std::string name_;
    SpacePtr dom_, cod_;
    std::map<std::tuple<int, int, int>, double> blocks_;
};

double basis_entry(const Component& c, Rank rank, int i, int j) {
    if (rank == Rank::Scalar) return (i == 0 && j == 0) ? c.basis(0, 0) : 0.0;
    if (rank == Rank::Vector) return i == 0 ? c.basis(0, j) : 0.0;
    return c.basis(i, j);
}

constexpr double kCoefTol = 1e-14;

}  // namespace

OperatorHandle assemble(const std::string& name, SpacePtr domain, SpacePtr codomain, const std::vector<Term>& terms) {
    if (!(domain->grid() == codomain->grid())) throw Error(ErrorKind::GridMismatch, name + ": spaces on different grids");
    BlockAssembler asmb(name, domain, codomain);
    const auto& tcs = codomain->comps();
    const auto& scs = domain->comps();
    for (const auto& term : terms)
        for (std::size_t d = 0; d < tcs.size(); ++d) {
            const double bt = basis_entry(tcs[d], codomain->rank(), term.ti, term.tj);
            if (std::abs(bt) < kCoefTol) continue;
            for (std::size_t c = 0; c < scs.size(); ++c) {
                const double bs = basis_entry(scs[c], domain->rank(), term.si, term.sj);
                if (std::abs(bs) < kCoefTol) continue;
                asmb.add(static_cast<int>(d), static_cast<int>(c), bt / tcs[d].factor * term.coeff * bs, term.axis);
            }
        }
    return asmb.build();
}

OperatorHandle pointwise(const std::string& name, SpacePtr domain, SpacePtr codomain,
                         const std::function<Mat3(const Mat3&)>& map) {
    if (!(domain->grid() == codomain->grid())) throw Error(ErrorKind::GridMismatch, name + ": spaces on different grids");
    BlockAssembler asmb(name, domain, codomain);
    for (int c = 0; c < domain->ncomp(); ++c) {
        const Mat3 image = map(domain->comps()[static_cast<std::size_t>(c)].basis);
        for (int d = 0; d < codomain->ncomp(); ++d) {
            const auto& tc = codomain->comps()[static_cast<std::size_t>(d)];
            const double coef = ddot(tc.basis, image) / tc.factor;
            if (std::abs(coef) < kCoefTol) continue;
            asmb.add(d, c, coef, -1);
        }
    }
    return asmb.build();
}

namespace ops {

namespace {
int levi(int i, int j, int k) { return ((i - j) * (j - k) * (k - i)) / 2; }

void require_rank(const Space& s, Rank r, const char* what) {
    if (s.rank() != r) throw Error(ErrorKind::BadSpacePairing, std::string(what) + ": wrong field rank for " + s.name());
}
}  // namespace

OperatorHandle grad(SpacePtr dom, SpacePtr cod) {
    require_rank(*dom, Rank::Scalar, "grad");
    require_rank(*cod, Rank::Vector, "grad");
    std::vector<Term> t;
    for (int i = 0; i < dom->grid().dim; ++i) t.push_back({0, i, 0, 0, 1.0, i});
    return assemble("grad", dom, cod, t);
}

OperatorHandle div(SpacePtr dom, SpacePtr cod) {
    require_rank(*dom, Rank::Vector, "div");
    require_rank(*cod, Rank::Scalar, "div");
    std::vector<Term> t;
    for (int i = 0; i < dom->grid().dim; ++i) t.push_back({0, 0, 0, i, 1.0, i});
    return assemble("div", dom, cod, t);
}

OperatorHandle rot(SpacePtr dom, SpacePtr cod) {
    require_rank(*dom, Rank::Vector, "rot");
    require_rank(*cod, Rank::Vector, "rot");
    std::vector<Term> t;
    for (int l = 0; l < 3; ++l)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                if (int e = levi(l, j, k)) t.push_back({0, l, 0, k, static_cast<double>(e), j});
    return assemble("rot", dom, cod, t);
}

OperatorHandle rot2d(SpacePtr dom, SpacePtr cod) {
    require_rank(*dom, Rank::Vector, "rot2d");
    require_rank(*cod, Rank::Scalar, "rot2d");
    return assemble("rot2d", dom, cod, {{0, 0, 0, 1, 1.0, 0}, {0, 0, 0, 0, -1.0, 1}});
}

OperatorHandle Grad(SpacePtr dom, SpacePtr cod) {
    require_rank(*dom, Rank::Vector, "Grad");
    require_rank(*cod, Rank::Tensor, "Grad");
    std::vector<Term> t;
    const int d = dom->grid().dim;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) t.push_back({i, j, 0, i, 1.0, j});
    return assemble("Grad", dom, cod, t);
}

OperatorHandle Div(SpacePtr dom, SpacePtr cod) {
    require_rank(*dom, Rank::Tensor, "Div");
    require_rank(*cod, Rank::Vector, "Div");
    std::vector<Term> t;
    const int d = dom->grid().dim;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) t.push_back({0, i, i, j, 1.0, j});
    return assemble("Div", dom, cod, t);
}

OperatorHandle Rot(SpacePtr dom, SpacePtr cod) {
    require_rank(*dom, Rank::Tensor, "Rot");
    require_rank(*cod, Rank::Tensor, "Rot");
    std::vector<Term> t;
    for (int i = 0; i < 3; ++i)
        for (int l = 0; l < 3; ++l)
            for (int j = 0; j < 3; ++j)
                for (int k = 0; k < 3; ++k)
                    if (int e = levi(l, j, k)) t.push_back({i, l, i, k, static_cast<double>(e), j});
    return assemble("Rot", dom, cod, t);
}

}  // namespace ops

OperatorHandle build_first_order(const Grid& g, const std::string& name, BcKind bc) {
    const bool free = bc == BcKind::Free && !g.periodic();
    auto need3d = [&] {
        if (g.dim != 3) throw Error(ErrorKind::BadSpacePairing, name + " needs a 3D grid");
    };
    OperatorHandle op;
    if (g.periodic()) {
        if (name == "grad") op = ops::grad(spaces::scalar(g, 0), spaces::vector(g, 0));
        else if (name == "rot") op = ops::rot(spaces::vector(g, 0), spaces::vector(g, 7));
        else if (name == "div") op = ops::div(spaces::vector(g, 7), spaces::scalar(g, 7));
        else if (name == "Grad") op = ops::Grad(spaces::vector(g, 0), spaces::tensor(g, 0));
        else if (name == "Rot") op = ops::Rot(spaces::tensor(g, 0), spaces::tensor(g, 7));
        else if (name == "Div") op = ops::Div(spaces::tensor(g, 7), spaces::vector(g, 7));
        else throw Error(ErrorKind::InvalidArgument, "unknown first-order operator " + name);
        op.set_name(name);
        return op.with_adjoint();
    }
    if (name == "grad") {
        op = free ? ops::grad(spaces::cells(g), spaces::faces(g)) : ops::grad(spaces::U(g), spaces::edges(g));
    } else if (name == "rot") {
        need3d();
        op = free ? ops::rot(spaces::faces(g), spaces::edges(g)) : ops::rot(spaces::edges(g), spaces::faces(g));
    } else if (name == "div") {
        op = free ? ops::div(spaces::edges(g), spaces::U(g)) : ops::div(spaces::faces(g), spaces::cells(g));
    } else if (name == "Grad") {
        need3d();
        op = free ? ops::Grad(spaces::V(g), spaces::Tfull(g)) : ops::Grad(spaces::edges(g), spaces::Sfull(g));
    } else if (name == "Rot") {
        need3d();
        op = free ? ops::Rot(spaces::Tfull(g), spaces::Sfull(g)) : ops::Rot(spaces::Sfull(g), spaces::Tfull(g));
    } else if (name == "Div") {
        need3d();
        op = free ? ops::Div(spaces::Sfull(g), spaces::edges(g)) : ops::Div(spaces::Tfull(g), spaces::V(g));
    } else {
        throw Error(ErrorKind::InvalidArgument, "unknown first-order operator " + name);
    }
    op.set_name(free ? name : name + "0");
    return op.with_adjoint();
}

OperatorHandle build_composite(const Grid& g, const std::string& name) {
    const bool per = g.periodic();
    const int fp = full_parity(g);
    SpacePtr u = per ? spaces::scalar(g, 0) : spaces::U(g);
    SpacePtr e = per ? spaces::vector(g, 0) : spaces::edges(g);
    SpacePtr s = per ? spaces::tensor(g, 0, Constraint::Symmetric) : spaces::S(g);
    auto gradgrad = [&] {
        OperatorHandle op = compose(ops::Grad(e, s), ops::grad(u, e), "Gradgrad0");
        op.set_successor("RotS0");
        return op.with_adjoint("divDivS");
    };
    auto rots = [&] {
        if (g.dim != 3) throw Error(ErrorKind::BadSpacePairing, "RotS needs a 3D grid");
        SpacePtr t = per ? spaces::tensor(g, fp, Constraint::TraceFree) : spaces::T(g);
        OperatorHandle op = ops::Rot(s, t);
        op.set_name("RotS0");
        op.set_successor("DivT0");
        return op.with_adjoint("symRotT");
    };
    auto divt = [&] {
        if (g.dim != 3) throw Error(ErrorKind::BadSpacePairing, "DivT needs a 3D grid");
        SpacePtr t = per ? spaces::tensor(g, fp, Constraint::TraceFree) : spaces::T(g);
        SpacePtr v = per ? spaces::vector(g, fp) : spaces::V(g);
        OperatorHandle op = ops::Div(t, v);
        op.set_name("DivT0");
        return op.with_adjoint("-devGrad");
    };
    if (name == "Gradgrad") return gradgrad();
    if (name == "RotS") return rots();
    if (name == "DivT") return divt();
    if (name == "divDiv") {
        OperatorHandle op = gradgrad().adjoint();
        op.set_name("divDivS");
        return op.with_adjoint("Gradgrad0");
    }
    if (name == "symRot") {
        OperatorHandle op = rots().adjoint();
        op.set_name("symRotT");
        op.set_successor("divDivS");
        return op.with_adjoint("RotS0");
    }
    if (name == "devGrad") {
        OperatorHandle op = scaled(divt().adjoint(), -1.0, "devGrad");
        op.set_successor("symRotT");
        return op.with_adjoint("-DivT0");
    }
    throw Error(ErrorKind::BadSpacePairing, "unknown composite operator " + name);
}

double estimate_norm(const OperatorHandle& a, int iterations) {
    OperatorHandle at = a.has_adjoint() ? a.adjoint() : a.with_adjoint().adjoint();
    Eigen::VectorXd x = random_vector(a.domain()->dof(), 12345);
    double nrm = 0.0;
    for (int it = 0; it < iterations; ++it) {
        const double nx = weighted_norm(*a.domain(), x);
        if (nx == 0.0) return 0.0;
        x /= nx;
        Eigen::VectorXd y = a.apply(x);
        nrm = weighted_norm(*a.codomain(), y);
        x = at.apply(y);
    }
    return nrm;
}

AdjointDefect check_adjoint_pair(const OperatorHandle& a, int trials, std::uint64_t seed) {
    OperatorHandle at = a.adjoint();
    const double an = estimate_norm(a);
    double worst = 0.0;
    for (int t = 0; t < trials; ++t) {
        Eigen::VectorXd x = random_vector(a.domain()->dof(), seed + 2 * static_cast<std::uint64_t>(t));
        Eigen::VectorXd y = random_vector(a.codomain()->dof(), seed + 2 * static_cast<std::uint64_t>(t) + 1);
        const double lhs = weighted_dot(*a.codomain(), a.apply(x), y);
        const double rhs = weighted_dot(*a.domain(), x, at.apply(y));
        const double scale = weighted_norm(*a.domain(), x) * weighted_norm(*a.codomain(), y) * an;
        worst = std::max(worst, scale > 0.0 ? std::abs(lhs - rhs) / scale : 0.0);
    }
    return {worst, an};
}

void export_matrix_market(const std::string& path, const OperatorHandle& op) {
    std::ofstream os(path);
    if (!os) throw Error(ErrorKind::IoError, "cannot open " + path);
    const SpMat& m = op.matrix();
    os << "%%MatrixMarket matrix coordinate real general\n";
    os << "% " << op.name() << " : " << op.domain()->name() << " -> " << op.codomain()->name() << "\n";
    os << m.rows() << ' ' << m.cols() << ' ' << m.nonZeros() << "\n";
    os.precision(17);
    for (Eigen::Index r = 0; r < m.outerSize(); ++r)
        for (SpMat::InnerIterator it(m, r); it; ++it) os << it.row() + 1 << ' ' << it.col() + 1 << ' ' << it.value() << "\n";
}

}  // namespace ggdd
