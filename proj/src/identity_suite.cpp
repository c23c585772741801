#include "ggdd/identity_suite.hpp"

#include "ggdd/diffops.hpp"
#include "ggdd/errors.hpp"
#include "ggdd/separable.hpp"

#include <cmath>
#include <functional>
#include <numbers>

namespace ggdd {

namespace {

// ---------- typed staggered operators on periodic grids ----------

using Step = std::function<OperatorHandle(const SpacePtr&)>;

int par(const SpacePtr& s) { return s->parity(); }
int flip(const SpacePtr& s) { return s->parity() ^ full_parity(s->grid()); }

namespace st {
OperatorHandle Grad(const SpacePtr& s) { return ops::Grad(s, spaces::tensor(s->grid(), par(s))); }
OperatorHandle Div(const SpacePtr& s) { return ops::Div(s, spaces::vector(s->grid(), par(s))); }
OperatorHandle Rot(const SpacePtr& s) { return ops::Rot(s, spaces::tensor(s->grid(), flip(s))); }
OperatorHandle grad(const SpacePtr& s) { return ops::grad(s, spaces::vector(s->grid(), par(s))); }
OperatorHandle div(const SpacePtr& s) { return ops::div(s, spaces::scalar(s->grid(), par(s))); }
OperatorHandle rot(const SpacePtr& s) { return ops::rot(s, spaces::vector(s->grid(), flip(s))); }
OperatorHandle sym(const SpacePtr& s) { return pointwise("sym", s, s, [](const Mat3& m) { return ggdd::sym(m); }); }
OperatorHandle skw(const SpacePtr& s) { return pointwise("skw", s, s, [](const Mat3& m) { return ggdd::skw(m); }); }
OperatorHandle dev(const SpacePtr& s) { return pointwise("dev", s, s, [](const Mat3& m) { return ggdd::dev(m); }); }
OperatorHandle tp(const SpacePtr& s) { return pointwise("T", s, s, [](const Mat3& m) { return m.transpose(); }); }
OperatorHandle tr(const SpacePtr& s) {
    return pointwise("tr", s, spaces::scalar(s->grid(), par(s)), [](const Mat3& m) {
        Mat3 r;
        r(0, 0) = trace(m);
        return r;
    });
}
OperatorHandle uI(const SpacePtr& s) {
    return pointwise("uI", s, spaces::tensor(s->grid(), par(s)), [](const Mat3& m) { return m(0, 0) * Mat3::identity(); });
}
OperatorHandle spn(const SpacePtr& s) {
    return pointwise("spn", s, spaces::tensor(s->grid(), flip(s)), [](const Mat3& m) { return ggdd::spn(m.row(0)); });
}
// spn^{-1} skw
OperatorHandle spninv(const SpacePtr& s) {
    return pointwise("spn^-1 skw", s, spaces::vector(s->grid(), flip(s)), [](const Mat3& m) {
        const Vec3 v = spn_inv_unchecked(ggdd::skw(m));
        return Mat3::from_rows(v, Vec3{}, Vec3{});
    });
}
}  // namespace st

struct Chain {
    double coeff;
    std::vector<OperatorHandle> ops;
    std::vector<SpMat> abs_ops;
};

using Side = std::vector<Chain>;

Chain chain(const SpacePtr& in, double coeff, std::initializer_list<Step> steps) {
    Chain c{coeff, {}, {}};
    SpacePtr cur = in;
    for (const auto& s : steps) {
        OperatorHandle op = s(cur);
        cur = op.codomain();
        c.abs_ops.push_back(op.matrix().cwiseAbs());
        c.ops.push_back(std::move(op));
    }
    return c;
}

struct Eval {
    Eigen::VectorXd value;
    Eigen::VectorXd scale;
};

Eval eval(const Side& side, const Eigen::VectorXd& x, Eigen::Index out_size) {
    Eval e{Eigen::VectorXd::Zero(out_size), Eigen::VectorXd::Zero(out_size)};
    for (const auto& c : side) {
        Eigen::VectorXd v = x, a = x.cwiseAbs();
        for (std::size_t k = 0; k < c.ops.size(); ++k) {
            v = c.ops[k].matrix() * v;
            a = c.abs_ops[k] * a;
        }
        if (v.size() != out_size) throw Error(ErrorKind::DimMismatch, "identity sides map to different spaces");
        e.value += c.coeff * v;
        e.scale += std::abs(c.coeff) * a;
    }
    return e;
}

Eigen::Index out_dim(const Side& s) {
    const auto& c = s.front();
    return c.ops.empty() ? -1 : static_cast<Eigen::Index>(c.ops.back().codomain()->dof());
}

double residual(const Side& lhs, const Side& rhs, const Eigen::VectorXd& x, bool negate) {
    const Eigen::Index n = out_dim(lhs);
    Eval l = eval(lhs, x, n);
    Eval r = rhs.empty() ? Eval{Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(n)} : eval(rhs, x, n);
    if (negate) r.value = -r.value;
    const double scale = std::max((l.scale + r.scale).maxCoeff(), std::max(max_abs(l.value), max_abs(r.value)));
    if (scale == 0.0) return 0.0;
    return max_abs(Eigen::VectorXd(l.value - r.value)) / scale;
}

struct Statement {
    Side lhs, rhs;
};

enum class In { Scalar, Vector, Tensor };

struct AppendixEntry {
    In input;
    std::function<std::vector<Statement>(const SpacePtr&)> build;
};

using namespace st;

const std::vector<std::pair<std::string, AppendixEntry>>& appendix() {
    static const std::vector<std::pair<std::string, AppendixEntry>> table = {
        {"A.i", {In::Scalar, [](const SpacePtr& s) {
             return std::vector<Statement>{{{chain(s, 1, {grad, Grad, skw})}, {}}};
         }}},
        {"A.ii", {In::Tensor, [](const SpacePtr& s) {
             return std::vector<Statement>{{{chain(s, 1, {skw, Div, div})}, {}}};
         }}},
        {"A.iii", {In::Scalar, [](const SpacePtr& s) {
             return std::vector<Statement>{{{chain(s, 1, {uI, Rot})}, {chain(s, -1, {grad, spn})}}};
         }}},
        {"A.iv", {In::Tensor, [](const SpacePtr& s) {
             return std::vector<Statement>{{{chain(s, 1, {Rot, tr})}, {chain(s, 2, {spninv, div})}},
                                           {{chain(s, 1, {sym, Rot, tr})}, {}}};
         }}},
        {"A.v", {In::Scalar, [](const SpacePtr& s) {
             return std::vector<Statement>{{{chain(s, 1, {uI, Div})}, {chain(s, 1, {grad})}}};
         }}},
        {"A.vi", {In::Vector, [](const SpacePtr& s) {
             return std::vector<Statement>{{{chain(s, 1, {Grad, tr})}, {chain(s, 1, {div})}}};
         }}},
        {"A.vii", {In::Vector, [](const SpacePtr& s) {
             std::vector<Statement> out{{{chain(s, 1, {spn, Div})}, {chain(s, -1, {rot})}}};
             SpacePtr t = spaces::tensor(s->grid(), s->parity());
             out.push_back({{chain(t, 1, {skw, Div})}, {chain(t, -1, {spninv, rot})}});
             return out;
         }}},
        {"A.viii", {In::Vector, [](const SpacePtr& s) {
             std::vector<Statement> out{
                 {{chain(s, 1, {spn, Rot})}, {chain(s, 1, {div, uI}), chain(s, -1, {Grad, tp})}}};
             SpacePtr t = spaces::tensor(s->grid(), s->parity());
             out.push_back({{chain(t, 1, {skw, Rot})}, {chain(t, 1, {spninv, div, uI}), chain(t, -1, {spninv, Grad, tp})}});
             return out;
         }}},
        {"A.ix", {In::Vector, [](const SpacePtr& s) {
             return std::vector<Statement>{
                 {{chain(s, 1, {Grad, skw})}, {chain(s, 0.5, {rot, spn})}},
                 {{chain(s, 1, {Grad, sym, Rot})}, {chain(s, -1, {Grad, skw, Rot})}},
                 {{chain(s, 1, {Grad, sym, Rot})}, {chain(s, -0.5, {rot, spn, Rot})}}};
         }}},
        {"A.x", {In::Tensor, [](const SpacePtr& s) {
             // v = (Div M^T - grad tr M) / 2
             Side spn_v{chain(s, 0.5, {tp, Div, spn}), chain(s, -0.5, {tr, grad, spn})};
             Side rot_v{chain(s, 0.5, {tp, Div, rot}), chain(s, -0.5, {tr, grad, rot})};
             return std::vector<Statement>{
                 {{chain(s, 1, {Rot, skw})}, spn_v},
                 {{chain(s, 1, {Rot, sym, Div})}, {chain(s, -1, {Rot, skw, Div})}},
                 {{chain(s, 1, {Rot, sym, Div})}, rot_v},
                 {{chain(s, 1, {dev, Rot, sym, Div})}, {chain(s, 0.5, {dev, tp, Div, rot})}}};
         }}},
        {"A.xi", {In::Vector, [](const SpacePtr& s) {
             return std::vector<Statement>{{{chain(s, 1, {div, grad})}, {chain(s, 1.5, {Grad, tp, dev, Div})}}};
         }}},
    };
    return table;
}

void require_periodic(const Grid& g, const std::string& id) {
    if (!g.periodic()) throw Error(ErrorKind::WrongMode, id + " requires a periodic grid");
}

int default_band(const Grid& g) { return std::max(1, g.min_n() / 4); }

SpacePtr input_space(const Grid& g, In in, int parity) {
    switch (in) {
        case In::Scalar: return spaces::scalar(g, parity);
        case In::Vector: return spaces::vector(g, parity);
        case In::Tensor: return spaces::tensor(g, parity);
    }
    return nullptr;
}

// ---------- collocated trigonometric backend for the cutoff rules ----------

struct Spectral {
    Grid g;
    std::array<Eigen::MatrixXd, 3> d;
    std::array<int, 3> shape;
    Eigen::Index size;

    explicit Spectral(const Grid& grid) : g(grid) {
        for (int a = 0; a < 3; ++a) {
            const int n = g.n[a];
            shape[a] = n;
            d[a] = Eigen::MatrixXd::Zero(n, n);
            const double scale = 2.0 * std::numbers::pi / g.L[a];
            for (int j = 0; j < n; ++j)
                for (int l = 0; l < n; ++l) {
                    if (j == l) continue;
                    const int m = j - l;
                    const double sgn = (m % 2 == 0) ? 1.0 : -1.0;
                    if (n % 2 == 0)
                        d[a](j, l) = 0.5 * sgn / std::tan(m * std::numbers::pi / n) * scale;
                    else
                        d[a](j, l) = 0.5 * sgn / std::sin(m * std::numbers::pi / n) * scale;
                }
        }
        size = static_cast<Eigen::Index>(shape[0]) * shape[1] * shape[2];
    }

    Eigen::VectorXd diff(const Eigen::VectorXd& f, int axis) const {
        Eigen::VectorXd out = f;
        apply_along_axis(out.data(), shape, axis, d[static_cast<std::size_t>(axis)]);
        return out;
    }
};

using SF = Eigen::VectorXd;
using VF = std::array<SF, 3>;
using TF = std::array<std::array<SF, 3>, 3>;

struct Terms {
    std::vector<TF> parts;  // tensor-valued terms (vectors in row 0, scalars in (0,0))
};

SF zero(const Spectral& s) { return SF::Zero(s.size); }

TF tzero(const Spectral& s) {
    TF t;
    for (auto& r : t)
        for (auto& e : r) e = zero(s);
    return t;
}

SF sample_periodic(const Spectral& sp, std::uint64_t seed, int band) {
    return random_smooth_field(spaces::scalar(sp.g, 0), seed, band).values();
}

TF random_tensor(const Spectral& sp, std::uint64_t seed, int band, Constraint c) {
    TF m = tzero(sp);
    std::uint64_t k = 0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            if (c == Constraint::Symmetric && j < i) continue;
            m[i][j] = sample_periodic(sp, seed * 131 + (k++), band);
            if (c == Constraint::Symmetric) m[j][i] = m[i][j];
        }
    if (c == Constraint::TraceFree) {
        SF t = (m[0][0] + m[1][1] + m[2][2]) / 3.0;
        for (int i = 0; i < 3; ++i) m[i][i] -= t;
    }
    return m;
}

constexpr int eps3(int i, int j, int k) { return ((i - j) * (j - k) * (k - i)) / 2; }

TF Rot_s(const Spectral& sp, const TF& m) {
    TF r = tzero(sp);
    for (int i = 0; i < 3; ++i)
        for (int l = 0; l < 3; ++l)
            for (int j = 0; j < 3; ++j)
                for (int k = 0; k < 3; ++k)
                    if (int e = eps3(l, j, k)) r[i][l] += e * sp.diff(m[i][k], j);
    return r;
}

VF Div_s(const Spectral& sp, const TF& m) {
    VF v{zero(sp), zero(sp), zero(sp)};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) v[i] += sp.diff(m[i][j], j);
    return v;
}

SF div_s(const Spectral& sp, const VF& v) {
    SF s = zero(sp);
    for (int j = 0; j < 3; ++j) s += sp.diff(v[j], j);
    return s;
}

TF times(const SF& phi, const TF& m) {
    TF r = m;
    for (auto& row : r)
        for (auto& e : row) e = e.cwiseProduct(phi);
    return r;
}

// rows: a x row_i M
TF cross_rows(const Spectral& sp, const VF& a, const TF& m) {
    TF r = tzero(sp);
    for (int i = 0; i < 3; ++i)
        for (int l = 0; l < 3; ++l)
            for (int j = 0; j < 3; ++j)
                for (int k = 0; k < 3; ++k)
                    if (int e = eps3(l, j, k)) r[i][l] += e * a[j].cwiseProduct(m[i][k]);
    return r;
}

TF symt(const TF& m) {
    TF r = m;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r[i][j] = 0.5 * (m[i][j] + m[j][i]);
    return r;
}

TF vec_as(const Spectral& sp, const VF& v) {
    TF r = tzero(sp);
    for (int i = 0; i < 3; ++i) r[0][i] = v[i];
    return r;
}

TF sca_as(const Spectral& sp, const SF& s) {
    TF r = tzero(sp);
    r[0][0] = s;
    return r;
}

double tmax(const TF& m) {
    double r = 0.0;
    for (const auto& row : m)
        for (const auto& e : row) r = std::max(r, max_abs(e));
    return r;
}

double compare(const Spectral& sp, const TF& lhs, const std::vector<TF>& rhs_terms, bool negate) {
    TF rhs = tzero(sp);
    double scale = tmax(lhs);
    for (const auto& t : rhs_terms) {
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) rhs[i][j] += t[i][j];
        scale = std::max(scale, tmax(t));
    }
    if (negate) rhs = times(SF::Constant(sp.size, -1.0), rhs);
    double diff = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) diff = std::max(diff, max_abs(SF(lhs[i][j] - rhs[i][j])));
    return scale == 0.0 ? 0.0 : diff / scale;
}

double cutoff_once(const std::string& id, const Spectral& sp, std::uint64_t seed, const IdentityOptions& opt) {
    const int band = default_band(sp.g);
    SF phi = SF::Ones(sp.size);
    if (!opt.constant_phi) {
        auto s = spaces::scalar(sp.g, 0);
        phi = sample_scalar(s, [&](const std::array<double, 3>& x) {
                  double p = 1.0;
                  for (int a = 0; a < 3; ++a) p *= 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * x[a] / sp.g.L[a]));
                  return p;
              }).values();
    }
    VF gphi{sp.diff(phi, 0), sp.diff(phi, 1), sp.diff(phi, 2)};
    const bool neg = opt.negate_rhs;
    if (id == "C.i" || id == "C.ii") {
        TF m = random_tensor(sp, seed, band, id == "C.i" ? Constraint::Symmetric : Constraint::TraceFree);
        return compare(sp, Rot_s(sp, times(phi, m)), {times(phi, Rot_s(sp, m)), cross_rows(sp, gphi, m)}, neg);
    }
    if (id == "C.iii" || id == "C.iv") {
        TF m = random_tensor(sp, seed, band, id == "C.iii" ? Constraint::TraceFree : Constraint::Symmetric);
        VF mg{zero(sp), zero(sp), zero(sp)};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) mg[i] += m[i][j].cwiseProduct(gphi[j]);
        VF dm = Div_s(sp, m);
        for (auto& e : dm) e = e.cwiseProduct(phi);
        return compare(sp, vec_as(sp, Div_s(sp, times(phi, m))), {vec_as(sp, dm), vec_as(sp, mg)}, neg);
    }
    if (id == "C.v") {
        TF e = random_tensor(sp, seed, band, Constraint::TraceFree);
        return compare(sp, symt(Rot_s(sp, times(phi, e))),
                       {times(phi, symt(Rot_s(sp, e))), symt(cross_rows(sp, gphi, e))}, neg);
    }
    if (id == "C.vi") {
        TF m = random_tensor(sp, seed, band, Constraint::Symmetric);
        VF dm = Div_s(sp, m);
        SF t2 = zero(sp);
        for (int j = 0; j < 3; ++j) t2 += 2.0 * gphi[j].cwiseProduct(dm[j]);
        SF t3 = zero(sp);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) t3 += m[i][j].cwiseProduct(sp.diff(gphi[i], j));
        return compare(sp, sca_as(sp, div_s(sp, Div_s(sp, times(phi, m)))),
                       {sca_as(sp, SF(phi.cwiseProduct(div_s(sp, dm)))), sca_as(sp, t2), sca_as(sp, t3)}, neg);
    }
    throw Error(ErrorKind::UnknownIdentity, "unknown cutoff rule " + id);
}

}  // namespace

const std::vector<IdentityCase>& identity_registry() {
    static const std::vector<IdentityCase> reg = {
        {"A.i", "skw Grad grad u = 0", IdentityMode::Periodic, "scalar"},
        {"A.ii", "div Div M = 0 for skew M", IdentityMode::Periodic, "tensor"},
        {"A.iii", "Rot(u I) = -spn grad u", IdentityMode::Periodic, "scalar"},
        {"A.iv", "tr Rot M = 2 div spn^-1 skw M; tr Rot sym M = 0", IdentityMode::Periodic, "tensor"},
        {"A.v", "Div(u I) = grad u", IdentityMode::Periodic, "scalar"},
        {"A.vi", "tr Grad v = div v", IdentityMode::Periodic, "vector"},
        {"A.vii", "Div spn v = -rot v; Div skw M = -rot spn^-1 skw M", IdentityMode::Periodic, "vector"},
        {"A.viii", "Rot spn v = (div v) I - (Grad v)^T, also for v = spn^-1 skw M", IdentityMode::Periodic, "vector"},
        {"A.ix", "skw Grad v = spn rot v / 2; Rot sym Grad v = -Rot skw Grad v = -Rot spn rot v / 2",
         IdentityMode::Periodic, "vector"},
        {"A.x", "skw Rot M = spn v; Div sym Rot M = -Div skw Rot M = rot v; trace-free case",
         IdentityMode::Periodic, "tensor"},
        {"A.xi", "grad div v = 3/2 Div dev (Grad v)^T", IdentityMode::Periodic, "vector"},
        {"C.i", "Rot(phi M) = phi Rot M + grad phi x M, M symmetric", IdentityMode::Periodic, "tensor"},
        {"C.ii", "Rot(phi E) = phi Rot E + grad phi x E, E trace-free", IdentityMode::Periodic, "tensor"},
        {"C.iii", "Div(phi E) = phi Div E + grad phi . E, E trace-free", IdentityMode::Periodic, "tensor"},
        {"C.iv", "Div(phi M) = phi Div M + grad phi . M, M symmetric", IdentityMode::Periodic, "tensor"},
        {"C.v", "sym Rot(phi E) = phi sym Rot E + sym(grad phi x E)", IdentityMode::Periodic, "tensor"},
        {"C.vi", "div Div(phi M) = phi div Div M + 2 grad phi . Div M + tr(M Gradgrad phi)",
         IdentityMode::Periodic, "tensor"},
        {"G.1", "d_k (Grad v)_ij from derivatives of devGrad v", IdentityMode::Periodic, "vector"},
    };
    return reg;
}

double run_identity(const std::string& id, const Grid& g, std::uint64_t seed, int trials, const IdentityOptions& opt) {
    bool known = false;
    for (const auto& c : identity_registry()) known = known || c.id == id;
    if (!known) throw Error(ErrorKind::UnknownIdentity, "unknown identity " + id);
    require_periodic(g, id);
    if (trials < 1) throw Error(ErrorKind::InvalidArgument, "trials must be at least 1");
    double worst = 0.0;
    if (id[0] == 'C') {
        for (int t = 0; t < trials; ++t) worst = std::max(worst, run_cutoff_rule(id, g, seed + static_cast<std::uint64_t>(t), opt));
        return worst;
    }
    if (id == "G.1") {
        for (int t = 0; t < trials; ++t)
            worst = std::max(worst, run_second_derivative_reconstruction(g, seed + static_cast<std::uint64_t>(t), opt));
        return worst;
    }
    const AppendixEntry* entry = nullptr;
    for (const auto& [name, e] : appendix())
        if (name == id) entry = &e;
    const int band = default_band(g);
    for (int parity : {0, full_parity(g)}) {
        SpacePtr in = input_space(g, entry->input, parity);
        const auto statements = entry->build(in);
        for (int t = 0; t < trials; ++t) {
            const Eigen::VectorXd x =
                random_smooth_field(in, seed + 977 * static_cast<std::uint64_t>(t) + static_cast<std::uint64_t>(parity), band).values();
            for (const auto& s : statements) {
                const SpacePtr& sin = s.lhs.front().ops.front().domain();
                Eigen::VectorXd xin = x;
                if (!sin->compatible(*in))
                    xin = random_smooth_field(sin, seed + 31 * static_cast<std::uint64_t>(t) + 7, band).values();
                worst = std::max(worst, residual(s.lhs, s.rhs, xin, opt.negate_rhs));
            }
        }
    }
    return worst;
}

double run_cutoff_rule(const std::string& id, const Grid& g, std::uint64_t seed, const IdentityOptions& opt) {
    if (id.size() < 2 || id[0] != 'C') throw Error(ErrorKind::UnknownIdentity, "unknown cutoff rule " + id);
    require_periodic(g, id);
    Spectral sp(g);
    return cutoff_once(id, sp, seed, opt);
}

double run_second_derivative_reconstruction(const Grid& g, std::uint64_t seed, const IdentityOptions& opt) {
    require_periodic(g, "G.1");
    double worst = 0.0;
    const int band = default_band(g);
    for (int q : {0, full_parity(g)}) {
        SpacePtr vs = spaces::vector(g, q);
        OperatorHandle gr = st::Grad(vs);
        OperatorHandle dgr = compose(st::dev(gr.codomain()), gr);
        const Eigen::VectorXd v = random_smooth_field(vs, seed + static_cast<std::uint64_t>(q), band).values();
        const Eigen::VectorXd G = gr.apply(v);
        const Eigen::VectorXd D = dgr.apply(v);
        auto slot = [&](int i, int j, int k) {
            SpacePtr out = spaces::scalar(g, q ^ (1 << i) ^ (1 << j) ^ (1 << k));
            return assemble("d", gr.codomain(), out, {{0, 0, i, j, 1.0, k}});
        };
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                for (int k = 0; k < 3; ++k) {
                    const OperatorHandle dk = slot(i, j, k);
                    const Eigen::VectorXd lhs = dk.apply(G);
                    std::vector<Eigen::VectorXd> rhs_list;
                    std::vector<double> scale_list;
                    if (i != j) {
                        rhs_list.push_back(dk.apply(D));
                        scale_list.push_back(max_abs(rhs_list.back()));
                    }
                    if (i != k) {
                        const OperatorHandle dj = slot(i, k, j);
                        rhs_list.push_back(dj.apply(D));
                        scale_list.push_back(max_abs(rhs_list.back()));
                    }
                    if (i == j && j == k) {
                        Eigen::VectorXd a = 1.5 * slot(i, i, i).apply(D);
                        double sc = max_abs(a);
                        for (int l = 0; l < 3; ++l) {
                            if (l == i) continue;
                            Eigen::VectorXd b = 0.5 * slot(l, i, l).apply(D);
                            sc = std::max(sc, max_abs(b));
                            a += b;
                        }
                        rhs_list.push_back(a);
                        scale_list.push_back(sc);
                    }
                    for (std::size_t r = 0; r < rhs_list.size(); ++r) {
                        Eigen::VectorXd rhs = opt.negate_rhs ? Eigen::VectorXd(-rhs_list[r]) : rhs_list[r];
                        const double scale = std::max(max_abs(lhs), scale_list[r]);
                        if (scale > 0.0)
                            worst = std::max(worst, max_abs(Eigen::VectorXd(lhs - rhs)) / scale);
                    }
                }
    }
    return worst;
}

}  // namespace ggdd
