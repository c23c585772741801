#include "doctest.h"

#include "ggdd/diffops.hpp"
#include "ggdd/errors.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

using namespace ggdd;

namespace {

double max_entry(const SpMat& m) {
    double r = 0.0;
    for (Eigen::Index k = 0; k < m.outerSize(); ++k)
        for (SpMat::InnerIterator it(m, k); it; ++it) r = std::max(r, std::abs(it.value()));
    return r;
}

}  // namespace

TEST_CASE("first-order operators have weighted adjoints") {
    for (Grid g : {Grid::box(5, 4, 6, 1.0, 2.0, 1.5), Grid::torus(4, 5, 6)}) {
        for (const char* name : {"grad", "rot", "div", "Grad", "Rot", "Div"}) {
            for (BcKind bc : {BcKind::Mathring, BcKind::Free}) {
                const auto op = build_first_order(g, name, bc);
                const auto d = check_adjoint_pair(op, 3, 7);
                CAPTURE(op.name());
                CHECK(d.max_defect < 1e-13);
                const auto back = op.adjoint().adjoint();
                CHECK((back.matrix() - op.matrix()).norm() == 0.0);
            }
        }
    }
}

TEST_CASE("de Rham chains are complexes") {
    for (Grid g : {Grid::box(5, 4, 6), Grid::torus(5)}) {
        for (BcKind bc : {BcKind::Mathring, BcKind::Free}) {
            auto grad = build_first_order(g, "grad", bc);
            auto rot = build_first_order(g, "rot", bc);
            auto div = build_first_order(g, "div", bc);
            CHECK(max_entry(rot.matrix() * grad.matrix()) < 1e-9);
            CHECK(max_entry(div.matrix() * rot.matrix()) < 1e-9);
        }
    }
}

TEST_CASE("Gradgrad complex composes to zero") {
    for (Grid g : {Grid::box(5, 4, 6), Grid::torus(5)}) {
        auto gg = build_composite(g, "Gradgrad");
        auto rs = build_composite(g, "RotS");
        auto dt = build_composite(g, "DivT");
        const double scale = max_entry(gg.matrix()) * max_entry(rs.matrix());
        CHECK(max_entry(rs.matrix() * gg.matrix()) < 1e-12 * scale);
        CHECK(max_entry(dt.matrix() * rs.matrix()) < 1e-12 * scale);
        auto dd = build_composite(g, "divDiv");
        auto sr = build_composite(g, "symRot");
        auto dg = build_composite(g, "devGrad");
        CHECK(max_entry(sr.matrix() * dg.matrix()) < 1e-12 * scale);
        CHECK(max_entry(dd.matrix() * sr.matrix()) < 1e-12 * scale);
        for (const auto* op : {&gg, &rs, &dt, &dd, &sr, &dg}) CHECK(check_adjoint_pair(*op, 2, 3).max_defect < 1e-13);
    }
}

TEST_CASE("RT0 lies in the kernel of devGrad") {
    Grid g = Grid::box(5, 6, 4, 1.0, 1.3, 0.7);
    auto dg = build_composite(g, "devGrad");
    auto rt = make_RT0(dg.domain());
    REQUIRE(rt.dim() == 4);
    for (const auto& b : rt.basis) CHECK(max_abs(dg.apply(b)) < 1e-10 * max_abs(b) / g.h(0));
}

TEST_CASE("free operators equal negated adjoints of the mathring ones") {
    Grid g = Grid::box(4, 5, 6);
    const std::pair<const char*, const char*> pairs[] = {{"grad", "div"}, {"rot", "rot"}, {"div", "grad"},
                                                         {"Grad", "Div"}, {"Rot", "Rot"}, {"Div", "Grad"}};
    for (auto [m, f] : pairs) {
        auto ring = build_first_order(g, m, BcKind::Mathring);
        auto fr = build_first_order(g, f, BcKind::Free);
        const double sign = std::string(m) == "rot" || std::string(m) == "Rot" ? 1.0 : -1.0;
        CAPTURE(m);
        REQUIRE(fr.domain()->compatible(*ring.codomain()));
        CHECK(max_entry(fr.matrix() - sign * ring.adjoint().matrix()) < 1e-10);
    }
}

TEST_CASE("mismatched layouts are rejected") {
    Grid g = Grid::box(4);
    CHECK_THROWS_AS(ops::grad(spaces::cells(g), spaces::edges(g)), Error);
    CHECK_THROWS_AS(build_first_order(g, "nope", BcKind::Free), Error);
    auto raw = ops::grad(spaces::U(g), spaces::edges(g));
    CHECK_THROWS_AS(raw.adjoint(), Error);
}

TEST_CASE("stencil examples") {
    const Grid t = Grid::torus(6, 5, 7);
    const auto grad = build_first_order(t, "grad", BcKind::Periodic);
    const auto c = sample_scalar(grad.domain(), [](const auto&) { return 2.5; });
    CHECK(max_abs(grad.apply(c)) == 0.0);

    const Grid g = Grid::box(7);
    const auto div = build_first_order(g, "div", BcKind::Mathring);
    const auto x = sample_vector(div.domain(), [](const auto& p) { return Vec3{p[0], p[1], p[2]}; });
    const Field d = div.apply(x);
    const auto& sp = *d.space();
    for (std::size_t l = 0; l < sp.dof(); ++l) {
        const auto p = sp.coord(0, l);
        bool inner = true;
        for (double xi : p) inner = inner && xi > 2 * g.h(0) && xi < 1 - 2 * g.h(0);
        if (inner) CHECK(d.values()[static_cast<Eigen::Index>(l)] == doctest::Approx(3.0).epsilon(1e-13));
    }
}

TEST_CASE("Hessians are symmetric and rotations of symmetric fields are trace free") {
    const Grid g = Grid::box(6, 5, 4);
    const auto u = random_smooth_field(spaces::U(g), 3, 1);
    const auto hess = compose(build_first_order(g, "Grad", BcKind::Mathring), build_first_order(g, "grad", BcKind::Mathring));
    const Field h = hess.apply(u);
    const auto skw_op = pointwise("skw", h.space(), h.space(), [](const Mat3& m) { return skw(m); });
    CHECK(max_abs(skw_op.apply(h)) <= 1e-12 * max_abs(h));

    const Grid t = Grid::torus(6);
    const auto rot = build_first_order(t, "Rot", BcKind::Periodic);
    Field m(rot.domain(), random_vector(rot.domain()->dof(), 4));
    m = pointwise("sym", m.space(), m.space(), [](const Mat3& a) { return sym(a); }).apply(m);
    const Field r = rot.apply(m);
    const auto tr_op = pointwise("tr", r.space(), spaces::scalar(t, full_parity(t)),
                                 [](const Mat3& a) { return trace(a) * Mat3::identity(); });
    CHECK(max_abs(tr_op.apply(r)) <= 1e-13 * max_abs(r));
}

TEST_CASE("transpose-defined symRot agrees with the direct stencil away from the boundary") {
    const Grid g = Grid::box(7);
    const auto sr = build_composite(g, "symRot");
    const auto embed = pointwise("embed", sr.domain(), spaces::Tfull(g), [](const Mat3& a) { return a; });
    const auto rot = build_first_order(g, "Rot", BcKind::Free);
    const auto symp = pointwise("sym", rot.codomain(), sr.codomain(), [](const Mat3& a) { return sym(a); });
    const SpMat direct = symp.matrix() * rot.matrix() * embed.matrix();
    const SpMat diff = direct - sr.matrix();
    const auto& cod = *sr.codomain();
    int checked = 0;
    for (int c = 0; c < cod.ncomp(); ++c)
        for (std::size_t l = 0; l < cod.comps()[c].count; ++l) {
            const auto p = cod.coord(c, l);
            bool inner = true;
            for (double xi : p) inner = inner && xi >= 2 * g.h(0) - 1e-12 && xi <= 1 - 2 * g.h(0) + 1e-12;
            if (!inner) continue;
            const Eigen::Index row = static_cast<Eigen::Index>(cod.comps()[c].offset + l);
            CHECK(Eigen::VectorXd(diff.row(row).transpose()).cwiseAbs().maxCoeff() < 1e-10);
            ++checked;
        }
    CHECK(checked > 0);
}

TEST_CASE("matrix market export") {
    const auto op = build_first_order(Grid::box(4), "grad", BcKind::Mathring);
    const std::string p = (std::filesystem::temp_directory_path() / "ggdd_grad.mtx").string();
    export_matrix_market(p, op);
    std::ifstream is(p);
    std::string header;
    std::getline(is, header);
    CHECK(header == "%%MatrixMarket matrix coordinate real general");
    std::remove(p.c_str());
}
