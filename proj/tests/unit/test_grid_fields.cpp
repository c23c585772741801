#include "doctest.h"

#include "ggdd/diffops.hpp"
#include "ggdd/errors.hpp"
#include "ggdd/field_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

using namespace ggdd;

namespace {

template <class F>
ErrorKind kind_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    return ErrorKind::InvalidArgument;
}

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("ggdd_test_" + name)).string();
}

}  // namespace

TEST_CASE("grid spacing per boundary mode") {
    const Grid b = Grid::box(9, 4, 7, 1.0, 2.0, 0.5);
    CHECK(b.h(0) == doctest::Approx(0.1));
    CHECK(b.h(1) == doctest::Approx(0.4));
    CHECK(b.h(2) == doctest::Approx(0.0625));
    const Grid t = Grid::torus(8);
    CHECK(t.h(0) == doctest::Approx(0.125));
}

TEST_CASE("inner products") {
    const Grid g = Grid::box(8);
    const auto one = sample_scalar(spaces::U(g), [](const auto&) { return 1.0; });
    CHECK(inner_product(one, one) == doctest::Approx(512.0 / 729.0).epsilon(1e-15));

    const Grid t = Grid::torus(6);
    auto ts = spaces::tensor(t, 0);
    const auto skew = sample_tensor(ts, [](const auto&) { return spn({1.0, -2.0, 0.5}); });
    const auto symm = sample_tensor(ts, [](const auto&) { return Mat3::from_rows({1, 2, 3}, {2, 4, 5}, {3, 5, 6}); });
    CHECK(std::abs(inner_product(skew, symm)) < 1e-14);

    for (Grid gg : {Grid::box(6, 5, 4), Grid::torus(5)}) {
        for (SpacePtr sp : {gg.periodic() ? spaces::tensor(gg, 0) : spaces::Sfull(gg),
                            gg.periodic() ? spaces::vector(gg, 7) : spaces::V(gg)}) {
            Field f(sp, random_vector(sp->dof(), 1)), h(sp, random_vector(sp->dof(), 2));
            CHECK(inner_product(f, h) == inner_product(h, f));
            CHECK(inner_product(f, f) > 0.0);
            const double lin = inner_product(2.0 * f + h, h);
            CHECK(lin == doctest::Approx(2.0 * inner_product(f, h) + inner_product(h, h)).epsilon(1e-13));
        }
    }
    CHECK(kind_of([&] { inner_product(one, sample_scalar(spaces::U(Grid::box(6)), [](const auto&) { return 1.0; })); }) ==
          ErrorKind::GridMismatch);
}

TEST_CASE("finite subspaces are orthonormal and project correctly") {
    const Grid g = Grid::box(6, 5, 7, 1.0, 1.5, 0.8);
    const auto v = spaces::V(g);
    const auto rt = make_RT0(v);
    const auto rm = make_RM(v);
    const auto r = make_R(spaces::U(g));
    CHECK(rt.dim() == 4);
    CHECK(rm.dim() == 6);
    CHECK(r.dim() == 1);
    CHECK(make_RM(spaces::V2(Grid::box2d(5, 6))).dim() == 3);
    for (const auto* s : {&rt, &rm}) {
        for (int i = 0; i < s->dim(); ++i)
            for (int j = 0; j < s->dim(); ++j)
                CHECK(std::abs(inner_product(s->basis[i], s->basis[j]) - (i == j ? 1.0 : 0.0)) < 1e-12);
    }

    const auto lin = sample_vector(v, [](const auto& x) { return Vec3{2 * x[0] + 1, 2 * x[1] - 3, 2 * x[2] + 0.5}; });
    const auto pr = project_subspace(lin, rt);
    CHECK(norm(pr.complement) < 1e-12 * norm(lin));

    Field f(v, random_vector(v->dof(), 5)), h(v, random_vector(v->dof(), 6));
    const auto pf = project_subspace(f, rt);
    for (const auto& b : rt.basis) CHECK(std::abs(inner_product(pf.complement, b)) < 1e-12 * norm(f));
    CHECK(norm(project_subspace(pf.projection, rt).projection - pf.projection) < 1e-12 * norm(f));
    const double a1 = inner_product(pf.projection, h);
    const double a2 = inner_product(f, project_subspace(h, rt).projection);
    CHECK(std::abs(a1 - a2) < 1e-12 * norm(f) * norm(h));

    // zero-mean scalar has no R component
    const auto odd = sample_scalar(spaces::U(Grid::box(6)), [](const auto& x) { return x[0] - 0.5; });
    CHECK(norm(project_subspace(odd, make_R(odd.space())).projection) < 1e-15);
}

TEST_CASE("random smooth fields") {
    const Grid g = Grid::box(16);
    const auto a = random_smooth_field(g, Rank::Scalar, 11, 2);
    const auto b = random_smooth_field(g, Rank::Scalar, 11, 2);
    CHECK((a.values() - b.values()).norm() == 0.0);
    // reference value pinned from the first run
    CHECK(max_abs(a) == doctest::Approx(0.2708814039630314).epsilon(1e-15));
    CHECK(max_abs(random_smooth_field(Grid::box(8), Rank::Vector, 1, 0)) == 0.0);
    const auto dc = random_smooth_field(Grid::torus(8), Rank::Scalar, 3, 0);
    CHECK(dc.values().maxCoeff() == dc.values().minCoeff());
    CHECK(kind_of([] { random_smooth_field(Grid::box(8), Rank::Scalar, 1, 3); }) == ErrorKind::BandTooHigh);
    // sine series vanish at the boundary layer of free layouts
    const auto s = random_smooth_field(spaces::V(Grid::box(8)), 4, 2);
    const auto& sp = *s.space();
    double boundary = 0.0;
    for (int c = 0; c < sp.ncomp(); ++c)
        for (std::size_t l = 0; l < sp.comps()[c].count; ++l) {
            const auto x = sp.coord(c, l);
            for (double xi : x)
                if (xi == 0.0 || xi == 1.0) boundary = std::max(boundary, std::abs(s.values()[sp.comps()[c].offset + l]));
        }
    CHECK(boundary < 1e-15);
}

TEST_CASE("FLD1 round trip and malformed files") {
    const Grid g = Grid::box(5, 4, 6);
    const std::string p = temp_path("rt.fld");
    for (SpacePtr sp : {spaces::S(g), spaces::T(g), spaces::edges(g), spaces::U(g)}) {
        Field f(sp, random_vector(sp->dof(), 9));
        write_field(p, f);
        const Field r = read_field(p);
        CHECK(r.space()->compatible(*sp));
        CHECK((r.values() - f.values()).norm() == 0.0);
    }
    Field s(spaces::U(g), random_vector(spaces::U(g)->dof(), 1));
    write_field(p, s);
    CHECK(kind_of([&] { read_field(p, Rank::Vector); }) == ErrorKind::DimMismatch);
    {
        std::ifstream is(p, std::ios::binary);
        std::string all((std::istreambuf_iterator<char>(is)), {});
        std::ofstream os(p, std::ios::binary);
        os << all.substr(0, all.size() - 8);
    }
    CHECK(kind_of([&] { read_field(p); }) == ErrorKind::TruncatedPayload);
    {
        std::ofstream os(p, std::ios::binary);
        os << "FLD2\n";
    }
    CHECK(kind_of([&] { read_field(p); }) == ErrorKind::BadMagic);
    std::remove(p.c_str());
}
