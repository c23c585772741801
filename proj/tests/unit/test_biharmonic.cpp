#include "doctest.h"

#include "ggdd/biharmonic.hpp"
#include "ggdd/errors.hpp"
#include "ggdd/manufactured.hpp"

#include <cmath>

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

double rel_diff(const Field& a, const Field& b) { return norm(a - b) / norm(b); }

}  // namespace

TEST_CASE("zero load gives zero solutions") {
    const Grid g = Grid::box(6);
    const Field f(spaces::U(g));
    for (const char* m : {"primal", "mixed", "ddz", "decomposed"}) {
        CAPTURE(m);
        CHECK(max_abs(solve_by_name(m, f).u) == 0.0);
    }
    CHECK(max_abs(solve_decomposed_2d(Field(spaces::U(Grid::box2d(6, 6)))).u) == 0.0);
}

TEST_CASE("methods agree on a manufactured load") {
    const auto c = get_case("sin2-3d");
    const Grid g = c.grid(10);
    const Field f = sample_f(c, g);
    const auto p = solve_primal(f);
    const auto mx = solve_mixed(f);
    const auto dz = solve_ddz(f);
    const auto dc = solve_decomposed(f);
    CHECK(rel_diff(mx.u, p.u) < 1e-8);
    CHECK(rel_diff(dz.u, p.u) < 1e-8);
    CHECK(rel_diff(dc.u, p.u) < 1e-8);

    // energy identity <Gu, Gu> = <f, u>
    const auto gg = build_composite(g, "Gradgrad");
    const Field gu = gg.apply(p.u);
    CHECK(inner_product(gu, gu) == doctest::Approx(inner_product(f, p.u)).epsilon(1e-9));

    // mixed stores -Gradgrad u; the split forms store +Gradgrad u
    REQUIRE(mx.m);
    REQUIRE(dz.m);
    CHECK(norm(*mx.m + gu) < 1e-8 * norm(gu));
    CHECK(norm(*dz.m - gu) < 1e-8 * norm(gu));
    REQUIRE(dz.p);
    REQUIRE(dz.m0);
    const Field trace_free = *dz.m - scalar_identity_map(g).apply(*dz.p);
    CHECK(norm(trace_free - *dz.m0) < 1e-12 * norm(gu));

    REQUIRE(dc.e);
    CHECK(dc.v_norm < 1e-8 * dc.e_norm);
    CHECK(!dc.reports.empty());
    CHECK(p.total_seconds() >= 0.0);
}

TEST_CASE("2D methods") {
    const auto c = get_case("sin2-2d");
    const Grid g = c.grid(16);
    const Field f = sample_f(c, g);
    const auto p = solve_primal_2d(f);
    const auto d = solve_decomposed_2d(f);
    CHECK(rel_diff(d.u, p.u) < 1e-8);
    CHECK(d.rm_defect < 1e-8);
    CHECK(method_is_2d("decomposed2d"));
    CHECK_FALSE(method_is_2d("ddz"));

    // Airy map: ker = RM, and Gradgrad* A = 0
    const auto a = airy_map(g);
    const auto rm = make_RM(a.domain());
    for (const auto& b : rm.basis) CHECK(norm(a.apply(b)) < 1e-12);
    const Field v(a.domain(), random_vector(a.domain()->dof(), 3));
    const auto gg = build_composite(g, "Gradgrad");
    CHECK(norm(gg.adjoint().apply(a.apply(v))) < 1e-11 * norm(v) * estimate_norm(gg) * estimate_norm(a));
}

TEST_CASE("solver input checks") {
    CHECK(kind_of([] { solve_primal(Field(spaces::U(Grid::torus(6)))); }) == ErrorKind::WrongMode);
    CHECK(kind_of([] { solve_mixed(Field(spaces::V(Grid::box(6)))); }) == ErrorKind::BadSpacePairing);
    CHECK(kind_of([] { solve_decomposed_2d(Field(spaces::U(Grid::box(6)))); }) == ErrorKind::BadSpacePairing);
    CHECK(kind_of([] { solve_by_name("nope", Field(spaces::U(Grid::box(6)))); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("inf-sup constant") {
    const auto r = check_infsup(Grid::box(6));
    CHECK(r.value > 0.0);
    CHECK(r.value >= r.bound * (1.0 - 1e-12));
    CHECK(r.bound == doctest::Approx(1.0 / std::sqrt(3.0 * r.c_g * r.c_g + 1.0)).epsilon(1e-15));
    CHECK(r.test_quotient >= r.bound * (1.0 - 1e-12));
    CHECK(kind_of([] { check_infsup(Grid::box(20)); }) == ErrorKind::GridTooLarge);
    CHECK(kind_of([] { check_infsup(Grid::torus(6)); }) == ErrorKind::WrongMode);
}
