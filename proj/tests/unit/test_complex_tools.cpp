#include "doctest.h"

#include "ggdd/complex_tools.hpp"
#include "ggdd/errors.hpp"

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

}  // namespace

TEST_CASE("complexes compose to zero") {
    for (const char* name : {"derham-mathring", "derham-free", "gradgrad-mathring", "divdiv-dual"}) {
        const auto c = make_complex(name, Grid::box(5, 6, 4));
        CAPTURE(name);
        CHECK(complex_defect(c) < 1e-13);
    }
    CHECK(complex_defect(make_complex("derham", Grid::torus(5))) < 1e-13);
    CHECK(complex_defect(make_complex("gradgrad", Grid::torus(5))) < 1e-13);
}

TEST_CASE("small cohomology counts") {
    CHECK(cohomology_dims(make_complex("derham-mathring", Grid::box(4))) == std::vector<int>{0, 0, 0, 1});
    CHECK(cohomology_dims(make_complex("derham-free", Grid::box(4))) == std::vector<int>{1, 0, 0, 0});
    CHECK(cohomology_dims(make_complex("derham", Grid::torus(4))) == std::vector<int>{1, 3, 3, 1});
    const auto gg = make_complex("gradgrad-mathring", Grid::box(4));
    CHECK(cohomology_dim(gg, 0) == 0);
    CHECK(cohomology_dim(gg, 1) == 0);
    CHECK(cohomology_dim(gg, 2) == 0);
    CHECK(cohomology_dim(gg, 3) == 4);  // RT0 at the end of the chain
    CHECK(kind_of([] { cohomology_dim(make_complex("gradgrad-mathring", Grid::box(40)), 1); }) == ErrorKind::GridTooLarge);
}

TEST_CASE("vector Helmholtz decompositions") {
    const Grid g = Grid::box(6);
    const auto e = spaces::edges(g);
    Field v(e, random_vector(e->dof(), 3));
    const auto d = helmholtz_vector(v, "dirichlet");
    REQUIRE(d.parts.size() == 3);
    CHECK(d.orthogonality_max <= 1e-8);
    CHECK(d.reconstruction_residual <= 1e-9);
    CHECK(d.parts[1].norm <= 1e-8 * norm(v));
    CHECK(d.harmonic_dim == 0);

    const auto grad = build_first_order(g, "grad", BcKind::Mathring);
    const auto pure = helmholtz_vector(grad.apply(random_smooth_field(grad.domain(), 2, 1)), "dirichlet");
    CHECK(pure.parts[1].norm <= 1e-8 * pure.parts[0].norm);
    CHECK(pure.parts[2].norm <= 1e-8 * pure.parts[0].norm);

    const auto f = spaces::faces(g);
    const auto n = helmholtz_vector(Field(f, random_vector(f->dof(), 4)), "neumann");
    CHECK(n.orthogonality_max <= 1e-8);
    CHECK(n.harmonic_dim == 0);

    const Grid t = Grid::torus(6);
    const auto tv = spaces::vector(t, 0);
    const auto td = helmholtz_vector(Field(tv, random_vector(tv->dof(), 5)), "dirichlet");
    CHECK(td.harmonic_dim == 3);
    CHECK(td.parts[1].norm > 1e-3);
    CHECK(td.orthogonality_max <= 1e-8);
}

TEST_CASE("tensor Helmholtz decompositions") {
    const Grid g = Grid::box(5);
    const auto s = spaces::S(g);
    const auto ds = helmholtz_tensor(Field(s, random_vector(s->dof(), 1)), "S");
    CHECK(ds.orthogonality_max <= 1e-8);
    CHECK(ds.reconstruction_residual <= 1e-9);
    CHECK(ds.harmonic_dim == 0);

    const auto dg = build_composite(g, "devGrad");
    const auto t_in = dg.apply(Field(dg.domain(), random_vector(dg.domain()->dof(), 2)));
    const auto dt = helmholtz_tensor(t_in, "T");
    CHECK(dt.parts[0].norm <= 1e-8 * norm(t_in));
    CHECK(dt.reconstruction_residual <= 1e-9);
    CHECK(dt.harmonic_dim == 0);

    const auto sf = spaces::Sfull(g);
    Field nonsym(sf, random_vector(sf->dof(), 3));
    CHECK(kind_of([&] { helmholtz_tensor(nonsym, "S"); }) == ErrorKind::ConstraintViolated);
}

TEST_CASE("Friedrichs constants") {
    const Grid g = Grid::box(6);
    for (const char* tag : {"c_g", "c_r", "c_d", "c_Gg", "c_R"}) {
        CAPTURE(tag);
        const auto p = estimate_constant(tag, g);
        const auto d = estimate_constant(tag, g, 1e-10, true);
        const double dense = constant_dense(tag, g);
        CHECK(p.converged);
        CHECK(std::abs(p.value - dense) <= 1e-6 * dense);
        CHECK(std::abs(d.value - dense) <= 1e-6 * dense);
        // monotone after the first few iterates
        for (std::size_t i = 3; i < p.history.size(); ++i) CHECK(p.history[i] >= p.history[i - 1] * (1 - 1e-10));
    }
    const double cr = estimate_constant("c_r", g).value;
    const double cd = estimate_constant("c_d", g).value;
    CHECK(cr <= cd);
    CHECK(cd <= std::sqrt(3.0) / M_PI * 1.02);
    CHECK(estimate_constant("c_g", Grid::box(16)).value == doctest::Approx(1.0 / (std::sqrt(3.0) * M_PI)).epsilon(0.02));
}

TEST_CASE("potentials") {
    const Grid g = Grid::box(6);
    const auto gg = build_composite(g, "Gradgrad");
    const Field u0 = random_smooth_field(gg.domain(), 5, 1);
    const Field x = potential(gg, gg.apply(u0));
    CHECK(norm(x - u0) <= 1e-8 * norm(u0));

    const auto dt = build_composite(g, "DivT");
    const auto rt = make_RT0(dt.codomain());
    CHECK(kind_of([&] { potential(dt, rt.basis[0]); }) == ErrorKind::NotInRange);

    const auto rs = build_composite(g, "RotS");
    const Field y = rs.apply(Field(rs.domain(), random_vector(rs.domain()->dof(), 6)));
    CHECK(norm(rs.apply(potential(rs, y)) - y) <= 1e-10 * norm(y));
}

TEST_CASE("composed potentials recover their inputs") {
    const Grid g = Grid::box(6);
    auto range_of = [&](const char* op, std::uint64_t seed) {
        const auto a = build_composite(g, op);
        return a.apply(Field(a.domain(), random_vector(a.domain()->dof(), seed)));
    };
    const std::pair<const char*, Field> inputs[] = {
        {"Pot_Gradgrad", range_of("Gradgrad", 1)}, {"Pot_RotS", range_of("RotS", 2)},
        {"Pot_DivT", range_of("DivT", 3)},         {"Pot_devGrad", range_of("devGrad", 4)},
        {"Pot_symRot", range_of("symRot", 5)},
        {"Pot_divDiv", Field(spaces::U(g), random_vector(spaces::U(g)->dof(), 6))}};
    for (const auto& [name, y] : inputs) {
        CAPTURE(name);
        const auto r = potential_composed(name, y);
        CHECK(r.forward_residual <= 1e-9);
        const auto fwd = composed_forward(name, g);
        CHECK(norm(fwd.apply(r.value) - y) <= 1e-9 * norm(y));
    }

    // devGrad potential differs from the generating field by RT0 only
    const auto dg = build_composite(g, "devGrad");
    const Field v0(dg.domain(), random_vector(dg.domain()->dof(), 9));
    const auto pot = potential_composed("Pot_devGrad", dg.apply(v0));
    const auto rest = project_subspace(pot.value - v0, make_RT0(dg.domain()));
    CHECK(norm(rest.complement) <= 1e-8 * norm(v0));

    const auto s = spaces::S(g);
    const Field rs(s, random_vector(s->dof(), 1));
    const auto t = spaces::T(g);
    CHECK(kind_of([&] { potential_composed("Pot_RotS", Field(t, random_vector(t->dof(), 2))); }) == ErrorKind::NotInKernel);
    CHECK(kind_of([&] { potential_composed("Pot_DivT", make_RT0(spaces::V(g)).basis[1]); }) == ErrorKind::NotInKernel);
    CHECK(kind_of([&] { potential_composed("Pot_divDiv", rs); }) == ErrorKind::BadSpacePairing);
}
