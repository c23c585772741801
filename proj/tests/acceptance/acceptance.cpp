// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include "ggdd/biharmonic.hpp"
#include "ggdd/complex_tools.hpp"
#include "ggdd/dense.hpp"
#include "ggdd/errors.hpp"
#include "ggdd/identity_suite.hpp"
#include "ggdd/manufactured.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <string>
#include <vector>

using namespace ggdd;

namespace {

namespace tol {
constexpr double identity = 1e-12;
constexpr double identity_seconds = 30.0;
constexpr double exactness = 1e-13;
constexpr double kernel_threshold = 1e-8;
constexpr double orthogonality = 1e-8;
constexpr double reconstruction = 1e-9;
constexpr double helmholtz_seconds = 60.0;
constexpr double c_g_rel = 0.02;
constexpr double dual_rel = 1e-6;
constexpr double c_d_slack = 0.02;
constexpr double infsup_slack = 0.02;
constexpr double mixed_rel = 1e-8;
constexpr double rate_lo = 1.7;
constexpr double rate_hi = 2.3;
constexpr double h2_const = 10.0;  // |u_method - u_primal| / |u_primal| <= C h^2
constexpr double v_over_e = 1e-8;
constexpr double ladder_seconds = 600.0;
constexpr double potential = 1e-8;
constexpr double twod_seconds = 60.0;
constexpr double split_divdiv = 1e-9;
constexpr double resplit = 1e-10;
}  // namespace tol

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(const char* f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

Outcome identities() {
    const auto t0 = Clock::now();
    double worst = 0.0;
    int count = 0;
    for (int n : {8, 16}) {
        const Grid g = Grid::torus(n);
        for (const auto& c : identity_registry()) {
            for (std::uint64_t seed = 1; seed <= 5; ++seed) worst = std::max(worst, run_identity(c.id, g, seed, 1));
            count += n == 8;
        }
    }
    const double secs = since(t0);
    return {count >= 17 && worst <= tol::identity && secs < tol::identity_seconds,
            std::to_string(count) + " identities, max residual " + fmt("%.2e", worst) + ", " + fmt("%.2f s", secs)};
}

Outcome exactness() {
    const Grid g = Grid::box(8, 7, 6);
    double comp = 0.0;
    for (const char* c : {"derham-mathring", "gradgrad-mathring"}) comp = std::max(comp, complex_defect(make_complex(c, g)));
    double adj = 0.0;
    for (const char* n : {"grad", "rot", "div"}) adj = std::max(adj, check_adjoint_pair(build_first_order(g, n, BcKind::Mathring), 3, 1).max_defect);
    for (const char* n : {"Gradgrad", "RotS", "DivT"}) adj = std::max(adj, check_adjoint_pair(build_composite(g, n), 3, 1).max_defect);
    return {comp <= tol::exactness && adj <= tol::exactness,
            "composition " + fmt("%.2e", comp) + ", adjoint pairs " + fmt("%.2e", adj)};
}

Outcome kernels() {
    const Grid g = Grid::box(6);
    const int dg = null_count(isometric_dense(build_composite(g, "devGrad")), tol::kernel_threshold);
    const int gg = null_count(isometric_dense(build_composite(g, "Gradgrad")), tol::kernel_threshold);
    const int rt = make_RT0(spaces::V(g)).dim();
    return {dg == 4 && dg == rt && gg == 0,
            "dim N(devGrad) = " + std::to_string(dg) + ", dim RT0 = " + std::to_string(rt) + ", dim N(Gradgrad) = " +
                std::to_string(gg)};
}

Outcome helmholtz() {
    const auto t0 = Clock::now();
    const Grid g = Grid::box(6);
    std::vector<DecompositionResult> rs;
    const auto e = spaces::edges(g), f = spaces::faces(g), s = spaces::S(g), t = spaces::T(g);
    rs.push_back(helmholtz_vector(Field(e, random_vector(e->dof(), 1)), "dirichlet"));
    rs.push_back(helmholtz_vector(Field(f, random_vector(f->dof(), 2)), "neumann"));
    rs.push_back(helmholtz_tensor(Field(s, random_vector(s->dof(), 3)), "S"));
    rs.push_back(helmholtz_tensor(Field(t, random_vector(t->dof(), 4)), "T"));
    double orth = 0.0, rec = 0.0;
    int harm = 0;
    for (const auto& r : rs) {
        orth = std::max(orth, r.orthogonality_max);
        rec = std::max(rec, r.reconstruction_residual);
        harm = std::max(harm, r.harmonic_dim);
    }
    const auto betti = cohomology_dims(make_complex("derham", Grid::torus(6)));
    const bool betti_ok = betti == std::vector<int>{1, 3, 3, 1};
    const double secs = since(t0);
    std::string b;
    for (int d : betti) b += (b.empty() ? "" : ",") + std::to_string(d);
    return {orth <= tol::orthogonality && rec <= tol::reconstruction && harm == 0 && betti_ok &&
                secs < tol::helmholtz_seconds,
            "orthogonality " + fmt("%.2e", orth) + ", reconstruction " + fmt("%.2e", rec) + ", harmonic dim " +
                std::to_string(harm) + ", torus (" + b + "), " + fmt("%.2f s", secs)};
}

Outcome constants() {
    const double cg = estimate_constant("c_g", Grid::box(32)).value;
    const double exact = 1.0 / (std::sqrt(3.0) * M_PI);
    const double cg_err = std::abs(cg - exact) / exact;
    const Grid g = Grid::box(6);
    double dual = 0.0;
    double cr = 0.0, cd = 0.0;
    for (const char* tag : {"c_g", "c_r", "c_d", "c_Gg", "c_R", "c_D"}) {
        const double p = estimate_constant(tag, g).value;
        const double d = estimate_constant(tag, g, 1e-10, true).value;
        dual = std::max(dual, std::abs(p - d) / p);
        if (std::string(tag) == "c_r") cr = p;
        if (std::string(tag) == "c_d") cd = p;
    }
    const double cap = std::sqrt(3.0) / M_PI * (1.0 + tol::c_d_slack);
    return {cg_err <= tol::c_g_rel && dual <= tol::dual_rel && cr <= cd && cd <= cap,
            "c_g(32) = " + fmt("%.6f", cg) + " (rel " + fmt("%.2e", cg_err) + "), dual " + fmt("%.2e", dual) +
                ", c_r = " + fmt("%.4f", cr) + " <= c_d = " + fmt("%.4f", cd) + " <= " + fmt("%.4f", cap)};
}

Outcome infsup() {
    const auto r = check_infsup(Grid::box(6));
    return {r.value >= r.bound - tol::infsup_slack,
            "beta = " + fmt("%.6f", r.value) + ", bound = " + fmt("%.6f", r.bound)};
}

bool rates_ok(const std::vector<ConvergenceRow>& rows, double& lo, double& hi) {
    bool ok = true;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        lo = std::min(lo, rows[i].rate);
        hi = std::max(hi, rows[i].rate);
        ok = ok && rows[i].rate >= tol::rate_lo && rows[i].rate <= tol::rate_hi;
    }
    return ok;
}

Outcome ladder() {
    const auto t0 = Clock::now();
    const auto c = get_case("sin2-3d");
    const Grid g12 = c.grid(12);
    const Field f = sample_f(c, g12);
    const auto p = solve_primal(f);
    const double mixed = norm(solve_mixed(f).u - p.u) / norm(p.u);
    const auto dc = solve_decomposed(f);
    const double ve = dc.v_norm / dc.e_norm;

    const std::vector<int> grids{8, 12, 16, 24};
    double lo = 1e9, hi = -1e9, worst_h2 = 0.0;
    bool ok = true;
    for (const char* m : {"primal", "mixed", "ddz", "decomposed"}) ok = rates_ok(convergence_study(c, m, grids), lo, hi) && ok;
    for (int n : grids) {
        const Grid g = c.grid(n);
        const Field fn = sample_f(c, g);
        const Field up = solve_primal(fn).u;
        const double h = g.h(0);
        for (const char* m : {"ddz", "decomposed"})
            worst_h2 = std::max(worst_h2, norm(solve_by_name(m, fn).u - up) / norm(up) / (h * h));
    }
    const double secs = since(t0);
    return {ok && mixed <= tol::mixed_rel && worst_h2 <= tol::h2_const && ve <= tol::v_over_e &&
                secs < tol::ladder_seconds,
            "mixed-primal " + fmt("%.2e", mixed) + ", rates in [" + fmt("%.3f", lo) + ", " + fmt("%.3f", hi) +
                "], max diff/h^2 " + fmt("%.2e", worst_h2) + ", |v|/|E| " + fmt("%.2e", ve) + ", " +
                fmt("%.2f s", secs)};
}

Outcome potentials() {
    const Grid g = Grid::box(8);
    auto range_of = [&](const char* op, std::uint64_t seed) {
        const auto a = build_composite(g, op);
        return a.apply(Field(a.domain(), random_vector(a.domain()->dof(), seed)));
    };
    const auto u = spaces::U(g);
    const std::vector<std::pair<const char*, Field>> inputs{
        {"Pot_Gradgrad", range_of("Gradgrad", 1)}, {"Pot_RotS", range_of("RotS", 2)},
        {"Pot_DivT", range_of("DivT", 3)},         {"Pot_devGrad", range_of("devGrad", 4)},
        {"Pot_symRot", range_of("symRot", 5)},     {"Pot_divDiv", Field(u, random_vector(u->dof(), 6))}};
    double worst = 0.0;
    for (const auto& [name, y] : inputs) {
        const auto r = potential_composed(name, y, 1e-10);
        const double rel = norm(composed_forward(name, g).apply(r.value) - y) / norm(y);
        worst = std::max({worst, rel, r.forward_residual});
    }
    return {worst <= tol::potential, "6 potentials, max forward residual " + fmt("%.2e", worst)};
}

Outcome twod() {
    const auto t0 = Clock::now();
    const auto c = get_case("sin2-2d");
    const std::vector<int> grids{16, 24, 32, 48};
    double lo = 1e9, hi = -1e9, worst_h2 = 0.0;
    bool ok = rates_ok(convergence_study(c, "primal2d", grids), lo, hi);
    ok = rates_ok(convergence_study(c, "decomposed2d", grids), lo, hi) && ok;
    for (int n : grids) {
        const Grid g = c.grid(n);
        const Field f = sample_f(c, g);
        const Field up = solve_primal_2d(f).u;
        worst_h2 = std::max(worst_h2, norm(solve_decomposed_2d(f).u - up) / norm(up) / (g.h(0) * g.h(0)));
    }
    const double secs = since(t0);
    return {ok && worst_h2 <= tol::h2_const && secs < tol::twod_seconds,
            "rates in [" + fmt("%.3f", lo) + ", " + fmt("%.3f", hi) + "], max diff/h^2 " + fmt("%.2e", worst_h2) +
                ", " + fmt("%.2f s", secs)};
}

Outcome split() {
    const Grid g = Grid::box(8);
    const auto s = spaces::S(g);
    const Field m(s, random_vector(s->dof(), 12));
    const auto r = split_H0m1(m);
    const auto gg = build_composite(g, "Gradgrad");
    const double dd = norm(gg.adjoint().apply(r.m0)) / norm(m);
    const double again = norm(split_H0m1(r.m0).u) / norm(m);
    return {dd <= tol::split_divdiv && again <= tol::resplit,
            "|divDiv M0|/|M| " + fmt("%.2e", dd) + ", resplit |u|/|M| " + fmt("%.2e", again)};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"identity suite", identities},       {"complex and adjoint exactness", exactness},
        {"kernels", kernels},                 {"Helmholtz decompositions", helmholtz},
        {"constants", constants},             {"inf-sup", infsup},
        {"solver equivalence and rates", ladder}, {"potentials", potentials},
        {"2D decomposition", twod},           {"H^-1 splitting", split}};
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += !o.pass;
        std::printf("%s criterion %zu: %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                    o.detail.c_str());
        std::fflush(stdout);
    }
    return failed ? 1 : 0;
}
