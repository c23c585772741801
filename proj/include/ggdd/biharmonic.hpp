#pragma once

#include "ggdd/diffops.hpp"
#include "ggdd/krylov.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ggdd {

struct BiharmonicSolution {
    std::string method;
    Field u;
    std::optional<Field> p;
    std::optional<Field> m;   // mixed: M = -Gradgrad u; ddz and decomposed: pI + M0
    std::optional<Field> m0;
    std::optional<Field> e;
    std::optional<Field> v;
    double v_norm = 0.0;
    double e_norm = 0.0;
    double rm_defect = 0.0;  // 2D elasticity stage: largest RM moment of the residual, relative
    std::vector<SolveReport> reports;
    double total_seconds() const;
};

struct BiharmonicOptions {
    double tol = 1e-10;
    int maxit = 0;
};

// f is sampled on the mathring scalar space U of a box grid; every method returns u on U.
BiharmonicSolution solve_primal(const Field& f, const BiharmonicOptions& opt = {});
BiharmonicSolution solve_mixed(const Field& f, const BiharmonicOptions& opt = {});
BiharmonicSolution solve_ddz(const Field& f, const BiharmonicOptions& opt = {});
BiharmonicSolution solve_decomposed(const Field& f, const BiharmonicOptions& opt = {});
BiharmonicSolution solve_decomposed_2d(const Field& f, const BiharmonicOptions& opt = {});
BiharmonicSolution solve_primal_2d(const Field& f, const BiharmonicOptions& opt = {});
// primal, mixed, ddz, decomposed, decomposed2d, primal2d
BiharmonicSolution solve_by_name(const std::string& method, const Field& f, const BiharmonicOptions& opt = {});
bool method_is_2d(const std::string& method);

// 2D stress function map v -> M0 with M0_11 = d2 v2, M0_22 = d1 v1, M0_12 = -(d2 v1 + d1 v2)/2.
OperatorHandle airy_map(const Grid& g2);
// u -> uI on the S layout.
OperatorHandle scalar_identity_map(const Grid& g);

struct InfSupResult {
    double value = 0.0;        // inf_u sup_M <divDiv M, u> / (|M|_{divDiv} |grad u|)
    double c_g = 0.0;
    double bound = 0.0;        // (3 c_g^2 + 1)^{-1/2}
    double test_quotient = 0.0;  // smallest quotient over random phi with M = -phi I
};
InfSupResult check_infsup(const Grid& g, int probes = 8);

}  // namespace ggdd
