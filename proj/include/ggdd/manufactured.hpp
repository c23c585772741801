#pragma once

#include "ggdd/biharmonic.hpp"
#include "ggdd/field.hpp"

#include <array>
#include <functional>
#include <string>
#include <vector>

namespace ggdd {

// u(x) = prod_i q_i(x_i); every factor carries closed-form derivatives up to order 4.
struct ManufacturedCase {
    std::string name;
    int dim = 3;
    std::array<double, 3> L{1.0, 1.0, 1.0};
    std::string boundary = "clamped";
    std::function<double(int axis, int order, double x)> factor;
    std::function<long double(int axis, long double x)> value_ld;  // q_i in extended precision for the oracle

    double u(const std::array<double, 3>& x) const;
    double derivative(const std::array<int, 3>& order, const std::array<double, 3>& x) const;
    double laplacian(const std::array<double, 3>& x) const;
    double f(const std::array<double, 3>& x) const;  // bilaplacian
    Grid grid(int n) const;
};

// sin2-3d, poly-3d, sin2-2d
ManufacturedCase get_case(const std::string& name);
std::vector<std::string> case_names();

// Sixth-order nested central differences of u, evaluated in long double.
double fd_bilaplacian(const ManufacturedCase& c, const std::array<double, 3>& x, double h = 0.005);
// Largest |f - fd| over seeded interior points.
double fd_oracle_defect(const ManufacturedCase& c, int points = 10, std::uint64_t seed = 7);

struct ConvergenceRow {
    int n = 0;
    double h = 0.0;
    double error = 0.0;
    double rate = 0.0;  // NaN on the first row
    std::string method;
    std::string case_name;
    double seconds = 0.0;
};

// Discrete L2 error against u at the nodes of U; rate between consecutive rows uses h = L/(n+1).
std::vector<ConvergenceRow> convergence_study(const ManufacturedCase& c, const std::string& method,
                                              const std::vector<int>& grids, double tol = 1e-10);
std::string convergence_csv(const std::vector<ConvergenceRow>& rows);

Field sample_u(const ManufacturedCase& c, const Grid& g);
Field sample_f(const ManufacturedCase& c, const Grid& g);

}  // namespace ggdd
