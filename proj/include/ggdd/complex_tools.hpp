#pragma once

#include "ggdd/diffops.hpp"
#include "ggdd/krylov.hpp"

#include <string>
#include <vector>

namespace ggdd {

struct ComplexDescriptor {
    std::string name;
    Grid grid;
    std::vector<OperatorHandle> ops;
};

// derham-mathring, derham-free, gradgrad-mathring, divdiv-dual; periodic grids give the periodic chains.
ComplexDescriptor make_complex(const std::string& name, const Grid& g);
// Max |A_{k+1} A_k x| / (|A_{k+1}| |A_k| |x|) over random probes.
double complex_defect(const ComplexDescriptor& c, int trials = 3, std::uint64_t seed = 1);
// Dense count of singular values of [A_k ; A_{k-1}^*] below 1e-8 sigma_max at space k.
int cohomology_dim(const ComplexDescriptor& c, int position);
std::vector<int> cohomology_dims(const ComplexDescriptor& c);

struct DecompositionPart {
    std::string name;
    Field field;
    double norm;
};

struct DecompositionResult {
    std::vector<DecompositionPart> parts;
    Eigen::MatrixXd gram;
    double orthogonality_max = 0.0;       // max off-diagonal |<p_i,p_j>| / |input|^2
    double reconstruction_residual = 0.0; // |sum parts - input| / |input|
    int harmonic_dim = -1;                // dense count when the grid is small, else -1
    std::vector<SolveReport> reports;
};

// dirichlet: grad0 U + rot0* faces + harmonic on edges; neumann: free grad cells + rot0 edges + harmonic on faces.
DecompositionResult helmholtz_vector(const Field& v, const std::string& variant, double tol = 1e-10);
// S: Gradgrad0 U + harmonic + symRot T; T: RotS S + harmonic + devGrad V.
DecompositionResult helmholtz_tensor(const Field& m, const std::string& space, double tol = 1e-10);

struct ConstantEstimate {
    std::string tag;
    double value = 0.0;
    std::vector<double> history;
    bool converged = false;
    bool dual = false;
    int iterations = 0;
};

// Tags c_g, c_r, c_d (de Rham, mathring) and c_Gg, c_R, c_D (Gradgrad complex).
OperatorHandle constant_operator(const std::string& tag, const Grid& g);
// 1 / smallest nonzero singular value by inverse iteration on A*A (dual: on A A*).
ConstantEstimate estimate_constant(const std::string& tag, const Grid& g, double tol = 1e-10, bool dual = false);
double constant_dense(const std::string& tag, const Grid& g);

// Minimum-norm preimage; NotInRange when the residual stalls above tol.
Field potential(const OperatorHandle& a, const Field& y, double tol = 1e-10, SolveReport* report = nullptr);

// Pot_Gradgrad, Pot_RotS, Pot_DivT, Pot_devGrad, Pot_symRot, Pot_divDiv.
struct ComposedPotential {
    Field value;
    double forward_residual;  // |A value - y| / |y|
};
ComposedPotential potential_composed(const std::string& name, const Field& y, double tol = 1e-10);
// Forward operator of a composed potential and the kernel check operator for its input.
OperatorHandle composed_forward(const std::string& name, const Grid& g);

struct SplitResult {
    Field u;
    Field m0;
    SolveReport report;
};
SplitResult split_H0m1(const Field& m, double tol = 1e-12);

}  // namespace ggdd
