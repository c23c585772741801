#pragma once

#include "ggdd/space.hpp"

#include <Eigen/Dense>

#include <vector>

namespace ggdd {

// Componentwise shifted Laplacian (-Δ + shift) on a staggered space, solved directly through per-axis
// eigendecompositions. Axis closures: Interior nodes Dirichlet, Full nodes and Half cells Neumann,
// periodic sets periodic. On the mathring scalar space U this equals grad0* grad0 exactly.
class SeparableLaplacian {
public:
    explicit SeparableLaplacian(SpacePtr sp, double shift = 0.0);

    Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
    // (-Δ + shift)^{-power} x
    Eigen::VectorXd solve(const Eigen::VectorXd& x, int power = 1) const;
    double min_eigenvalue() const;
    const SpacePtr& space() const { return space_; }

private:
    struct Axis {
        Eigen::MatrixXd op;       // 1D operator
        Eigen::MatrixXd to_eig;   // Q^T W^{1/2}
        Eigen::MatrixXd from_eig; // W^{-1/2} Q
        Eigen::VectorXd lambda;
    };
    struct Comp {
        std::array<int, 3> shape;
        std::size_t offset;
        std::array<int, 3> axis;  // index into axes_
    };
    SpacePtr space_;
    double shift_;
    std::vector<Axis> axes_;
    std::vector<Comp> comps_;
    std::vector<std::pair<std::pair<int, int>, int>> cache_;
};

// Applies a dense matrix along one axis of a component block laid out x-fastest.
void apply_along_axis(double* data, const std::array<int, 3>& shape, int axis, const Eigen::MatrixXd& m);

}  // namespace ggdd
