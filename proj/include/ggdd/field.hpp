#pragma once

#include "ggdd/space.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace ggdd {

class Field {
public:
    explicit Field(SpacePtr sp);
    Field(SpacePtr sp, Eigen::VectorXd values);

    const SpacePtr& space() const { return space_; }
    const Grid& grid() const { return space_->grid(); }
    Rank rank() const { return space_->rank(); }
    bool claims_symmetric() const { return space_->constraint() == Constraint::Symmetric; }
    bool claims_tracefree() const { return space_->constraint() == Constraint::TraceFree; }

    Eigen::VectorXd& values() { return values_; }
    const Eigen::VectorXd& values() const { return values_; }
    double& at(int c, int i, int j, int k) { return values_[static_cast<Eigen::Index>(space_->index(c, i, j, k))]; }
    double at(int c, int i, int j, int k) const {
        return values_[static_cast<Eigen::Index>(space_->index(c, i, j, k))];
    }

    Field& operator+=(const Field& o);
    Field& operator-=(const Field& o);
    Field& operator*=(double s);

private:
    SpacePtr space_;
    Eigen::VectorXd values_;
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(double s, Field a);

// Sum in a fixed pairwise tree (blocks of 8 summed left to right).
double pairwise_sum(const double* x, std::size_t n);
double weighted_dot(const Space& sp, const Eigen::VectorXd& x, const Eigen::VectorXd& y);
double weighted_norm(const Space& sp, const Eigen::VectorXd& x);

// Mass-weighted L2 product (Frobenius for tensors, times the cell volume).
double inner_product(const Field& f, const Field& g);
double norm(const Field& f);
double max_abs(const Field& f);
double max_abs(const Eigen::VectorXd& x);

// Samples a pointwise function; tensor entries are projected onto each component's basis.
Field sample_scalar(SpacePtr sp, const std::function<double(const std::array<double, 3>&)>& fn);
Field sample_vector(SpacePtr sp, const std::function<Vec3(const std::array<double, 3>&)>& fn);
Field sample_tensor(SpacePtr sp, const std::function<Mat3(const std::array<double, 3>&)>& fn);

// Seeded truncated Fourier (periodic) or sine (box) series on every component.
Field random_smooth_field(SpacePtr sp, std::uint64_t seed, int band);
// Convenience form with the default space per rank (U/edges/Sfull on boxes).
Field random_smooth_field(const Grid& g, Rank rank, std::uint64_t seed, int band);
// Seeded values in [-1,1] at every dof (adjoint and symmetry probes).
Eigen::VectorXd random_vector(std::size_t n, std::uint64_t seed);

struct FiniteSubspace {
    std::string name;
    std::vector<Field> basis;
    int dim() const { return static_cast<int>(basis.size()); }
};

FiniteSubspace make_R(SpacePtr scalar_space);
FiniteSubspace make_RT0(SpacePtr vector_space);
FiniteSubspace make_RM(SpacePtr vector_space);

struct Projection {
    Field projection;
    Field complement;
};
Projection project_subspace(const Field& f, const FiniteSubspace& s);

}  // namespace ggdd
