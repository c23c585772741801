#pragma once

#include "ggdd/field.hpp"

#include <Eigen/SparseCore>

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace ggdd {

using SpMat = Eigen::SparseMatrix<double, Eigen::RowMajor>;

// Sparse operator between two field spaces, carrying its mass-weighted adjoint by value.
class OperatorHandle {
public:
    OperatorHandle() = default;
    OperatorHandle(std::string name, SpacePtr domain, SpacePtr codomain, SpMat matrix);

    const std::string& name() const { return name_; }
    const SpacePtr& domain() const { return domain_; }
    const SpacePtr& codomain() const { return codomain_; }
    const SpMat& matrix() const { return matrix_; }

    bool has_adjoint() const { return has_adjoint_; }
    // Handle of the adjoint; its own adjoint is this matrix again. Throws NoAdjoint if unset.
    OperatorHandle adjoint() const;
    OperatorHandle with_adjoint(std::string adjoint_name = "") const;

    const std::string& successor() const { return successor_; }
    void set_successor(std::string s) { successor_ = std::move(s); }
    void set_name(std::string s) { name_ = std::move(s); }

    Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
    Field apply(const Field& f) const;

private:
    std::string name_;
    SpacePtr domain_;
    SpacePtr codomain_;
    SpMat matrix_;
    bool has_adjoint_ = false;
    std::string adjoint_name_;
    std::shared_ptr<const SpMat> adjoint_matrix_;
    std::string successor_;
};

// W_dom^{-1} A^T W_cod; exact because relative weights are powers of two.
SpMat weighted_transpose(const SpMat& a, const Space& domain, const Space& codomain);
OperatorHandle compose(const OperatorHandle& outer, const OperatorHandle& inner, const std::string& name = "");
OperatorHandle scaled(const OperatorHandle& op, double s, const std::string& name = "");
OperatorHandle sum(const OperatorHandle& a, const OperatorHandle& b, const std::string& name = "");

// Entry-level description: target entry += coeff * d/dx_axis (source entry); axis < 0 means no derivative.
// Entries: scalar (0,0), vector (0,i), tensor (i,j).
struct Term {
    int ti, tj;
    int si, sj;
    double coeff;
    int axis;
};
OperatorHandle assemble(const std::string& name, SpacePtr domain, SpacePtr codomain, const std::vector<Term>& terms);
// Linear pointwise map given on entries packed in a Mat3 (scalar in (0,0), vectors in row 0).
OperatorHandle pointwise(const std::string& name, SpacePtr domain, SpacePtr codomain,
                         const std::function<Mat3(const Mat3&)>& map);

// Generic first-order operators between caller-chosen spaces.
namespace ops {
OperatorHandle grad(SpacePtr dom, SpacePtr cod);
OperatorHandle rot(SpacePtr dom, SpacePtr cod);
OperatorHandle div(SpacePtr dom, SpacePtr cod);
OperatorHandle Grad(SpacePtr dom, SpacePtr cod);
OperatorHandle Rot(SpacePtr dom, SpacePtr cod);
OperatorHandle Div(SpacePtr dom, SpacePtr cod);
OperatorHandle rot2d(SpacePtr dom, SpacePtr cod);  // scalar 2D curl (d1 v2 - d2 v1)
}  // namespace ops

// Named operators of the de Rham complexes and of the row-wise tensor calculus.
// Mathring: U->edges->faces->cells and Sfull->Tfull->V with edges->Sfull for Grad.
// Free: the adjoint chain (cells->faces->edges->U, V->Tfull->Sfull->edges).
OperatorHandle build_first_order(const Grid& g, const std::string& name, BcKind bc);
// Gradgrad (U->S), RotS (S->T), DivT (T->V) and the transpose-defined divDiv, symRot, devGrad.
OperatorHandle build_composite(const Grid& g, const std::string& name);

struct AdjointDefect {
    double max_defect;
    double op_norm;
};
AdjointDefect check_adjoint_pair(const OperatorHandle& a, int trials, std::uint64_t seed);
double estimate_norm(const OperatorHandle& a, int iterations = 30);

void export_matrix_market(const std::string& path, const OperatorHandle& op);

}  // namespace ggdd
