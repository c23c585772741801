#pragma once

#include "ggdd/grid.hpp"
#include "ggdd/tensor_algebra.hpp"

#include <Eigen/Core>

#include <memory>
#include <string>
#include <vector>

namespace ggdd {

enum class Rank { Scalar, Vector, Tensor };
enum class Constraint { None, Symmetric, TraceFree };
enum class BcKind { Mathring, Free, Periodic };

// Which parity-0 (node) axes of a component include the boundary nodes.
enum class Extent { Interior, RowFull, AllFull };

struct Component {
    std::string label;
    Layout layout{};
    Mat3 basis;         // scalar uses a[0], vectors a[0..2]
    double factor = 1;  // squared Frobenius norm of basis
    std::array<int, 3> shape{1, 1, 1};
    std::size_t offset = 0;
    std::size_t count = 0;
};

class Space;
using SpacePtr = std::shared_ptr<const Space>;

// A discrete field space: components with their own staggered layouts and mass weights.
class Space {
public:
    static SpacePtr make(const Grid& g, Rank rank, Constraint c, int parity, Extent extent,
                         BcKind bc, const std::string& name = "");
    static SpacePtr from_key(const Grid& g, const std::string& key, const std::string& name = "");

    const Grid& grid() const { return grid_; }
    Rank rank() const { return rank_; }
    Constraint constraint() const { return constraint_; }
    BcKind bc() const { return bc_; }
    int parity() const { return parity_; }
    Extent extent() const { return extent_; }
    const std::string& name() const { return name_; }
    std::string key() const;

    const std::vector<Component>& comps() const { return comps_; }
    int ncomp() const { return static_cast<int>(comps_.size()); }
    std::size_t dof() const { return dof_; }
    const Eigen::VectorXd& weights() const { return weights_; }
    // weights = rel_weights * cell_volume; rel_weights are exact powers of two.
    const Eigen::VectorXd& rel_weights() const { return rel_weights_; }
    double cell_volume() const { return volume_; }

    std::size_t index(int c, int i, int j, int k) const;
    std::array<double, 3> coord(int c, std::size_t local) const;
    std::array<int, 3> multi_index(int c, std::size_t local) const;

    bool compatible(const Space& o) const { return grid_ == o.grid_ && key() == o.key(); }

private:
    Space() = default;
    Grid grid_;
    Rank rank_ = Rank::Scalar;
    Constraint constraint_ = Constraint::None;
    BcKind bc_ = BcKind::Mathring;
    int parity_ = 0;
    Extent extent_ = Extent::Interior;
    std::string name_;
    std::vector<Component> comps_;
    std::size_t dof_ = 0;
    Eigen::VectorXd weights_;
    Eigen::VectorXd rel_weights_;
    double volume_ = 1.0;
};

int full_parity(const Grid& g);
Layout entry_layout(const Grid& g, Rank rank, int parity, Extent extent, int i, int j);

// Catalog of the spaces of the de Rham and Gradgrad complexes.
namespace spaces {
SpacePtr U(const Grid& g);       // scalar, interior nodes (H2-mathring / H1-mathring)
SpacePtr cells(const Grid& g);   // scalar at cell centres (L2 end of de Rham)
SpacePtr edges(const Grid& g);   // tangential-mathring vectors (grad/rot)
SpacePtr faces(const Grid& g);   // normal-mathring vectors (rot/div)
SpacePtr V(const Grid& g);       // L2 vectors, end of the Gradgrad complex
SpacePtr S(const Grid& g);       // symmetric tensors
SpacePtr T(const Grid& g);       // trace-free tensors
SpacePtr Sfull(const Grid& g);   // general tensors on the S layout
SpacePtr Tfull(const Grid& g);   // general tensors on the T layout
SpacePtr V2(const Grid& g);      // 2D free displacement field (H1 vectors)
SpacePtr scalar(const Grid& g, int parity);
SpacePtr vector(const Grid& g, int parity);
SpacePtr tensor(const Grid& g, int parity, Constraint c = Constraint::None);
}  // namespace spaces

}  // namespace ggdd
