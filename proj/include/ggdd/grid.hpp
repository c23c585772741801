#pragma once

#include <array>
#include <string>

namespace ggdd {

enum class BcMode { Periodic, ZeroExtension };

// Position set of one field component along one axis.
//   Interior: nodes k=1..n, boundary values implicitly zero
//   Full:     nodes k=0..n+1, trapezoid weight 1/2 at both ends
//   Half:     cell centres k+1/2, k=0..n
//   Node/HalfP: periodic nodes k or k+1/2, k=0..n-1
//   Flat:     the unused third axis of a 2D grid
enum class Stagger : unsigned char { Interior, Full, Half, Node, HalfP, Flat };

using Layout = std::array<Stagger, 3>;

const char* stagger_name(Stagger s);

struct Grid {
    int dim = 3;
    std::array<int, 3> n{4, 4, 4};
    std::array<double, 3> L{1.0, 1.0, 1.0};
    BcMode bc = BcMode::ZeroExtension;

    static Grid box(int n1, int n2, int n3, double L1 = 1.0, double L2 = 1.0, double L3 = 1.0);
    static Grid box(int n) { return box(n, n, n); }
    static Grid torus(int n1, int n2, int n3, double L1 = 1.0, double L2 = 1.0, double L3 = 1.0);
    static Grid torus(int n) { return torus(n, n, n); }
    static Grid box2d(int n1, int n2, double L1 = 1.0, double L2 = 1.0);

    double h(int axis) const;
    bool periodic() const { return bc == BcMode::Periodic; }
    int min_n() const;
    std::string describe() const;
    bool operator==(const Grid& o) const { return dim == o.dim && n == o.n && L == o.L && bc == o.bc; }
};

// One-dimensional helpers along `axis` of `g`.
int stagger_size(const Grid& g, int axis, Stagger s);
double stagger_coord(const Grid& g, int axis, Stagger s, int k);
double stagger_weight(const Grid& g, int axis, Stagger s, int k);
bool is_half(Stagger s);
// Stagger of a component with the given parity bit; `full` picks Full over Interior for box nodes.
Stagger stagger_for(const Grid& g, int axis, int parity_bit, bool full);

}  // namespace ggdd
