#include "ggdd/grid.hpp"

#include "ggdd/errors.hpp"

#include <algorithm>
#include <sstream>

namespace ggdd {

const char* stagger_name(Stagger s) {
    switch (s) {
        case Stagger::Interior: return "I";
        case Stagger::Full: return "N";
        case Stagger::Half: return "H";
        case Stagger::Node: return "P";
        case Stagger::HalfP: return "Q";
        case Stagger::Flat: return "F";
    }
    return "?";
}

namespace {
void check_dims(const Grid& g) {
    for (int a = 0; a < g.dim; ++a) {
        if (g.n[a] < 4) throw Error(ErrorKind::InvalidArgument, "grid needs n >= 4 per axis");
        if (!(g.L[a] > 0.0)) throw Error(ErrorKind::InvalidArgument, "grid extent must be positive");
    }
}
}  // namespace

Grid Grid::box(int n1, int n2, int n3, double L1, double L2, double L3) {
    Grid g{3, {n1, n2, n3}, {L1, L2, L3}, BcMode::ZeroExtension};
    check_dims(g);
    return g;
}

Grid Grid::torus(int n1, int n2, int n3, double L1, double L2, double L3) {
    Grid g{3, {n1, n2, n3}, {L1, L2, L3}, BcMode::Periodic};
    check_dims(g);
    return g;
}

Grid Grid::box2d(int n1, int n2, double L1, double L2) {
    Grid g{2, {n1, n2, 1}, {L1, L2, 1.0}, BcMode::ZeroExtension};
    check_dims(g);
    return g;
}

double Grid::h(int axis) const {
    if (axis >= dim) return 1.0;
    return periodic() ? L[axis] / n[axis] : L[axis] / (n[axis] + 1);
}

int Grid::min_n() const {
    int m = n[0];
    for (int a = 1; a < dim; ++a) m = std::min(m, n[a]);
    return m;
}

std::string Grid::describe() const {
    std::ostringstream os;
    os << n[0];
    for (int a = 1; a < dim; ++a) os << "x" << n[a];
    os << (periodic() ? " periodic" : " zero");
    return os.str();
}

int stagger_size(const Grid& g, int axis, Stagger s) {
    const int n = g.n[axis];
    switch (s) {
        case Stagger::Interior: return n;
        case Stagger::Full: return n + 2;
        case Stagger::Half: return n + 1;
        case Stagger::Node:
        case Stagger::HalfP: return n;
        case Stagger::Flat: return 1;
    }
    return 0;
}

double stagger_coord(const Grid& g, int axis, Stagger s, int k) {
    const double h = g.h(axis);
    switch (s) {
        case Stagger::Interior: return (k + 1) * h;
        case Stagger::Full:
        case Stagger::Node: return k * h;
        case Stagger::Half:
        case Stagger::HalfP: return (k + 0.5) * h;
        case Stagger::Flat: return 0.0;
    }
    return 0.0;
}

double stagger_weight(const Grid& g, int axis, Stagger s, int k) {
    if (s == Stagger::Flat) return 1.0;
    const double h = g.h(axis);
    if (s == Stagger::Full && (k == 0 || k == g.n[axis] + 1)) return 0.5 * h;
    return h;
}

bool is_half(Stagger s) { return s == Stagger::Half || s == Stagger::HalfP; }

Stagger stagger_for(const Grid& g, int axis, int parity_bit, bool full) {
    if (axis >= g.dim) return Stagger::Flat;
    if (g.periodic()) return parity_bit ? Stagger::HalfP : Stagger::Node;
    if (parity_bit) return Stagger::Half;
    return full ? Stagger::Full : Stagger::Interior;
}

}  // namespace ggdd
