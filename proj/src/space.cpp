#include "ggdd/space.hpp"

#include "ggdd/errors.hpp"

#include <cmath>
#include <sstream>

namespace ggdd {

namespace {

const char* rank_name(Rank r) {
    switch (r) {
        case Rank::Scalar: return "scalar";
        case Rank::Vector: return "vector";
        case Rank::Tensor: return "tensor";
    }
    return "?";
}

const char* constraint_name(Constraint c) {
    switch (c) {
        case Constraint::None: return "full";
        case Constraint::Symmetric: return "sym";
        case Constraint::TraceFree: return "dev";
    }
    return "?";
}

const char* extent_name(Extent e) {
    switch (e) {
        case Extent::Interior: return "int";
        case Extent::RowFull: return "row";
        case Extent::AllFull: return "all";
    }
    return "?";
}

Mat3 unit(int i, int j) {
    Mat3 m;
    m(i, j) = 1.0;
    return m;
}

std::string entry_label(int i, int j) { return std::to_string(i + 1) + std::to_string(j + 1); }

}  // namespace

int full_parity(const Grid& g) { return g.dim == 3 ? 7 : 3; }

Layout entry_layout(const Grid& g, Rank rank, int parity, Extent extent, int i, int j) {
    int bits = parity;
    int row = -1;
    if (rank == Rank::Vector) {
        bits ^= 1 << i;
        row = i;
    } else if (rank == Rank::Tensor) {
        bits ^= (1 << i) ^ (1 << j);
        row = i;
    }
    Layout l{};
    for (int a = 0; a < 3; ++a) {
        const bool full = extent == Extent::AllFull || (extent == Extent::RowFull && a == row);
        l[a] = stagger_for(g, a, (bits >> a) & 1, full);
    }
    return l;
}

SpacePtr Space::make(const Grid& g, Rank rank, Constraint c, int parity, Extent extent, BcKind bc,
                     const std::string& name) {
    if (rank != Rank::Tensor && c != Constraint::None)
        throw Error(ErrorKind::BadSpacePairing, "constraints apply to tensors only");
    auto sp = std::shared_ptr<Space>(new Space());
    sp->grid_ = g;
    sp->rank_ = rank;
    sp->constraint_ = c;
    sp->parity_ = parity & full_parity(g);
    sp->extent_ = g.periodic() ? Extent::Interior : extent;
    sp->bc_ = g.periodic() ? BcKind::Periodic : bc;
    const int d = g.dim;

    struct Proto {
        std::string label;
        Mat3 basis;
        std::vector<std::pair<int, int>> entries;
    };
    std::vector<Proto> protos;
    if (rank == Rank::Scalar) {
        protos.push_back({"s", unit(0, 0), {{0, 0}}});
    } else if (rank == Rank::Vector) {
        for (int i = 0; i < d; ++i) protos.push_back({"v" + std::to_string(i + 1), unit(0, i), {{i, 0}}});
    } else if (c == Constraint::None) {
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) protos.push_back({entry_label(i, j), unit(i, j), {{i, j}}});
    } else if (c == Constraint::Symmetric) {
        for (int i = 0; i < d; ++i) protos.push_back({entry_label(i, i), unit(i, i), {{i, i}}});
        for (int i = 0; i < d; ++i)
            for (int j = i + 1; j < d; ++j)
                protos.push_back({entry_label(i, j), unit(i, j) + unit(j, i), {{i, j}, {j, i}}});
    } else {
        if (d != 3) throw Error(ErrorKind::BadSpacePairing, "trace-free tensors need a 3D grid");
        const double r2 = 1.0 / std::sqrt(2.0), r6 = 1.0 / std::sqrt(6.0);
        protos.push_back({"d1", r2 * (unit(0, 0) - unit(1, 1)), {{0, 0}, {1, 1}}});
        protos.push_back({"d2", r6 * (unit(0, 0) + unit(1, 1) - 2.0 * unit(2, 2)), {{0, 0}, {1, 1}, {2, 2}}});
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                if (i != j) protos.push_back({entry_label(i, j), unit(i, j), {{i, j}}});
    }

    std::size_t off = 0;
    for (const auto& p : protos) {
        Component comp;
        comp.label = p.label;
        comp.basis = p.basis;
        comp.factor = ddot(p.basis, p.basis);
        comp.layout = entry_layout(g, rank, sp->parity_, sp->extent_, p.entries[0].first, p.entries[0].second);
        for (const auto& e : p.entries) {
            if (entry_layout(g, rank, sp->parity_, sp->extent_, e.first, e.second) != comp.layout)
                throw Error(ErrorKind::BadSpacePairing,
                            "constraint couples entries on different layouts for this parity/extent");
        }
        comp.count = 1;
        for (int a = 0; a < 3; ++a) {
            comp.shape[a] = stagger_size(g, a, comp.layout[a]);
            comp.count *= static_cast<std::size_t>(comp.shape[a]);
        }
        comp.offset = off;
        off += comp.count;
        sp->comps_.push_back(comp);
    }
    sp->dof_ = off;
    sp->volume_ = 1.0;
    for (int a = 0; a < g.dim; ++a) sp->volume_ *= g.h(a);
    sp->rel_weights_.resize(static_cast<Eigen::Index>(off));
    for (const auto& comp : sp->comps_) {
        std::size_t idx = comp.offset;
        std::array<std::vector<double>, 3> w1;
        for (int a = 0; a < 3; ++a)
            for (int i = 0; i < comp.shape[a]; ++i)
                w1[a].push_back(a < g.dim ? stagger_weight(g, a, comp.layout[a], i) / g.h(a) : 1.0);
        for (int k = 0; k < comp.shape[2]; ++k)
            for (int j = 0; j < comp.shape[1]; ++j)
                for (int i = 0; i < comp.shape[0]; ++i)
                    sp->rel_weights_[static_cast<Eigen::Index>(idx++)] =
                        comp.factor * w1[0][static_cast<std::size_t>(i)] * w1[1][static_cast<std::size_t>(j)] *
                        w1[2][static_cast<std::size_t>(k)];
    }
    sp->weights_ = sp->rel_weights_ * sp->volume_;
    sp->name_ = name.empty() ? sp->key() : name;
    return sp;
}

std::string Space::key() const {
    std::ostringstream os;
    os << rank_name(rank_) << ':' << constraint_name(constraint_) << ':' << parity_ << ':' << extent_name(extent_);
    return os.str();
}

SpacePtr Space::from_key(const Grid& g, const std::string& key, const std::string& name) {
    std::istringstream is(key);
    std::string r, c, p, e;
    if (!std::getline(is, r, ':') || !std::getline(is, c, ':') || !std::getline(is, p, ':') ||
        !std::getline(is, e, ':'))
        throw Error(ErrorKind::InvalidArgument, "malformed space key '" + key + "'");
    Rank rank;
    if (r == "scalar") rank = Rank::Scalar;
    else if (r == "vector") rank = Rank::Vector;
    else if (r == "tensor") rank = Rank::Tensor;
    else throw Error(ErrorKind::InvalidArgument, "unknown rank in space key '" + key + "'");
    Constraint con;
    if (c == "full") con = Constraint::None;
    else if (c == "sym") con = Constraint::Symmetric;
    else if (c == "dev") con = Constraint::TraceFree;
    else throw Error(ErrorKind::InvalidArgument, "unknown constraint in space key '" + key + "'");
    Extent ext;
    if (e == "int") ext = Extent::Interior;
    else if (e == "row") ext = Extent::RowFull;
    else if (e == "all") ext = Extent::AllFull;
    else throw Error(ErrorKind::InvalidArgument, "unknown extent in space key '" + key + "'");
    int parity = 0;
    try {
        parity = std::stoi(p);
    } catch (...) {
        throw Error(ErrorKind::InvalidArgument, "bad parity in space key '" + key + "'");
    }
    return make(g, rank, con, parity, ext, BcKind::Free, name);
}

std::size_t Space::index(int c, int i, int j, int k) const {
    const auto& comp = comps_[static_cast<std::size_t>(c)];
    return comp.offset + static_cast<std::size_t>(i) +
           static_cast<std::size_t>(comp.shape[0]) *
               (static_cast<std::size_t>(j) + static_cast<std::size_t>(comp.shape[1]) * static_cast<std::size_t>(k));
}

std::array<int, 3> Space::multi_index(int c, std::size_t local) const {
    const auto& comp = comps_[static_cast<std::size_t>(c)];
    const auto s0 = static_cast<std::size_t>(comp.shape[0]);
    const auto s1 = static_cast<std::size_t>(comp.shape[1]);
    return {static_cast<int>(local % s0), static_cast<int>((local / s0) % s1), static_cast<int>(local / (s0 * s1))};
}

std::array<double, 3> Space::coord(int c, std::size_t local) const {
    const auto& comp = comps_[static_cast<std::size_t>(c)];
    const auto m = multi_index(c, local);
    return {stagger_coord(grid_, 0, comp.layout[0], m[0]), stagger_coord(grid_, 1, comp.layout[1], m[1]),
            stagger_coord(grid_, 2, comp.layout[2], m[2])};
}

namespace spaces {

SpacePtr U(const Grid& g) {
    return Space::make(g, Rank::Scalar, Constraint::None, 0, Extent::Interior, BcKind::Mathring, "U");
}
SpacePtr cells(const Grid& g) {
    return Space::make(g, Rank::Scalar, Constraint::None, full_parity(g), Extent::Interior, BcKind::Free, "cells");
}
SpacePtr edges(const Grid& g) {
    return Space::make(g, Rank::Vector, Constraint::None, 0, Extent::Interior, BcKind::Mathring, "edges");
}
SpacePtr faces(const Grid& g) {
    return Space::make(g, Rank::Vector, Constraint::None, full_parity(g), Extent::Interior, BcKind::Mathring,
                       "faces");
}
SpacePtr V(const Grid& g) {
    return Space::make(g, Rank::Vector, Constraint::None, full_parity(g), Extent::RowFull, BcKind::Free, "V");
}
SpacePtr S(const Grid& g) {
    return Space::make(g, Rank::Tensor, Constraint::Symmetric, 0, Extent::RowFull, BcKind::Mathring, "S");
}
SpacePtr T(const Grid& g) {
    return Space::make(g, Rank::Tensor, Constraint::TraceFree, full_parity(g), Extent::RowFull, BcKind::Mathring,
                       "T");
}
SpacePtr Sfull(const Grid& g) {
    return Space::make(g, Rank::Tensor, Constraint::None, 0, Extent::RowFull, BcKind::Mathring, "Sfull");
}
SpacePtr Tfull(const Grid& g) {
    return Space::make(g, Rank::Tensor, Constraint::None, full_parity(g), Extent::RowFull, BcKind::Mathring,
                       "Tfull");
}
SpacePtr V2(const Grid& g) {
    return Space::make(g, Rank::Vector, Constraint::None, 0, Extent::AllFull, BcKind::Free, "V2");
}
SpacePtr scalar(const Grid& g, int parity) {
    return Space::make(g, Rank::Scalar, Constraint::None, parity, Extent::Interior, BcKind::Periodic);
}
SpacePtr vector(const Grid& g, int parity) {
    return Space::make(g, Rank::Vector, Constraint::None, parity, Extent::Interior, BcKind::Periodic);
}
SpacePtr tensor(const Grid& g, int parity, Constraint c) {
    return Space::make(g, Rank::Tensor, c, parity, Extent::RowFull, BcKind::Periodic);
}

}  // namespace spaces

}  // namespace ggdd
