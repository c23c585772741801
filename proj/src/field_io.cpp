#include "ggdd/field_io.hpp"

#include "ggdd/errors.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

namespace ggdd {

namespace {

const char* kind_name(Rank r) {
    switch (r) {
        case Rank::Scalar: return "scalar";
        case Rank::Vector: return "vector";
        case Rank::Tensor: return "tensor";
    }
    return "?";
}

std::string fmt17(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

void put_le(std::ostream& os, double x) {
    auto bits = std::bit_cast<std::uint64_t>(x);
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((bits >> (8 * i)) & 0xff);
    os.write(reinterpret_cast<const char*>(b), 8);
}

double get_le(const unsigned char* b) {
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return std::bit_cast<double>(bits);
}

}  // namespace

void write_field(const std::string& path, const Field& f) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error(ErrorKind::IoError, "cannot open " + path + " for writing");
    const Space& sp = *f.space();
    const Grid& g = sp.grid();
    os << "FLD1\n";
    os << "kind=" << kind_name(sp.rank()) << "\n";
    os << "dims=" << g.n[0] << ' ' << g.n[1] << ' ' << (g.dim == 3 ? g.n[2] : 1) << "\n";
    os << "h=" << fmt17(g.h(0)) << ' ' << fmt17(g.h(1)) << ' ' << fmt17(g.dim == 3 ? g.h(2) : 0.0) << "\n";
    os << "bc=" << (g.periodic() ? "periodic" : "zero") << "\n";
    std::string flags;
    if (f.claims_symmetric()) flags = "sym";
    if (f.claims_tracefree()) flags = "tracefree";
    os << "flags=" << flags << "\n";
    os << "space=" << sp.key() << "\n";
    os << "extent=" << fmt17(g.L[0]) << ' ' << fmt17(g.L[1]) << ' ' << fmt17(g.L[2]) << "\n";
    os << "name=" << sp.name() << "\n\n";
    for (Eigen::Index i = 0; i < f.values().size(); ++i) put_le(os, f.values()[i]);
    if (!os) throw Error(ErrorKind::IoError, "write failed for " + path);
}

Field read_field(const std::string& path, std::optional<Rank> expected) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw Error(ErrorKind::IoError, "cannot open " + path);
    std::string line;
    if (!std::getline(is, line) || line != "FLD1") throw Error(ErrorKind::BadMagic, path + " is not an FLD1 file");
    std::map<std::string, std::string> kv;
    while (std::getline(is, line) && !line.empty()) {
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw Error(ErrorKind::BadMagic, "malformed header line '" + line + "'");
        kv[line.substr(0, eq)] = line.substr(eq + 1);
    }
    for (const char* k : {"kind", "dims", "h", "bc", "space"})
        if (!kv.count(k)) throw Error(ErrorKind::BadMagic, std::string("missing header key ") + k);

    Rank rank;
    if (kv["kind"] == "scalar") rank = Rank::Scalar;
    else if (kv["kind"] == "vector") rank = Rank::Vector;
    else if (kv["kind"] == "tensor") rank = Rank::Tensor;
    else throw Error(ErrorKind::BadMagic, "unknown kind " + kv["kind"]);
    if (expected && *expected != rank)
        throw Error(ErrorKind::DimMismatch, std::string("file holds a ") + kind_name(rank) + " field");

    std::array<int, 3> n{};
    std::array<double, 3> h{};
    {
        std::istringstream ds(kv["dims"]);
        ds >> n[0] >> n[1] >> n[2];
        std::istringstream hs(kv["h"]);
        hs >> h[0] >> h[1] >> h[2];
        if (!ds || !hs) throw Error(ErrorKind::BadMagic, "malformed dims/h");
    }
    const bool periodic = kv["bc"] == "periodic";
    if (!periodic && kv["bc"] != "zero") throw Error(ErrorKind::BadMagic, "unknown bc " + kv["bc"]);
    const int dim = n[2] == 1 ? 2 : 3;
    std::array<double, 3> L{};
    if (kv.count("extent")) {
        std::istringstream es(kv["extent"]);
        es >> L[0] >> L[1] >> L[2];
    } else {
        for (int a = 0; a < 3; ++a) L[a] = periodic ? h[a] * n[a] : h[a] * (n[a] + 1);
        if (dim == 2) L[2] = 1.0;
    }
    Grid g;
    if (dim == 2) g = Grid::box2d(n[0], n[1], L[0], L[1]);
    else g = periodic ? Grid::torus(n[0], n[1], n[2], L[0], L[1], L[2]) : Grid::box(n[0], n[1], n[2], L[0], L[1], L[2]);
    if (periodic && dim == 2) throw Error(ErrorKind::BadMagic, "periodic 2D grids are not supported");

    SpacePtr sp = Space::from_key(g, kv["space"], kv.count("name") ? kv["name"] : "");
    if (sp->rank() != rank) throw Error(ErrorKind::DimMismatch, "space key disagrees with kind");

    const std::size_t need = sp->dof() * 8;
    std::string payload((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    if (payload.size() < need) throw Error(ErrorKind::TruncatedPayload, "payload shorter than header implies");
    if (payload.size() > need) throw Error(ErrorKind::TruncatedPayload, "payload length disagrees with header");
    Eigen::VectorXd vals(static_cast<Eigen::Index>(sp->dof()));
    const auto* bytes = reinterpret_cast<const unsigned char*>(payload.data());
    for (std::size_t i = 0; i < sp->dof(); ++i) vals[static_cast<Eigen::Index>(i)] = get_le(bytes + 8 * i);
    return Field(sp, std::move(vals));
}

}  // namespace ggdd
