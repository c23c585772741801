#include "ggdd/field.hpp"

#include "ggdd/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace ggdd {

namespace {

void require_same(const Space& a, const Space& b) {
    if (!a.compatible(b)) throw Error(ErrorKind::GridMismatch, "fields live on different spaces or grids");
}

double uniform_pm1(std::mt19937_64& rng) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return 2.0 * u - 1.0;
}

}  // namespace

Field::Field(SpacePtr sp) : space_(std::move(sp)) {
    values_ = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(space_->dof()));
}

Field::Field(SpacePtr sp, Eigen::VectorXd values) : space_(std::move(sp)), values_(std::move(values)) {
    if (static_cast<std::size_t>(values_.size()) != space_->dof())
        throw Error(ErrorKind::DimMismatch, "value count does not match the space");
}

Field& Field::operator+=(const Field& o) {
    require_same(*space_, *o.space_);
    values_ += o.values_;
    return *this;
}
Field& Field::operator-=(const Field& o) {
    require_same(*space_, *o.space_);
    values_ -= o.values_;
    return *this;
}
Field& Field::operator*=(double s) {
    values_ *= s;
    return *this;
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(double s, Field a) { return a *= s; }

double pairwise_sum(const double* x, std::size_t n) {
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += x[i];
        return s;
    }
    const std::size_t m = n / 2;
    return pairwise_sum(x, m) + pairwise_sum(x + m, n - m);
}

double weighted_dot(const Space& sp, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    Eigen::VectorXd p = x.cwiseProduct(y).cwiseProduct(sp.weights());
    return pairwise_sum(p.data(), static_cast<std::size_t>(p.size()));
}

double weighted_norm(const Space& sp, const Eigen::VectorXd& x) { return std::sqrt(weighted_dot(sp, x, x)); }

double inner_product(const Field& f, const Field& g) {
    require_same(*f.space(), *g.space());
    return weighted_dot(*f.space(), f.values(), g.values());
}

double norm(const Field& f) { return weighted_norm(*f.space(), f.values()); }

double max_abs(const Eigen::VectorXd& x) { return x.size() ? x.cwiseAbs().maxCoeff() : 0.0; }
double max_abs(const Field& f) { return max_abs(f.values()); }

Field sample_scalar(SpacePtr sp, const std::function<double(const std::array<double, 3>&)>& fn) {
    Field f(sp);
    for (int c = 0; c < sp->ncomp(); ++c) {
        const auto& comp = sp->comps()[static_cast<std::size_t>(c)];
        for (std::size_t l = 0; l < comp.count; ++l)
            f.values()[static_cast<Eigen::Index>(comp.offset + l)] = fn(sp->coord(c, l));
    }
    return f;
}

Field sample_vector(SpacePtr sp, const std::function<Vec3(const std::array<double, 3>&)>& fn) {
    if (sp->rank() != Rank::Vector) throw Error(ErrorKind::DimMismatch, "vector sampling needs a vector space");
    Field f(sp);
    for (int c = 0; c < sp->ncomp(); ++c) {
        const auto& comp = sp->comps()[static_cast<std::size_t>(c)];
        for (std::size_t l = 0; l < comp.count; ++l)
            f.values()[static_cast<Eigen::Index>(comp.offset + l)] = fn(sp->coord(c, l))[c];
    }
    return f;
}

Field sample_tensor(SpacePtr sp, const std::function<Mat3(const std::array<double, 3>&)>& fn) {
    if (sp->rank() != Rank::Tensor) throw Error(ErrorKind::DimMismatch, "tensor sampling needs a tensor space");
    Field f(sp);
    for (int c = 0; c < sp->ncomp(); ++c) {
        const auto& comp = sp->comps()[static_cast<std::size_t>(c)];
        for (std::size_t l = 0; l < comp.count; ++l)
            f.values()[static_cast<Eigen::Index>(comp.offset + l)] =
                ddot(comp.basis, fn(sp->coord(c, l))) / comp.factor;
    }
    return f;
}

Field random_smooth_field(SpacePtr sp, std::uint64_t seed, int band) {
    const Grid& g = sp->grid();
    if (band < 0 || 4 * band > g.min_n())
        throw Error(ErrorKind::BandTooHigh, "band must satisfy 0 <= band <= n/4");
    std::mt19937_64 rng(seed);
    Field f(sp);
    const double pi = std::numbers::pi;
    for (int c = 0; c < sp->ncomp(); ++c) {
        const auto& comp = sp->comps()[static_cast<std::size_t>(c)];
        // Per-axis tables of 1D modes evaluated at this component's positions.
        std::array<std::vector<std::vector<double>>, 3> modes;
        for (int a = 0; a < 3; ++a) {
            const int m = comp.shape[a];
            if (a >= g.dim) {
                modes[a].push_back(std::vector<double>(static_cast<std::size_t>(m), 1.0));
                continue;
            }
            const double len = g.L[a];
            if (g.periodic()) {
                for (int k = 0; k <= band; ++k) {
                    std::vector<double> cs(static_cast<std::size_t>(m)), sn(static_cast<std::size_t>(m));
                    for (int i = 0; i < m; ++i) {
                        const double x = stagger_coord(g, a, comp.layout[a], i);
                        cs[static_cast<std::size_t>(i)] = std::cos(2.0 * pi * k * x / len);
                        sn[static_cast<std::size_t>(i)] = std::sin(2.0 * pi * k * x / len);
                    }
                    modes[a].push_back(cs);
                    if (k > 0) modes[a].push_back(sn);
                }
            } else {
                for (int k = 1; k <= band; ++k) {
                    std::vector<double> sn(static_cast<std::size_t>(m));
                    for (int i = 0; i < m; ++i) {
                        const double x = stagger_coord(g, a, comp.layout[a], i);
                        sn[static_cast<std::size_t>(i)] = std::sin(pi * k * x / len);
                    }
                    modes[a].push_back(sn);
                }
            }
        }
        auto wavenumber = [&](int a, std::size_t idx) -> double {
            if (a >= g.dim) return 0.0;
            return g.periodic() ? static_cast<double>((idx + 1) / 2) : static_cast<double>(idx + 1);
        };
        for (std::size_t m2 = 0; m2 < modes[2].size(); ++m2)
            for (std::size_t m1 = 0; m1 < modes[1].size(); ++m1)
                for (std::size_t m0 = 0; m0 < modes[0].size(); ++m0) {
                    const double k2 = wavenumber(0, m0) * wavenumber(0, m0) + wavenumber(1, m1) * wavenumber(1, m1) +
                                      wavenumber(2, m2) * wavenumber(2, m2);
                    const double coef = uniform_pm1(rng) / (1.0 + k2);
                    std::size_t idx = comp.offset;
                    for (int k = 0; k < comp.shape[2]; ++k)
                        for (int j = 0; j < comp.shape[1]; ++j) {
                            const double yz = coef * modes[1][m1][static_cast<std::size_t>(j)] *
                                              modes[2][m2][static_cast<std::size_t>(k)];
                            for (int i = 0; i < comp.shape[0]; ++i)
                                f.values()[static_cast<Eigen::Index>(idx++)] +=
                                    yz * modes[0][m0][static_cast<std::size_t>(i)];
                        }
                }
    }
    return f;
}

Field random_smooth_field(const Grid& g, Rank rank, std::uint64_t seed, int band) {
    SpacePtr sp;
    if (g.periodic()) {
        sp = rank == Rank::Scalar   ? spaces::scalar(g, 0)
             : rank == Rank::Vector ? spaces::vector(g, 0)
                                    : spaces::tensor(g, 0);
    } else {
        sp = rank == Rank::Scalar ? spaces::U(g) : rank == Rank::Vector ? spaces::edges(g) : spaces::Sfull(g);
    }
    return random_smooth_field(sp, seed, band);
}

Eigen::VectorXd random_vector(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Eigen::VectorXd x(static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = uniform_pm1(rng);
    return x;
}

namespace {

FiniteSubspace orthonormalize(std::string name, std::vector<Field> raw) {
    FiniteSubspace s{std::move(name), {}};
    for (auto& f : raw) {
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& b : s.basis) f.values() -= inner_product(f, b) * b.values();
        const double nf = norm(f);
        if (nf == 0.0) throw Error(ErrorKind::InvalidArgument, "degenerate subspace basis");
        f *= 1.0 / nf;
        s.basis.push_back(std::move(f));
    }
    return s;
}

}  // namespace

FiniteSubspace make_R(SpacePtr sp) {
    if (sp->rank() != Rank::Scalar) throw Error(ErrorKind::DimMismatch, "R lives on scalar spaces");
    return orthonormalize("R", {sample_scalar(sp, [](const auto&) { return 1.0; })});
}

FiniteSubspace make_RT0(SpacePtr sp) {
    if (sp->rank() != Rank::Vector || sp->grid().dim != 3)
        throw Error(ErrorKind::DimMismatch, "RT0 lives on 3D vector spaces");
    std::vector<Field> raw;
    raw.push_back(sample_vector(sp, [](const auto& x) { return Vec3{x[0], x[1], x[2]}; }));
    for (int i = 0; i < 3; ++i) {
        Vec3 e;
        e[i] = 1.0;
        raw.push_back(sample_vector(sp, [e](const auto&) { return e; }));
    }
    return orthonormalize("RT0", std::move(raw));
}

FiniteSubspace make_RM(SpacePtr sp) {
    if (sp->rank() != Rank::Vector) throw Error(ErrorKind::DimMismatch, "RM lives on vector spaces");
    const int d = sp->grid().dim;
    std::vector<Field> raw;
    for (int i = 0; i < d; ++i) {
        Vec3 e;
        e[i] = 1.0;
        raw.push_back(sample_vector(sp, [e](const auto&) { return e; }));
    }
    if (d == 2) {
        raw.push_back(sample_vector(sp, [](const auto& x) { return Vec3{-x[1], x[0], 0.0}; }));
    } else {
        for (int k = 0; k < 3; ++k) {
            Vec3 a;
            a[k] = 1.0;
            raw.push_back(sample_vector(sp, [a](const auto& x) { return cross(a, Vec3{x[0], x[1], x[2]}); }));
        }
    }
    return orthonormalize("RM", std::move(raw));
}

Projection project_subspace(const Field& f, const FiniteSubspace& s) {
    Field p(f.space());
    for (const auto& b : s.basis) p.values() += inner_product(f, b) * b.values();
    return {p, f - p};
}

}  // namespace ggdd
