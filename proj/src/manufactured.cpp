#include "ggdd/manufactured.hpp"

#include "ggdd/errors.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace ggdd {

namespace {

long double sin2_value(long double x, long double len) { return std::pow(std::sin(M_PIl * x / len), 2); }

long double poly_value(long double x, long double len) { return x * x * (len - x) * (len - x); }

double sin2_factor(int order, double x, double len) {
    const double k = M_PI / len;
    const double s = std::sin(2.0 * k * x), c = std::cos(2.0 * k * x);
    switch (order) {
        case 0: return std::pow(std::sin(k * x), 2);
        case 1: return k * s;
        case 2: return 2.0 * k * k * c;
        case 3: return -4.0 * k * k * k * s;
        case 4: return -8.0 * k * k * k * k * c;
        default: return 0.0;
    }
}

double poly_factor(int order, double x, double len) {
    switch (order) {
        case 0: return x * x * (len - x) * (len - x);
        case 1: return 4.0 * x * x * x - 6.0 * len * x * x + 2.0 * len * len * x;
        case 2: return 12.0 * x * x - 12.0 * len * x + 2.0 * len * len;
        case 3: return 24.0 * x - 12.0 * len;
        case 4: return 24.0;
        default: return 0.0;
    }
}

using LPoint = std::array<long double, 3>;

// Sixth-order central second difference.
constexpr std::array<long double, 7> kD2{1.0L / 90, -3.0L / 20, 3.0L / 2, -49.0L / 18, 3.0L / 2, -3.0L / 20, 1.0L / 90};

long double fd_laplacian(const std::function<long double(const LPoint&)>& fn, const LPoint& x, int dim,
                         long double h) {
    long double s = 0.0L;
    for (int a = 0; a < dim; ++a)
        for (int k = 0; k < 7; ++k) {
            LPoint y = x;
            y[static_cast<std::size_t>(a)] += (k - 3) * h;
            s += kD2[static_cast<std::size_t>(k)] * fn(y);
        }
    return s / (h * h);
}

Field sample(const ManufacturedCase& c, const Grid& g, bool rhs) {
    if (g.periodic() || g.dim != c.dim) throw Error(ErrorKind::GridMismatch, "case " + c.name + " needs a matching box grid");
    return sample_scalar(spaces::U(g), [&](const std::array<double, 3>& x) { return rhs ? c.f(x) : c.u(x); });
}

}  // namespace

double ManufacturedCase::derivative(const std::array<int, 3>& order, const std::array<double, 3>& x) const {
    double v = 1.0;
    for (int a = 0; a < dim; ++a) v *= factor(a, order[static_cast<std::size_t>(a)], x[static_cast<std::size_t>(a)]);
    return v;
}

double ManufacturedCase::u(const std::array<double, 3>& x) const { return derivative({0, 0, 0}, x); }

double ManufacturedCase::laplacian(const std::array<double, 3>& x) const {
    double s = 0.0;
    for (int a = 0; a < dim; ++a) {
        std::array<int, 3> o{0, 0, 0};
        o[static_cast<std::size_t>(a)] = 2;
        s += derivative(o, x);
    }
    return s;
}

double ManufacturedCase::f(const std::array<double, 3>& x) const {
    double s = 0.0;
    for (int a = 0; a < dim; ++a)
        for (int b = 0; b < dim; ++b) {
            std::array<int, 3> o{0, 0, 0};
            o[static_cast<std::size_t>(a)] += 2;
            o[static_cast<std::size_t>(b)] += 2;
            s += derivative(o, x);
        }
    return s;
}

Grid ManufacturedCase::grid(int n) const {
    return dim == 2 ? Grid::box2d(n, n, L[0], L[1]) : Grid::box(n, n, n, L[0], L[1], L[2]);
}

ManufacturedCase get_case(const std::string& name) {
    ManufacturedCase c;
    c.name = name;
    if (name == "sin2-3d" || name == "sin2-2d") {
        c.dim = name == "sin2-3d" ? 3 : 2;
        const auto len = c.L;
        c.factor = [len](int axis, int order, double x) {
            return sin2_factor(order, x, len[static_cast<std::size_t>(axis)]);
        };
        c.value_ld = [len](int axis, long double x) { return sin2_value(x, len[static_cast<std::size_t>(axis)]); };
        return c;
    }
    if (name == "poly-3d") {
        const auto len = c.L;
        c.factor = [len](int axis, int order, double x) {
            return poly_factor(order, x, len[static_cast<std::size_t>(axis)]);
        };
        c.value_ld = [len](int axis, long double x) { return poly_value(x, len[static_cast<std::size_t>(axis)]); };
        return c;
    }
    throw Error(ErrorKind::UnknownCase, "unknown manufactured case " + name);
}

std::vector<std::string> case_names() { return {"sin2-3d", "poly-3d", "sin2-2d"}; }

double fd_bilaplacian(const ManufacturedCase& c, const std::array<double, 3>& x, double h) {
    auto u = [&c](const LPoint& y) {
        long double v = 1.0L;
        for (int a = 0; a < c.dim; ++a) v *= c.value_ld(a, y[static_cast<std::size_t>(a)]);
        return v;
    };
    auto lap = [&](const LPoint& y) { return fd_laplacian(u, y, c.dim, h); };
    return static_cast<double>(fd_laplacian(lap, LPoint{x[0], x[1], x[2]}, c.dim, h));
}

double fd_oracle_defect(const ManufacturedCase& c, int points, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    double worst = 0.0;
    for (int p = 0; p < points; ++p) {
        std::array<double, 3> x{0.0, 0.0, 0.0};
        for (int a = 0; a < c.dim; ++a) {
            std::uniform_real_distribution<double> d(0.1 * c.L[static_cast<std::size_t>(a)],
                                                     0.9 * c.L[static_cast<std::size_t>(a)]);
            x[static_cast<std::size_t>(a)] = d(rng);
        }
        worst = std::max(worst, std::abs(c.f(x) - fd_bilaplacian(c, x)));
    }
    return worst;
}

Field sample_u(const ManufacturedCase& c, const Grid& g) { return sample(c, g, false); }
Field sample_f(const ManufacturedCase& c, const Grid& g) { return sample(c, g, true); }

std::vector<ConvergenceRow> convergence_study(const ManufacturedCase& c, const std::string& method,
                                              const std::vector<int>& grids, double tol) {
    if (grids.size() < 3) throw Error(ErrorKind::InvalidArgument, "convergence study needs at least 3 grids");
    for (std::size_t i = 1; i < grids.size(); ++i)
        if (grids[i] <= grids[i - 1]) throw Error(ErrorKind::InvalidArgument, "grid sizes must increase");
    if (method_is_2d(method) != (c.dim == 2))
        throw Error(ErrorKind::InvalidArgument, "method " + method + " does not match case " + c.name);
    std::vector<ConvergenceRow> rows;
    BiharmonicOptions opt;
    opt.tol = tol;
    for (int n : grids) {
        const Grid g = c.grid(n);
        const Field f = sample_f(c, g);
        const BiharmonicSolution s = solve_by_name(method, f, opt);
        ConvergenceRow r;
        r.n = n;
        r.h = g.h(0);
        r.error = norm(s.u - sample_u(c, g));
        r.rate = rows.empty() ? std::numeric_limits<double>::quiet_NaN()
                              : std::log(rows.back().error / r.error) / std::log(rows.back().h / r.h);
        r.method = method;
        r.case_name = c.name;
        r.seconds = s.total_seconds();
        rows.push_back(r);
    }
    return rows;
}

std::string convergence_csv(const std::vector<ConvergenceRow>& rows) {
    std::ostringstream os;
    os.precision(17);
    os << "n,h,error,rate,method,case\n";
    for (const auto& r : rows) {
        os << r.n << ',' << r.h << ',' << r.error << ',';
        if (!std::isnan(r.rate)) os << r.rate;
        os << ',' << r.method << ',' << r.case_name << '\n';
    }
    return os.str();
}

}  // namespace ggdd
