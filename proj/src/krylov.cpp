#include "ggdd/krylov.hpp"

#include "ggdd/errors.hpp"
#include "ggdd/field.hpp"

#include <chrono>
#include <cmath>

namespace ggdd {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

int default_maxit(Eigen::Index n, int requested) {
    if (requested > 0) return requested;
    return std::max(200, static_cast<int>(50.0 * std::cbrt(static_cast<double>(n))) * 4);
}

Eigen::VectorXd ident(const Eigen::VectorXd& x) { return x; }

void finish(SolveReport& rep, const KrylovOptions& opt) {
    rep.tol = opt.tol;
    rep.stage = opt.stage;
    if (!rep.converged && opt.throw_on_failure)
        throw Error(ErrorKind::NoConvergence, rep.method + (opt.stage.empty() ? "" : " [" + opt.stage + "]") +
                                                  " stopped at relative residual " +
                                                  sci(rep.rel_residual) + " after " +
                                                  std::to_string(rep.iterations) + " iterations");
}

void require_symmetric(const LinOp& a, Eigen::Index n, const Eigen::VectorXd& w, const std::string& who) {
    const double d = symmetry_defect(a, n, w, 0x5eed);
    if (d > 1e-12) throw Error(ErrorKind::NonSymmetricOperator, who + ": symmetry defect " + sci(d));
}

}  // namespace

double wdot(const Eigen::VectorXd& w, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    const Eigen::VectorXd p = w.size() == 0 ? Eigen::VectorXd(x.cwiseProduct(y)) : Eigen::VectorXd(x.cwiseProduct(y).cwiseProduct(w));
    return pairwise_sum(p.data(), static_cast<std::size_t>(p.size()));
}

double symmetry_defect(const LinOp& a, Eigen::Index n, const Eigen::VectorXd& w, std::uint64_t seed) {
    double worst = 0.0;
    for (int t = 0; t < 3; ++t) {
        Eigen::VectorXd x = random_vector(static_cast<std::size_t>(n), seed + 2 * t);
        Eigen::VectorXd y = random_vector(static_cast<std::size_t>(n), seed + 2 * t + 1);
        Eigen::VectorXd ax = a(x), ay = a(y);
        const double scale =
            std::sqrt(wdot(w, ax, ax) * wdot(w, y, y)) + std::sqrt(wdot(w, ay, ay) * wdot(w, x, x));
        if (scale == 0.0) continue;
        worst = std::max(worst, std::abs(wdot(w, ax, y) - wdot(w, x, ay)) / scale);
    }
    return worst;
}

SolveReport cg(const LinOp& a, const Eigen::VectorXd& b, Eigen::VectorXd& x, const Eigen::VectorXd& w,
               const LinOp& precond, const KrylovOptions& opt) {
    const auto t0 = Clock::now();
    SolveReport rep;
    rep.method = "cg";
    const Eigen::Index n = b.size();
    if (x.size() != n) x = Eigen::VectorXd::Zero(n);
    if (opt.check_symmetry) require_symmetric(a, n, w, "cg");
    const LinOp& m = precond ? precond : LinOp(ident);
    const double bn = std::sqrt(wdot(w, b, b));
    if (bn == 0.0) {
        x.setZero();
        rep.converged = true;
        rep.seconds = seconds_since(t0);
        finish(rep, opt);
        return rep;
    }
    const int maxit = default_maxit(n, opt.maxit);
    Eigen::VectorXd r = b - a(x);
    Eigen::VectorXd z = m(r);
    Eigen::VectorXd p = z;
    double rz = wdot(w, r, z);
    double rel = std::sqrt(wdot(w, r, r)) / bn;
    int it = 0;
    while (rel > opt.tol && it < maxit) {
        Eigen::VectorXd q = a(p);
        const double pq = wdot(w, p, q);
        if (pq <= 0.0) break;
        const double alpha = rz / pq;
        x += alpha * p;
        r -= alpha * q;
        ++it;
        rel = std::sqrt(wdot(w, r, r)) / bn;
        if (rel <= opt.tol) break;
        z = m(r);
        const double rz_new = wdot(w, r, z);
        p = z + (rz_new / rz) * p;
        rz = rz_new;
    }
    rel = std::sqrt(wdot(w, Eigen::VectorXd(b - a(x)), Eigen::VectorXd(b - a(x)))) / bn;
    rep.iterations = it;
    rep.rel_residual = rel;
    rep.converged = rel <= opt.tol;
    rep.seconds = seconds_since(t0);
    finish(rep, opt);
    return rep;
}

SolveReport minres(const LinOp& a, const Eigen::VectorXd& b, Eigen::VectorXd& x, const Eigen::VectorXd& w,
                   const LinOp& precond, const KrylovOptions& opt) {
    const auto t0 = Clock::now();
    SolveReport rep;
    rep.method = "minres";
    const Eigen::Index n = b.size();
    if (x.size() != n) x = Eigen::VectorXd::Zero(n);
    if (opt.check_symmetry) require_symmetric(a, n, w, "minres");
    const LinOp& m = precond ? precond : LinOp(ident);
    const double bn = std::sqrt(wdot(w, b, b));
    if (bn == 0.0) {
        x.setZero();
        rep.converged = true;
        rep.seconds = seconds_since(t0);
        finish(rep, opt);
        return rep;
    }
    const int maxit = default_maxit(n, opt.maxit);
    int total = 0;
    double rel = 1.0;
    for (int restart = 0; restart < 6 && total < maxit; ++restart) {
        Eigen::VectorXd v = b - a(x);
        rel = std::sqrt(wdot(w, v, v)) / bn;
        if (rel <= opt.tol) break;
        Eigen::VectorXd v_old = Eigen::VectorXd::Zero(n);
        Eigen::VectorXd z = m(v);
        double gamma = std::sqrt(wdot(w, z, v));
        double gamma_old = 1.0;
        const double gamma1 = gamma;
        double eta = gamma;
        double s0 = 0.0, s1 = 0.0, c0 = 1.0, c1 = 1.0;
        Eigen::VectorXd w0 = Eigen::VectorXd::Zero(n), w1 = Eigen::VectorXd::Zero(n);
        // Inner tolerance on the preconditioned residual estimate, verified against the true residual after.
        const double inner_tol = opt.tol * 0.1 * bn / std::max(rel * bn, 1e-300);
        while (total < maxit) {
            z /= gamma;
            Eigen::VectorXd az = a(z);
            const double delta = wdot(w, az, z);
            Eigen::VectorXd v_new = az - (delta / gamma) * v - (gamma / gamma_old) * v_old;
            v_old = std::move(v);
            v = std::move(v_new);
            Eigen::VectorXd z_new = m(v);
            const double gamma_new = std::sqrt(std::max(wdot(w, z_new, v), 0.0));
            const double a0 = c1 * delta - c0 * s1 * gamma;
            const double a1 = std::sqrt(a0 * a0 + gamma_new * gamma_new);
            const double a2 = s1 * delta + c0 * c1 * gamma;
            const double a3 = s0 * gamma;
            const double c2 = a0 / a1, s2 = gamma_new / a1;
            Eigen::VectorXd w2 = (z - a3 * w0 - a2 * w1) / a1;
            x += c2 * eta * w2;
            eta = -s2 * eta;
            w0 = std::move(w1);
            w1 = std::move(w2);
            c0 = c1;
            c1 = c2;
            s0 = s1;
            s1 = s2;
            gamma_old = gamma;
            gamma = gamma_new;
            z = std::move(z_new);
            ++total;
            if (std::abs(eta) / gamma1 < inner_tol || gamma == 0.0) break;
        }
    }
    Eigen::VectorXd r = b - a(x);
    rel = std::sqrt(wdot(w, r, r)) / bn;
    rep.iterations = total;
    rep.rel_residual = rel;
    rep.converged = rel <= opt.tol;
    rep.seconds = seconds_since(t0);
    finish(rep, opt);
    return rep;
}

SolveReport cgls(const LinOp& a, const LinOp& at, const Eigen::VectorXd& b, Eigen::VectorXd& x,
                 const Eigen::VectorXd& wd, const Eigen::VectorXd& wc, const KrylovOptions& opt) {
    const auto t0 = Clock::now();
    SolveReport rep;
    rep.method = "cgls";
    const double bn = std::sqrt(wdot(wc, b, b));
    Eigen::VectorXd r = b;
    Eigen::VectorXd s = at(r);
    x = Eigen::VectorXd::Zero(s.size());
    if (bn == 0.0) {
        rep.converged = true;
        rep.seconds = seconds_since(t0);
        finish(rep, opt);
        return rep;
    }
    const int maxit = default_maxit(s.size(), opt.maxit) * 4;
    Eigen::VectorXd p = s;
    double gamma = wdot(wd, s, s);
    const double gamma0 = gamma;
    // |A| from below, for the least-squares test |A* r| <= tol max(|A* b|, |A| |b|)
    double anorm = std::sqrt(gamma0) / bn;
    auto ls_ref = [&] { return std::max(std::sqrt(gamma0), anorm * bn); };
    double rel = 1.0;
    int it = 0;
    double best = rel;
    int stagnant = 0;
    while (it < maxit) {
        Eigen::VectorXd q = a(p);
        const double qq = wdot(wc, q, q);
        if (qq == 0.0) break;
        anorm = std::max(anorm, std::sqrt(qq / wdot(wd, p, p)));
        const double alpha = gamma / qq;
        x += alpha * p;
        r -= alpha * q;
        ++it;
        rel = std::sqrt(wdot(wc, r, r)) / bn;
        if (!opt.least_squares && rel <= opt.tol) break;
        s = at(r);
        const double gamma_new = wdot(wd, s, s);
        if (opt.least_squares && std::sqrt(gamma_new) <= opt.tol * ls_ref()) {
            gamma = gamma_new;
            break;
        }
        // Normal-equation residual negligible while the data residual is not: b leaves the range.
        if (!opt.least_squares) {
            if (gamma_new <= 1e-26 * gamma0) {
                rep.plateau = true;
                break;
            }
            if (rel < 0.999 * best) {
                best = rel;
                stagnant = 0;
            } else if (++stagnant > 200) {
                rep.plateau = true;
                break;
            }
        }
        p = s + (gamma_new / gamma) * p;
        gamma = gamma_new;
    }
    Eigen::VectorXd res = b - a(x);
    rep.iterations = it;
    if (opt.least_squares) {
        Eigen::VectorXd sn = at(res);
        rep.rel_residual = std::sqrt(wdot(wd, sn, sn)) / ls_ref();
        rep.plateau = false;
    } else {
        rep.rel_residual = std::sqrt(wdot(wc, res, res)) / bn;
    }
    rep.converged = rep.rel_residual <= opt.tol;
    if (!rep.converged && it >= maxit) rep.plateau = false;
    rep.seconds = seconds_since(t0);
    finish(rep, opt);
    return rep;
}

}  // namespace ggdd
