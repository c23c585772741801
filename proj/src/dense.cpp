#include "ggdd/dense.hpp"

#include "ggdd/errors.hpp"

#include <lapacke.h>

namespace ggdd {

Eigen::MatrixXd isometric_dense(const OperatorHandle& a) {
    Eigen::MatrixXd m(a.matrix());
    const Eigen::VectorXd rc = a.codomain()->weights().cwiseSqrt();
    const Eigen::VectorXd rd = a.domain()->weights().cwiseSqrt().cwiseInverse();
    return rc.asDiagonal() * m * rd.asDiagonal();
}

Eigen::VectorXd singular_values(const Eigen::MatrixXd& a) {
    const lapack_int m = static_cast<lapack_int>(a.rows()), n = static_cast<lapack_int>(a.cols());
    Eigen::VectorXd s(std::min(m, n));
    if (s.size() == 0) return s;
    Eigen::MatrixXd work = a;
    const lapack_int info = LAPACKE_dgesdd(LAPACK_COL_MAJOR, 'N', m, n, work.data(), m, s.data(), nullptr, 1,
                                           nullptr, 1);
    if (info != 0) throw Error(ErrorKind::NoConvergence, "dgesdd failed with info " + std::to_string(info));
    return s;
}

int null_count(const Eigen::MatrixXd& a, double rel) {
    const Eigen::VectorXd s = singular_values(a);
    if (s.size() == 0) return static_cast<int>(a.cols());
    const double cut = rel * s[0];
    int small = static_cast<int>(a.cols() - s.size());
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s[i] <= cut) ++small;
    return small;
}

}  // namespace ggdd
