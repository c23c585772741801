#include "ggdd/tensor_algebra.hpp"

#include "ggdd/errors.hpp"

#include <algorithm>

namespace ggdd {

const char* error_kind_name(ErrorKind k) {
    switch (k) {
        case ErrorKind::NonSkewInput: return "NonSkewInput";
        case ErrorKind::GridMismatch: return "GridMismatch";
        case ErrorKind::BandTooHigh: return "BandTooHigh";
        case ErrorKind::BadMagic: return "BadMagic";
        case ErrorKind::DimMismatch: return "DimMismatch";
        case ErrorKind::TruncatedPayload: return "TruncatedPayload";
        case ErrorKind::BadSpacePairing: return "BadSpacePairing";
        case ErrorKind::NoAdjoint: return "NoAdjoint";
        case ErrorKind::UnknownIdentity: return "UnknownIdentity";
        case ErrorKind::WrongMode: return "WrongMode";
        case ErrorKind::SolverStall: return "SolverStall";
        case ErrorKind::ConstraintViolated: return "ConstraintViolated";
        case ErrorKind::GridTooLarge: return "GridTooLarge";
        case ErrorKind::NoConvergence: return "NoConvergence";
        case ErrorKind::NotInRange: return "NotInRange";
        case ErrorKind::NotInKernel: return "NotInKernel";
        case ErrorKind::NonSymmetricOperator: return "NonSymmetricOperator";
        case ErrorKind::UnknownCase: return "UnknownCase";
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::IoError: return "IoError";
    }
    return "Error";
}

Mat3 Mat3::identity() {
    Mat3 m;
    m(0, 0) = m(1, 1) = m(2, 2) = 1.0;
    return m;
}

Mat3 Mat3::from_rows(const Vec3& r0, const Vec3& r1, const Vec3& r2) {
    Mat3 m;
    for (int j = 0; j < 3; ++j) {
        m(0, j) = r0[j];
        m(1, j) = r1[j];
        m(2, j) = r2[j];
    }
    return m;
}

Mat3 Mat3::transpose() const {
    Mat3 t;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) t(i, j) = (*this)(j, i);
    return t;
}

Vec3 operator+(const Vec3& x, const Vec3& y) { return {x[0] + y[0], x[1] + y[1], x[2] + y[2]}; }
Vec3 operator-(const Vec3& x, const Vec3& y) { return {x[0] - y[0], x[1] - y[1], x[2] - y[2]}; }
Vec3 operator*(double s, const Vec3& x) { return {s * x[0], s * x[1], s * x[2]}; }

Mat3 operator+(const Mat3& x, const Mat3& y) {
    Mat3 r;
    for (int k = 0; k < 9; ++k) r.a[k] = x.a[k] + y.a[k];
    return r;
}
Mat3 operator-(const Mat3& x, const Mat3& y) {
    Mat3 r;
    for (int k = 0; k < 9; ++k) r.a[k] = x.a[k] - y.a[k];
    return r;
}
Mat3 operator*(double s, const Mat3& x) {
    Mat3 r;
    for (int k = 0; k < 9; ++k) r.a[k] = s * x.a[k];
    return r;
}
Mat3 operator*(const Mat3& x, const Mat3& y) {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double s = 0.0;
            for (int k = 0; k < 3; ++k) s += x(i, k) * y(k, j);
            r(i, j) = s;
        }
    return r;
}
Vec3 operator*(const Mat3& x, const Vec3& y) {
    Vec3 r;
    for (int i = 0; i < 3; ++i) r[i] = x(i, 0) * y[0] + x(i, 1) * y[1] + x(i, 2) * y[2];
    return r;
}

double dot(const Vec3& x, const Vec3& y) { return x[0] * y[0] + x[1] * y[1] + x[2] * y[2]; }

Vec3 cross(const Vec3& x, const Vec3& y) {
    return {x[1] * y[2] - x[2] * y[1], x[2] * y[0] - x[0] * y[2], x[0] * y[1] - x[1] * y[0]};
}

double ddot(const Mat3& x, const Mat3& y) {
    double s = 0.0;
    for (int k = 0; k < 9; ++k) s += x.a[k] * y.a[k];
    return s;
}

double frobenius(const Mat3& x) { return std::sqrt(ddot(x, x)); }

double trace(const Mat3& x) { return x(0, 0) + x(1, 1) + x(2, 2); }

Mat3 sym(const Mat3& x) {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r(i, j) = 0.5 * (x(i, j) + x(j, i));
    return r;
}

Mat3 skw(const Mat3& x) {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r(i, j) = 0.5 * (x(i, j) - x(j, i));
    return r;
}

Mat3 dev(const Mat3& x) {
    Mat3 r = x;
    const double t = trace(x) / 3.0;
    for (int i = 0; i < 3; ++i) r(i, i) -= t;
    return r;
}

Mat3 spn(const Vec3& x) {
    Mat3 m;
    m(0, 1) = -x[2];
    m(0, 2) = x[1];
    m(1, 0) = x[2];
    m(1, 2) = -x[0];
    m(2, 0) = -x[1];
    m(2, 1) = x[0];
    return m;
}

Vec3 spn_inv_unchecked(const Mat3& x) { return {x(2, 1), x(0, 2), x(1, 0)}; }

Vec3 spn_inv(const Mat3& x) {
    double res = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) res = std::max(res, std::abs(x(i, j) + x(j, i)));
    double scale = 0.0;
    for (double e : x.a) scale = std::max(scale, std::abs(e));
    if (res > 1e-12 * scale) throw Error(ErrorKind::NonSkewInput, "matrix is not skew-symmetric");
    return spn_inv_unchecked(x);
}

Parts parts(const Mat3& x) { return {sym(x), skw(x), dev(x), trace(x)}; }

VecTensorProducts vec_tensor_products(const Vec3& a, const Mat3& b) {
    VecTensorProducts r;
    r.cross = Mat3::from_rows(cross(a, b.row(0)), cross(a, b.row(1)), cross(a, b.row(2)));
    r.dot = b * a;
    return r;
}

}  // namespace ggdd
