#pragma once

#include <array>
#include <cmath>

namespace ggdd {

struct Vec3 {
    std::array<double, 3> v{0.0, 0.0, 0.0};

    Vec3() = default;
    Vec3(double a, double b, double c) : v{a, b, c} {}

    double& operator[](int i) { return v[i]; }
    double operator[](int i) const { return v[i]; }
    bool operator==(const Vec3&) const = default;
};

// Row-major 3x3.
struct Mat3 {
    std::array<double, 9> a{};

    Mat3() = default;
    static Mat3 identity();
    static Mat3 from_rows(const Vec3& r0, const Vec3& r1, const Vec3& r2);

    double& operator()(int i, int j) { return a[3 * i + j]; }
    double operator()(int i, int j) const { return a[3 * i + j]; }
    bool operator==(const Mat3&) const = default;

    Vec3 row(int i) const { return {a[3 * i], a[3 * i + 1], a[3 * i + 2]}; }
    Mat3 transpose() const;
};

Vec3 operator+(const Vec3& x, const Vec3& y);
Vec3 operator-(const Vec3& x, const Vec3& y);
Vec3 operator*(double s, const Vec3& x);
Mat3 operator+(const Mat3& x, const Mat3& y);
Mat3 operator-(const Mat3& x, const Mat3& y);
Mat3 operator*(double s, const Mat3& x);
Mat3 operator*(const Mat3& x, const Mat3& y);
Vec3 operator*(const Mat3& x, const Vec3& y);

double dot(const Vec3& x, const Vec3& y);
Vec3 cross(const Vec3& x, const Vec3& y);
// Frobenius product A:B.
double ddot(const Mat3& x, const Mat3& y);
double frobenius(const Mat3& x);
double trace(const Mat3& x);

Mat3 sym(const Mat3& x);
Mat3 skw(const Mat3& x);
Mat3 dev(const Mat3& x);

Mat3 spn(const Vec3& x);
// Throws NonSkewInput unless x is skew within 1e-12 relative.
Vec3 spn_inv(const Mat3& x);
// Reads (A32, A13, A21) without the skew check.
Vec3 spn_inv_unchecked(const Mat3& x);

struct Parts {
    Mat3 sym;
    Mat3 skw;
    Mat3 dev;
    double tr;
};
Parts parts(const Mat3& x);

struct VecTensorProducts {
    Mat3 cross;  // rows a x (row_i B)
    Vec3 dot;    // B a
};
VecTensorProducts vec_tensor_products(const Vec3& a, const Mat3& b);

}  // namespace ggdd
