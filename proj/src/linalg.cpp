#include "lrh/linalg.hpp"

#include <cmath>

namespace lrh {

double Rng::uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

double Rng::normal() {
    double u = uniform(), v = uniform();
    return std::sqrt(-2.0 * std::log1p(-u)) * std::cos(2.0 * M_PI * v);
}

cplx Rng::unit_circle() { return std::polar(1.0, 2.0 * M_PI * uniform()); }

cplx Rng::gaussian() { return cplx(normal(), normal()) / std::sqrt(2.0); }

std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> tags) {
    auto mix = [](std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    };
    std::uint64_t h = mix(base);
    for (auto t : tags) h = mix(h ^ mix(t));
    return h;
}

CMat orthonormal_basis(const CMat& a) {
    Eigen::HouseholderQR<CMat> qr(a);
    return qr.householderQ() * CMat::Identity(a.rows(), a.cols());
}

double grassmann_distance(const CMat& x, const CMat& y) {
    CMat qx = orthonormal_basis(x), qy = orthonormal_basis(y);
    Eigen::JacobiSVD<CMat> svd(qx.adjoint() * qy);
    double s = 0;
    for (int i = 0; i < svd.singularValues().size(); ++i) {
        double c = std::min(1.0, svd.singularValues()(i));
        double th = std::acos(c);
        s += th * th;
    }
    return std::sqrt(s);
}

double singular_ratio(const CMat& a) {
    Eigen::JacobiSVD<CMat> svd(a);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv(0) == 0.0) return 0.0;
    return sv(sv.size() - 1) / sv(0);
}

CMat random_unit_circle_matrix(int rows, int cols, Rng& rng) {
    CMat m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = rng.unit_circle();
    return m;
}

}  // namespace lrh
