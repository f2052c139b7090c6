#pragma once

#include <complex>
#include <cstdint>
#include <initializer_list>
#include <random>

#include <Eigen/Dense>

namespace lrh {

using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

// Deterministic generator; sampling is implemented here so results do not depend
// on the standard library's distribution algorithms.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}
    double uniform();       // [0,1)
    double normal();
    cplx unit_circle();
    cplx gaussian();        // standard complex normal

private:
    std::mt19937_64 eng_;
};

std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> tags);

CMat orthonormal_basis(const CMat& a);
double grassmann_distance(const CMat& x, const CMat& y);  // root sum of squared principal angles
double singular_ratio(const CMat& a);                      // sigma_min / sigma_max
CMat random_unit_circle_matrix(int rows, int cols, Rng& rng);

}  // namespace lrh
