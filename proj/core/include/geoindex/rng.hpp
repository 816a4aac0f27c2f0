#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <random>

namespace geoindex::rng {

// mt19937_64 with hand-rolled output mapping.  std::uniform_real_distribution
// and friends are implementation-defined, which would make seeded reports
// differ across standard libraries; everything here is pinned to the raw
// 64-bit stream.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    static constexpr const char* name() { return "mt19937_64"; }

    std::uint64_t raw() { return gen_(); }

    // Uniform on [0, 1) with 53 significant bits.
    double unit() { return static_cast<double>(raw() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

    // Inclusive on both ends.  Modulo bias is ~span/2^64, irrelevant here.
    int uniform_int(int lo, int hi) {
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<int>(raw() % span);
    }

    // Box-Muller; the spare is cached so consecutive draws cost one pair of
    // uniforms every other call.
    double gaussian() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = 1.0 - unit();  // (0, 1], keeps log finite
        const double u2 = unit();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * M_PI * u2;
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

    Eigen::VectorXd gaussian_vector(int n) {
        Eigen::VectorXd v(n);
        for (int i = 0; i < n; ++i) v(i) = gaussian();
        return v;
    }

    Eigen::MatrixXd gaussian_matrix(int rows, int cols) {
        Eigen::MatrixXd m(rows, cols);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) m(i, j) = gaussian();
        return m;
    }

    // Haar-distributed up to the usual QR sign fix: the factor is made unique
    // by forcing the R diagonal positive.
    Eigen::MatrixXd random_orthogonal(int n) {
        const Eigen::MatrixXd g = gaussian_matrix(n, n);
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
        Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
        const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
        for (int j = 0; j < n; ++j)
            if (r(j, j) < 0.0) q.col(j) = -q.col(j);
        return q;
    }

private:
    std::mt19937_64 gen_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace geoindex::rng
