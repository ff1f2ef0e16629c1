#include "zerocorr/symmetric.hpp"

#include "zerocorr/error.hpp"

#include <cmath>
#include <string>

namespace zerocorr {

ZeroConfiguration::ZeroConfiguration(std::vector<double> real_points, std::vector<cplx> complex_points)
    : real_(std::move(real_points)), complex_(std::move(complex_points)) {
    for (double x : real_) {
        if (!std::isfinite(x)) throw InputError("non-finite real point in configuration");
    }
    for (cplx z : complex_) {
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
            throw InputError("non-finite complex point in configuration");
        }
        if (!(z.imag() > 0.0)) {
            throw DomainError("complex points must lie in the open upper half-plane");
        }
    }
}

std::vector<cplx> ZeroConfiguration::full_tuple() const {
    std::vector<cplx> w;
    w.reserve(static_cast<std::size_t>(m()));
    for (double x : real_) w.emplace_back(x, 0.0);
    for (cplx z : complex_) {
        w.push_back(z);
        w.push_back(std::conj(z));
    }
    return w;
}

std::vector<cplx> elementary_symmetric_complex(std::span<const cplx> points) {
    std::vector<cplx> e(points.size() + 1, cplx{0.0, 0.0});
    e[0] = 1.0;
    for (std::size_t r = 0; r < points.size(); ++r) {
        for (std::size_t i = r + 1; i >= 1; --i) {
            e[i] += points[r] * e[i - 1];
        }
    }
    return e;
}

double vandermonde_modulus(std::span<const cplx> points) {
    double v = 1.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            v *= std::abs(points[i] - points[j]);
        }
    }
    return v;
}

SymmetricProfile elementary_symmetric(const ZeroConfiguration& cfg) {
    const auto tuple = cfg.full_tuple();
    const auto e = elementary_symmetric_complex(tuple);
    SymmetricProfile p;
    p.sigma.resize(e.size());
    for (std::size_t i = 0; i < e.size(); ++i) {
        if (std::abs(e[i].imag()) > 1e-9 * (1.0 + std::abs(e[i]))) {
            throw ConsistencyError("symmetric function sigma_" + std::to_string(i) +
                                   " has a non-negligible imaginary part");
        }
        p.sigma[i] = e[i].real();
    }
    p.vandermonde = vandermonde_modulus(tuple);
    return p;
}

CoefficientMap::CoefficientMap(const SymmetricProfile& profile, int n)
    : n_(n), m_(profile.m()) {
    if (m_ > n_) {
        throw DimensionError("configuration has " + std::to_string(m_) +
                             " points but the polynomial degree is " + std::to_string(n_));
    }
    matrix_ = Eigen::MatrixXd::Zero(rows(), cols());
    for (int i = 0; i <= n_; ++i) {
        for (int j = 0; j < cols(); ++j) {
            const int idx = m_ - i + j;
            if (idx < 0 || idx > m_) continue;
            matrix_(i, j) = (idx % 2 == 0 ? 1.0 : -1.0) * profile.at(idx);
        }
    }
}

CoefficientMap coefficient_map(const ZeroConfiguration& cfg, int n) {
    if (cfg.m() > n) {
        throw DimensionError("k + 2l = " + std::to_string(cfg.m()) + " exceeds degree " + std::to_string(n));
    }
    return CoefficientMap(elementary_symmetric(cfg), n);
}

Eigen::MatrixXd real_vandermonde(const ZeroConfiguration& cfg) {
    const int m = cfg.m();
    Eigen::MatrixXd v(m, m);
    int row = 0;
    for (double x : cfg.real_points()) {
        double p = 1.0;
        for (int c = 0; c < m; ++c, p *= x) v(row, c) = p;
        ++row;
    }
    for (cplx z : cfg.complex_points()) {
        cplx p = 1.0;
        for (int c = 0; c < m; ++c, p *= z) {
            v(row, c) = p.real();
            v(row + 1, c) = p.imag();
        }
        row += 2;
    }
    return v;
}

cplx alternating_sigma_product(std::span<const cplx> points) {
    const auto e = elementary_symmetric_complex(points);
    cplx s = 0.0;
    for (std::size_t i = 0; i < e.size(); ++i) {
        s += (i % 2 == 0) ? e[i] : -e[i];
    }
    return s;
}

cplx product_one_minus(std::span<const cplx> points) {
    cplx p = 1.0;
    for (cplx w : points) p *= (1.0 - w);
    return p;
}

} // namespace zerocorr
