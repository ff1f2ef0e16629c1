#pragma once

#include <Eigen/Dense>

#include <complex>
#include <span>
#include <vector>

namespace zerocorr {

using cplx = std::complex<double>;

/// k real points and l upper-half-plane points. The implied full tuple of
/// length m = k + 2l is (x_1, .., x_k, z_1, conj z_1, .., z_l, conj z_l), which
/// is closed under conjugation.
class ZeroConfiguration {
public:
    ZeroConfiguration() = default;
    /// Throws DomainError if some complex point has Im <= 0, InputError on
    /// non-finite input.
    ZeroConfiguration(std::vector<double> real_points, std::vector<cplx> complex_points);

    std::span<const double> real_points() const { return real_; }
    std::span<const cplx> complex_points() const { return complex_; }
    int k() const { return static_cast<int>(real_.size()); }
    int l() const { return static_cast<int>(complex_.size()); }
    int m() const { return k() + 2 * l(); }

    std::vector<cplx> full_tuple() const;

private:
    std::vector<double> real_;
    std::vector<cplx> complex_;
};

/// sigma_0 .. sigma_m of a conjugate-closed tuple together with v_m.
struct SymmetricProfile {
    std::vector<double> sigma;
    double vandermonde = 0.0;

    int m() const { return static_cast<int>(sigma.size()) - 1; }
    /// sigma_i, with the convention sigma_i = 0 for i < 0 or i > m.
    double at(int i) const {
        return (i < 0 || i > m()) ? 0.0 : sigma[static_cast<std::size_t>(i)];
    }
};

/// Complex sigma_0 .. sigma_m by the product recurrence
/// e_i <- e_i + w_r e_{i-1}; no conjugate-closure requirement.
std::vector<cplx> elementary_symmetric_complex(std::span<const cplx> points);

/// Product of pairwise distances |w_i - w_j|, i < j.
double vandermonde_modulus(std::span<const cplx> points);

/// Throws ConsistencyError if an imaginary residue exceeds 1e-9 (1 + |sigma_i|).
SymmetricProfile elementary_symmetric(const ZeroConfiguration& cfg);

/// Linear map from t_0..t_{n-m} to the coefficient slots 0..n:
/// entry(i, j) = (-1)^{m-i+j} sigma_{m-i+j}. Column j holds the coefficients
/// of prod (z - w) * z^j.
class CoefficientMap {
public:
    CoefficientMap(const SymmetricProfile& profile, int n);

    int n() const { return n_; }
    int m() const { return m_; }
    int rows() const { return n_ + 1; }
    int cols() const { return n_ - m_ + 1; }
    double operator()(int i, int j) const { return matrix_(i, j); }
    const Eigen::MatrixXd& matrix() const { return matrix_; }

    /// Coefficients xi = M t.
    Eigen::VectorXd apply(const Eigen::VectorXd& t) const { return matrix_ * t; }

private:
    int n_;
    int m_;
    Eigen::MatrixXd matrix_;
};

/// Throws DimensionError when m > n.
CoefficientMap coefficient_map(const ZeroConfiguration& cfg, int n);

/// Square m x m matrix whose rows are (x^p)_p for every real point and
/// (Re z^p)_p, (Im z^p)_p for every complex point, p = 0 .. m-1.
/// |det| = 2^{-l} v_m of the full tuple.
Eigen::MatrixXd real_vandermonde(const ZeroConfiguration& cfg);

/// sum_i (-1)^i sigma_i(w) (equal to prod (1 - w_i)).
cplx alternating_sigma_product(std::span<const cplx> points);

/// prod (1 - w_i), evaluated directly.
cplx product_one_minus(std::span<const cplx> points);

} // namespace zerocorr
