#include "zerocorr/simplex.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace zerocorr {

namespace {

constexpr double kEps = 1e-10;

// Tableau layout follows the usual dictionary form: row i reads
// x_B[i] = D(i, n+1) - sum_j D(i, j) x_N[j]. Column n is the phase-one
// artificial variable, row m the objective and row m+1 the phase-one objective.
class Tableau {
public:
    Tableau(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, const Eigen::VectorXd& c)
        : m_(static_cast<int>(b.size())), n_(static_cast<int>(c.size())),
          basis_(static_cast<std::size_t>(m_)), nonbasis_(static_cast<std::size_t>(n_) + 1),
          d_(Eigen::MatrixXd::Zero(m_ + 2, n_ + 2)) {
        for (int i = 0; i < m_; ++i) {
            d_.row(i).head(n_) = a.row(i);
            d_(i, n_) = -1.0;
            d_(i, n_ + 1) = b(i);
            basis_[static_cast<std::size_t>(i)] = n_ + i;
        }
        for (int j = 0; j < n_; ++j) {
            nonbasis_[static_cast<std::size_t>(j)] = j;
            d_(m_, j) = -c(j);
        }
        nonbasis_[static_cast<std::size_t>(n_)] = -1;
        d_(m_ + 1, n_) = 1.0;
    }

    LpResult solve() {
        LpResult out;
        int r = 0;
        for (int i = 1; i < m_; ++i) {
            if (d_(i, n_ + 1) < d_(r, n_ + 1)) r = i;
        }
        if (m_ > 0 && d_(r, n_ + 1) < -kEps) {
            pivot(r, n_);
            if (!run(m_ + 1, /*skip=*/-2) || d_(m_ + 1, n_ + 1) < -kEps) {
                out.status = LpStatus::infeasible;
                return out;
            }
            for (int i = 0; i < m_; ++i) {
                if (basis_[static_cast<std::size_t>(i)] != -1) continue;
                int s = 0;
                for (int j = 1; j <= n_; ++j) {
                    if (std::abs(d_(i, j)) > std::abs(d_(i, s))) s = j;
                }
                pivot(i, s);
            }
        }
        const bool bounded = run(m_, /*skip=*/-1);
        out.x = Eigen::VectorXd::Zero(n_);
        for (int i = 0; i < m_; ++i) {
            const int v = basis_[static_cast<std::size_t>(i)];
            if (v >= 0 && v < n_) out.x(v) = d_(i, n_ + 1);
        }
        out.status = bounded ? LpStatus::optimal : LpStatus::unbounded;
        out.objective = bounded ? d_(m_, n_ + 1) : std::numeric_limits<double>::infinity();
        return out;
    }

private:
    void pivot(int r, int s) {
        const double inv = 1.0 / d_(r, s);
        for (int i = 0; i < m_ + 2; ++i) {
            if (i == r) continue;
            if (std::abs(d_(i, s)) <= kEps * 1e-3) {
                d_(i, s) *= -inv;
                continue;
            }
            const double factor = d_(i, s) * inv;
            d_.row(i) -= factor * d_.row(r);
            d_(i, s) = -factor;
        }
        d_.row(r) *= inv;
        d_(r, s) = inv;
        std::swap(basis_[static_cast<std::size_t>(r)], nonbasis_[static_cast<std::size_t>(s)]);
    }

    // Bland's rule: smallest variable index enters, ratio ties leave by index.
    bool run(int objective_row, int skip) {
        for (int iter = 0; iter < 10000; ++iter) {
            int s = -1;
            for (int j = 0; j <= n_; ++j) {
                const int var = nonbasis_[static_cast<std::size_t>(j)];
                if (var == skip || d_(objective_row, j) >= -kEps) continue;
                if (s == -1 || var < nonbasis_[static_cast<std::size_t>(s)]) s = j;
            }
            if (s == -1) return true;
            int r = -1;
            double best = 0.0;
            for (int i = 0; i < m_; ++i) {
                if (d_(i, s) <= kEps) continue;
                const double ratio = d_(i, n_ + 1) / d_(i, s);
                if (r == -1 || ratio < best - kEps ||
                    (ratio <= best + kEps && basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(r)])) {
                    r = i;
                    best = ratio;
                }
            }
            if (r == -1) return false;
            pivot(r, s);
        }
        return true;
    }

    int m_;
    int n_;
    std::vector<int> basis_;
    std::vector<int> nonbasis_;
    Eigen::MatrixXd d_;
};

} // namespace

LpResult simplex_maximize(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, const Eigen::VectorXd& c) {
    return Tableau(a, b, c).solve();
}

LpResult maximize_free(const Eigen::MatrixXd& g, const Eigen::VectorXd& lo, const Eigen::VectorXd& hi,
                       const Eigen::VectorXd& c) {
    const int d = static_cast<int>(g.cols());
    std::vector<Eigen::VectorXd> rows;
    std::vector<double> rhs;
    for (int i = 0; i < g.rows(); ++i) {
        const double scale = g.row(i).cwiseAbs().maxCoeff();
        if (scale == 0.0) {
            // Constant row: 0 must lie in [lo, hi].
            if (lo(i) > kEps || hi(i) < -kEps) return {LpStatus::infeasible, 0.0, {}};
            continue;
        }
        const Eigen::VectorXd row = g.row(i).transpose() / scale;
        if (std::isfinite(hi(i))) {
            Eigen::VectorXd r(2 * d);
            r << row, -row;
            rows.push_back(r);
            rhs.push_back(hi(i) / scale);
        }
        if (std::isfinite(lo(i))) {
            Eigen::VectorXd r(2 * d);
            r << -row, row;
            rows.push_back(r);
            rhs.push_back(-lo(i) / scale);
        }
    }
    Eigen::MatrixXd a(static_cast<Eigen::Index>(rows.size()), 2 * d);
    Eigen::VectorXd b(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        a.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
        b(static_cast<Eigen::Index>(i)) = rhs[i];
    }
    Eigen::VectorXd cc(2 * d);
    cc << c, -c;
    LpResult split = simplex_maximize(a, b, cc);
    LpResult out{split.status, split.objective, Eigen::VectorXd::Zero(d)};
    if (split.status == LpStatus::optimal) {
        out.x = split.x.head(d) - split.x.tail(d);
    }
    return out;
}

} // namespace zerocorr
