#include "mtlab/window_model.hpp"

#include <boost/math/distributions/normal.hpp>

#include <cmath>
#include <limits>
#include <stdexcept>

#include "mtlab/errors.hpp"

namespace mtlab {

std::size_t GaussianWindowModel::position(int index) const {
    const int ri = static_cast<int>(r);
    if (index < -ri || index > ri || index == 0) {
        throw std::out_of_range("window index outside {-r..-1, 1..r}");
    }
    return index < 0 ? static_cast<std::size_t>(index + ri)
                     : static_cast<std::size_t>(index + ri - 1);
}

int GaussianWindowModel::index_at(std::size_t pos) const {
    if (pos >= 2 * r) throw std::out_of_range("window position outside 0..2r-1");
    const int shifted = static_cast<int>(pos) - static_cast<int>(r);
    return shifted < 0 ? shifted : shifted + 1;
}

std::vector<double> window_coefficients(std::size_t r, const std::vector<double>& a) {
    if (a.size() != r) throw std::invalid_argument("window_coefficients requires |a| = r");
    for (double ak : a) {
        if (ak < 0.0) throw std::invalid_argument("window_coefficients requires a_k >= 0");
    }
    auto a_at = [&](std::size_t m) { return (m >= 1 && m <= r) ? a[m - 1] : 0.0; };
    std::vector<double> c(2 * r, 0.0);
    for (std::size_t j = 1; j <= 2 * r; ++j) {
        double acc = 0.0;
        for (std::size_t k = 0; k <= r; ++k) {
            for (std::size_t m = k + 1; m <= k + j; ++m) acc += a_at(m);
        }
        c[j - 1] = acc / static_cast<double>(r + 1);
    }
    return c;
}

GaussianWindowModel build_window_model(std::size_t r, const std::vector<double>& c,
                                       double delta) {
    if (r == 0) throw std::invalid_argument("build_window_model requires r >= 1");
    if (!(delta > 0.0)) throw std::invalid_argument("build_window_model requires delta > 0");
    if (c.size() != 2 * r) {
        throw std::invalid_argument("build_window_model requires |c| = 2r");
    }
    for (double ck : c) {
        if (!(ck >= 0.0) || !std::isfinite(ck)) {
            throw std::invalid_argument("build_window_model requires finite c_k >= 0");
        }
    }

    GaussianWindowModel model;
    model.r = r;
    model.c = c;
    model.delta = delta;

    for (std::size_t k = 1; k <= 2 * r; ++k) {
        const double cov = 1.0 - c[k - 1] * delta;
        if (cov < -1.0 || cov > 1.0) {
            throw WindowModelError("full-window covariance 1 - c_k*delta outside [-1, 1]");
        }
    }

    const std::size_t dim = 2 * r;
    auto c_at = [&](int m) {
        const int abs_m = m < 0 ? -m : m;
        return abs_m == 0 ? 0.0 : c[static_cast<std::size_t>(abs_m) - 1];
    };
    model.sigma1.resize(dim, dim);
    for (std::size_t p = 0; p < dim; ++p) {
        for (std::size_t q = 0; q < dim; ++q) {
            const int i = model.index_at(p);
            const int j = model.index_at(q);
            model.sigma1(p, q) = c_at(i) + c_at(j) - c_at(i - j);
        }
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(model.sigma1);
    if (solver.info() != Eigen::Success) {
        throw WindowModelError("eigendecomposition of Sigma1 failed");
    }
    const Eigen::VectorXd& ev = solver.eigenvalues();
    if (ev.minCoeff() < -1e-10) {
        throw WindowModelError("Sigma1 is not positive semidefinite");
    }
    Eigen::VectorXd root = ev.cwiseMax(0.0).cwiseSqrt();
    model.factor = solver.eigenvectors() * root.asDiagonal() * solver.eigenvectors().transpose();
    return model;
}

WindowSample sample_window_conditional(const GaussianWindowModel& model, double t,
                                       const RandomStream& stream) {
    if (model.r == 0 || model.c.size() != 2 * model.r) {
        throw std::invalid_argument("sample_window_conditional requires a built model");
    }
    boost::math::normal_distribution<double> std_normal(0.0, 1.0);
    const double tail = std::isinf(t) && t < 0.0
                            ? 1.0
                            : boost::math::cdf(boost::math::complement(std_normal, t));
    if (!(tail > 0.0)) {
        throw std::invalid_argument("sample_window_conditional: truncation point has no tail mass");
    }

    Pcg64 engine = stream.engine();
    WindowSample sample;
    // Inverse-survival draw of the center, truncated to (t, inf).
    const double u0 = engine.uniform();
    sample.x0 = boost::math::quantile(boost::math::complement(std_normal, u0 * tail));

    const std::size_t dim = 2 * model.r;
    Eigen::VectorXd g(dim);
    for (std::size_t p = 0; p < dim; ++p) {
        g(static_cast<Eigen::Index>(p)) =
            boost::math::quantile(std_normal, engine.uniform());
    }
    Eigen::VectorXd noise = std::sqrt(model.delta) * (model.factor * g);

    sample.neighbors.resize(dim);
    for (std::size_t p = 0; p < dim; ++p) {
        const int i = model.index_at(p);
        const double ci = model.c[static_cast<std::size_t>(i < 0 ? -i : i) - 1];
        sample.neighbors[p] =
            (1.0 - ci * model.delta) * sample.x0 + noise(static_cast<Eigen::Index>(p));
    }
    return sample;
}

}  // namespace mtlab
