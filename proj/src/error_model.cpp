#include "mtlab/error_model.hpp"

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <stdexcept>
#include <string>

#include "mtlab/errors.hpp"

namespace mtlab {

namespace {

constexpr double TWO_PI = 6.283185307179586476925286766559;

void require_positive(double value, const char* name) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw std::invalid_argument(std::string(name) + " must be a positive finite real");
    }
}

}  // namespace

void validate(const ErrorModel& model) {
    std::visit(
        [](const auto& m) {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, Gaussian>) {
                require_positive(m.sd, "Gaussian sd");
            } else if constexpr (std::is_same_v<M, StudentT>) {
                require_positive(m.df, "StudentT df");
                require_positive(m.scale, "StudentT scale");
            } else if constexpr (std::is_same_v<M, WeibullTail>) {
                require_positive(m.gamma, "WeibullTail gamma");
                require_positive(m.rate_c, "WeibullTail rateC");
            } else if constexpr (std::is_same_v<M, Pareto>) {
                require_positive(m.rho, "Pareto rho");
                require_positive(m.xmin, "Pareto xmin");
            } else {
                if (m.values.empty()) {
                    throw std::invalid_argument("Deterministic sequence must be nonempty");
                }
            }
        },
        model);
}

double survival(const ErrorModel& model, double x) {
    validate(model);
    return std::visit(
        [x](const auto& m) -> double {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, Gaussian>) {
                boost::math::normal_distribution<double> dist(0.0, m.sd);
                return boost::math::cdf(boost::math::complement(dist, x));
            } else if constexpr (std::is_same_v<M, StudentT>) {
                boost::math::students_t_distribution<double> dist(m.df);
                return boost::math::cdf(boost::math::complement(dist, x / m.scale));
            } else if constexpr (std::is_same_v<M, WeibullTail>) {
                if (x <= 0.0) return 1.0;
                return std::exp(-m.rate_c * std::pow(x, m.gamma));
            } else if constexpr (std::is_same_v<M, Pareto>) {
                if (x <= m.xmin) return 1.0;
                return std::pow(x / m.xmin, -m.rho);
            } else {
                throw UnsupportedOperationError("survival is undefined for the Deterministic stub");
            }
        },
        model);
}

double quantile_survival(const ErrorModel& model, double s) {
    validate(model);
    if (!(s > 0.0) || !(s < 1.0)) {
        throw std::domain_error("quantile_survival requires s in (0,1)");
    }
    return std::visit(
        [s](const auto& m) -> double {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, Gaussian>) {
                boost::math::normal_distribution<double> dist(0.0, m.sd);
                return boost::math::quantile(boost::math::complement(dist, s));
            } else if constexpr (std::is_same_v<M, StudentT>) {
                boost::math::students_t_distribution<double> dist(m.df);
                return m.scale * boost::math::quantile(boost::math::complement(dist, s));
            } else if constexpr (std::is_same_v<M, WeibullTail>) {
                return std::pow(-std::log(s) / m.rate_c, 1.0 / m.gamma);
            } else if constexpr (std::is_same_v<M, Pareto>) {
                return m.xmin * std::pow(s, -1.0 / m.rho);
            } else {
                throw UnsupportedOperationError(
                    "quantile_survival is undefined for the Deterministic stub");
            }
        },
        model);
}

double variance(const ErrorModel& model) {
    validate(model);
    return std::visit(
        [](const auto& m) -> double {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, Gaussian>) {
                return m.sd * m.sd;
            } else if constexpr (std::is_same_v<M, StudentT>) {
                if (m.df <= 2.0) {
                    throw InfiniteVarianceError("StudentT variance diverges for df <= 2");
                }
                return m.scale * m.scale * m.df / (m.df - 2.0);
            } else if constexpr (std::is_same_v<M, WeibullTail>) {
                // E[eps^p] = C^{-p/gamma} Gamma(1 + p/gamma) for survival exp(-C x^gamma).
                const double lam = std::pow(m.rate_c, -1.0 / m.gamma);
                const double m1 = lam * boost::math::tgamma(1.0 + 1.0 / m.gamma);
                const double m2 = lam * lam * boost::math::tgamma(1.0 + 2.0 / m.gamma);
                return m2 - m1 * m1;
            } else if constexpr (std::is_same_v<M, Pareto>) {
                if (m.rho <= 2.0) {
                    throw InfiniteVarianceError("Pareto variance diverges for rho <= 2");
                }
                const double r = m.rho;
                return m.xmin * m.xmin * r / ((r - 1.0) * (r - 1.0) * (r - 2.0));
            } else {
                throw UnsupportedOperationError(
                    "variance is undefined for the Deterministic stub");
            }
        },
        model);
}

WeightProfile unit_variance_scale(const WeightProfile& weights, const ErrorModel& model) {
    const double v = variance(model);
    const double ss = weights.sum_squares();
    if (!(ss > 0.0)) {
        throw std::invalid_argument("unit_variance_scale requires a nonzero weight profile");
    }
    return weights.scaled(1.0 / std::sqrt(v * ss));
}

double draw_value(const ErrorModel& model, Pcg64& engine) {
    return std::visit(
        [&engine](const auto& m) -> double {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, Gaussian>) {
                // Box-Muller, cosine branch; two uniforms per draw.
                const double u = engine.uniform();
                const double v = engine.uniform();
                return m.sd * std::sqrt(-2.0 * std::log(u)) * std::cos(TWO_PI * v);
            } else if constexpr (std::is_same_v<M, StudentT>) {
                // Bailey's polar variant: with U, V uniform,
                // sqrt(df*(U^{-2/df} - 1)) * cos(2*pi*V) is exactly t(df).
                const double u = engine.uniform();
                const double v = engine.uniform();
                const double radial = std::sqrt(m.df * std::expm1(-2.0 / m.df * std::log(u)));
                return m.scale * radial * std::cos(TWO_PI * v);
            } else if constexpr (std::is_same_v<M, WeibullTail>) {
                const double u = engine.uniform();
                return std::pow(-std::log(u) / m.rate_c, 1.0 / m.gamma);
            } else if constexpr (std::is_same_v<M, Pareto>) {
                const double u = engine.uniform();
                return m.xmin * std::pow(u, -1.0 / m.rho);
            } else {
                throw UnsupportedOperationError(
                    "draw_value is undefined for the Deterministic stub");
            }
        },
        model);
}

Drawer::Drawer(const ErrorModel& model, const RandomStream& stream)
    : model_(model), engine_(stream.engine()) {
    validate(model_);
}

double Drawer::next() {
    if (const auto* det = std::get_if<Deterministic>(&model_)) {
        const double value = det->values[det_pos_ % det->values.size()];
        ++det_pos_;
        return value;
    }
    return draw_value(model_, engine_);
}

void Drawer::fill(double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = next();
}

}  // namespace mtlab
