#include "tumorlin/harmonics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "tumorlin/errors.hpp"
#include "tumorlin/quadrature.hpp"

namespace tumorlin {

namespace {

std::int64_t binomial(std::int64_t n, std::int64_t k) {
    if (k < 0 || n < 0 || k > n) return 0;
    k = std::min(k, n - k);
    std::int64_t out = 1;
    for (std::int64_t i = 1; i <= k; ++i) {
        out = out * (n - k + i) / i; // exact: prefix products are binomials
    }
    return out;
}

// associated Legendre P_k^m(x), positive convention (no (-1)^m)
double assoc_legendre(int k, int m, double x) {
    double pmm = 1.0;
    if (m > 0) {
        const double s = std::sqrt(std::max(0.0, (1.0 - x) * (1.0 + x)));
        double fact = 1.0;
        for (int i = 1; i <= m; ++i) {
            pmm *= fact * s;
            fact += 2.0;
        }
    }
    if (k == m) return pmm;
    double pmmp1 = x * (2.0 * m + 1.0) * pmm;
    if (k == m + 1) return pmmp1;
    double pkm = 0.0;
    for (int kk = m + 2; kk <= k; ++kk) {
        pkm = (x * (2.0 * kk - 1.0) * pmmp1 - (kk + m - 1.0) * pmm) / (kk - m);
        pmm = pmmp1;
        pmmp1 = pkm;
    }
    return pkm;
}

double lalpha_norm_radial(std::span<const double> u, double R, int n, double alpha) {
    const double h = R / (static_cast<double>(u.size()) - 1.0);
    if (std::isinf(alpha)) {
        double m = 0.0;
        for (double x : u) m = std::max(m, std::abs(x));
        return m;
    }
    std::vector<double> integrand(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double r = i * h;
        double w = 1.0;
        for (int j = 0; j < n - 1; ++j) w *= r;
        integrand[i] = std::pow(std::abs(u[i]), alpha) * w;
    }
    return std::pow(trapezoid(integrand, h), 1.0 / alpha);
}

} // namespace

std::int64_t eigenvalue_lambda(int n, int k) {
    if (n < 2 || k < 0) throw std::invalid_argument("eigenvalue_lambda: need n>=2, k>=0");
    return static_cast<std::int64_t>(n + k - 2) * k;
}

std::int64_t dimension_d(int n, int k) {
    if (n < 2 || k < 0) throw std::invalid_argument("dimension_d: need n>=2, k>=0");
    if (k == 0) return 1;
    return binomial(n + k - 1, k) - binomial(n + k - 3, k - 2);
}

double sphere_area(int n) {
    return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
}

double real_harmonic(int n, int k, int l, std::span<const double> omega) {
    if (l < 1 || l > dimension_d(n, k)) throw std::invalid_argument("real_harmonic: order out of range");
    if (n == 2) {
        const double theta = std::atan2(omega[1], omega[0]);
        if (k == 0) return 1.0 / std::sqrt(2.0 * std::numbers::pi);
        const double nrm = 1.0 / std::sqrt(std::numbers::pi);
        return (l == 1) ? nrm * std::cos(k * theta) : nrm * std::sin(k * theta);
    }
    if (n == 3) {
        const double ct = omega[2];
        const double phi = std::atan2(omega[1], omega[0]);
        const int m = l - k - 1; // -k..k
        const int am = std::abs(m);
        double lg = 0.5 * (std::log(2.0 * k + 1.0) - std::log(4.0 * std::numbers::pi)) +
                    0.5 * (std::lgamma(k - am + 1.0) - std::lgamma(k + am + 1.0));
        double nrm = std::exp(lg);
        const double p = assoc_legendre(k, am, ct);
        if (m == 0) return nrm * p;
        nrm *= std::numbers::sqrt2;
        return (m > 0) ? nrm * p * std::cos(am * phi) : nrm * p * std::sin(am * phi);
    }
    throw UnsupportedDimension("real_harmonic: physical basis only for n in {2,3}");
}

double norm_X(const RadialCoefficientField& field, double alpha, double beta) {
    if (!(alpha >= 1.0) || !(beta >= 1.0))
        throw std::invalid_argument("norm_X: indices must be in [1,inf]");
    if (field.radial.empty()) return 0.0;
    if (std::isinf(beta)) {
        double m = 0.0;
        for (const auto& [idx, u] : field.radial)
            m = std::max(m, lalpha_norm_radial(u, field.R, field.n, alpha));
        return m;
    }
    double acc = 0.0;
    for (const auto& [idx, u] : field.radial)
        acc += std::pow(lalpha_norm_radial(u, field.R, field.n, alpha), beta);
    return std::pow(acc, 1.0 / beta);
}

double norm_Y(const SphereCoefficientField& field, double beta) {
    if (!(beta >= 1.0)) throw std::invalid_argument("norm_Y: index must be in [1,inf]");
    if (std::isinf(beta)) {
        double m = 0.0;
        for (const auto& [idx, a] : field.coeff) m = std::max(m, std::abs(a));
        return m;
    }
    double acc = 0.0;
    for (const auto& [idx, a] : field.coeff) acc += std::pow(std::abs(a), beta);
    return std::pow(acc, 1.0 / beta);
}

std::vector<double> synthesize(const RadialCoefficientField& field,
                               std::span<const SpherePoint> points) {
    if (field.n != 2 && field.n != 3)
        throw UnsupportedDimension("synthesize: only n in {2,3}");
    std::vector<double> out(points.size(), 0.0);
    for (const auto& [idx, u] : field.radial) {
        const double h = field.R / (static_cast<double>(u.size()) - 1.0);
        for (std::size_t i = 0; i < points.size(); ++i) {
            const double r = points[i].r;
            // linear interpolation of the radial coefficient
            double ur;
            {
                double x = r / h;
                long j = std::min(static_cast<long>(u.size()) - 2, std::max(0L, static_cast<long>(x)));
                const double t = x - j;
                ur = (1.0 - t) * u[j] + t * u[j + 1];
            }
            out[i] += ur * real_harmonic(field.n, idx.k, idx.l,
                                         std::span<const double>(points[i].omega.data(), field.n));
        }
    }
    return out;
}

SphereQuadrature sphere_quadrature(int n, int n_theta, int n_phi) {
    SphereQuadrature q;
    if (n == 2) {
        const int m = n_phi;
        q.omega.resize(m);
        q.weight.assign(m, 2.0 * std::numbers::pi / m);
        for (int i = 0; i < m; ++i) {
            const double t = 2.0 * std::numbers::pi * i / m;
            q.omega[i] = {std::cos(t), std::sin(t), 0.0};
        }
        return q;
    }
    if (n != 3) throw UnsupportedDimension("sphere_quadrature: only n in {2,3}");
    // Gauss-Legendre nodes in cos(theta) by Newton iteration
    std::vector<double> x(n_theta), w(n_theta);
    for (int i = 0; i < n_theta; ++i) {
        double xi = std::cos(std::numbers::pi * (i + 0.75) / (n_theta + 0.5));
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = xi;
            for (int j = 2; j <= n_theta; ++j) {
                const double p2 = ((2.0 * j - 1.0) * xi * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            const double dp = n_theta * (xi * p1 - p0) / (xi * xi - 1.0);
            const double dx = p1 / dp;
            xi -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        double p0 = 1.0, p1 = xi;
        for (int j = 2; j <= n_theta; ++j) {
            const double p2 = ((2.0 * j - 1.0) * xi * p1 - (j - 1.0) * p0) / j;
            p0 = p1;
            p1 = p2;
        }
        const double dp = n_theta * (xi * p1 - p0) / (xi * xi - 1.0);
        x[i] = xi;
        w[i] = 2.0 / ((1.0 - xi * xi) * dp * dp);
    }
    q.omega.reserve(static_cast<std::size_t>(n_theta) * n_phi);
    q.weight.reserve(static_cast<std::size_t>(n_theta) * n_phi);
    for (int i = 0; i < n_theta; ++i) {
        const double ct = x[i];
        const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
        for (int j = 0; j < n_phi; ++j) {
            const double phi = 2.0 * std::numbers::pi * j / n_phi;
            q.omega.push_back({st * std::cos(phi), st * std::sin(phi), ct});
            q.weight.push_back(w[i] * 2.0 * std::numbers::pi / n_phi);
        }
    }
    return q;
}

} // namespace tumorlin
