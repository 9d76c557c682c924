#include "tumorlin/interp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tumorlin {

MonotoneCubic::MonotoneCubic(double x0, double h, std::span<const double> y)
    : x0_(x0), h_(h), y_(y.begin(), y.end()) {
    const std::size_t n = y_.size();
    if (n < 2 || !(h > 0.0)) throw std::invalid_argument("MonotoneCubic: bad grid");
    std::vector<double> d(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) d[i] = (y_[i + 1] - y_[i]) / h_;
    m_.assign(n, 0.0);
    m_[0] = d[0];
    m_[n - 1] = d[n - 2];
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (d[i - 1] * d[i] <= 0.0)
            m_[i] = 0.0;
        else
            m_[i] = 0.5 * (d[i - 1] + d[i]);
    }
    // Fritsch-Carlson limiter
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (d[i] == 0.0) {
            m_[i] = m_[i + 1] = 0.0;
            continue;
        }
        const double a = m_[i] / d[i];
        const double b = m_[i + 1] / d[i];
        const double s = a * a + b * b;
        if (s > 9.0) {
            const double t = 3.0 / std::sqrt(s);
            m_[i] = t * a * d[i];
            m_[i + 1] = t * b * d[i];
        }
    }
}

double MonotoneCubic::operator()(double x) const {
    const std::size_t n = y_.size();
    double u = (x - x0_) / h_;
    long j = static_cast<long>(std::floor(u));
    j = std::clamp<long>(j, 0, static_cast<long>(n) - 2);
    const double t = u - static_cast<double>(j);
    const double y0 = y_[static_cast<std::size_t>(j)], y1 = y_[static_cast<std::size_t>(j) + 1];
    const double m0 = m_[static_cast<std::size_t>(j)] * h_, m1 = m_[static_cast<std::size_t>(j) + 1] * h_;
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * m0 + (-2 * t3 + 3 * t2) * y1 + (t3 - t2) * m1;
}

double MonotoneCubic::derivative(double x) const {
    const std::size_t n = y_.size();
    double u = (x - x0_) / h_;
    long j = static_cast<long>(std::floor(u));
    j = std::clamp<long>(j, 0, static_cast<long>(n) - 2);
    const double t = u - static_cast<double>(j);
    const double y0 = y_[static_cast<std::size_t>(j)], y1 = y_[static_cast<std::size_t>(j) + 1];
    const double m0 = m_[static_cast<std::size_t>(j)] * h_, m1 = m_[static_cast<std::size_t>(j) + 1] * h_;
    const double t2 = t * t;
    return ((6 * t2 - 6 * t) * y0 + (3 * t2 - 4 * t + 1) * m0 + (-6 * t2 + 6 * t) * y1 + (3 * t2 - 2 * t) * m1) / h_;
}

} // namespace tumorlin
