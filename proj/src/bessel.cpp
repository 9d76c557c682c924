#include "tumorlin/bessel.hpp"

#include <cmath>
#include <stdexcept>

namespace tumorlin {

double log_bessel_q(double nu, double x) {
    if (!(nu > -1.0)) throw std::invalid_argument("log_bessel_q: order must be > -1");
    if (x < 0.0) throw std::invalid_argument("log_bessel_q: negative argument");
    const double q = 0.25 * x * x;
    // sum_m q^m / (m! (nu+1)_m), with 1/Gamma(nu+1) restored at the end
    double term = 1.0, sum = 1.0;
    double scale_log = 0.0;
    const double rescale_at = 1e280, rescale_by = 1e-280, rescale_log = std::log(1e280);
    const long m_max = static_cast<long>(4.0 * std::sqrt(q)) + 200;
    for (long m = 0; m < m_max; ++m) {
        term *= q / ((static_cast<double>(m) + 1.0) * (nu + static_cast<double>(m) + 1.0));
        sum += term;
        if (sum > rescale_at) {
            sum *= rescale_by;
            term *= rescale_by;
            scale_log += rescale_log;
        }
        if (term < sum * 1e-18 && static_cast<double>(m) * static_cast<double>(m) > q) break;
    }
    return std::log(sum) + scale_log - std::lgamma(nu + 1.0);
}

double bessel_q_ratio(double nu, double x, double X) {
    return std::exp(log_bessel_q(nu, x) - log_bessel_q(nu, X));
}

double bessel_q_ratio_logden(double nu, double x, double log_qX) {
    return std::exp(log_bessel_q(nu, x) - log_qX);
}

} // namespace tumorlin
