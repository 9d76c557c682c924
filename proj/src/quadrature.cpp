#include "tumorlin/quadrature.hpp"

#include <cassert>
#include <stdexcept>

namespace tumorlin {

double trapezoid(std::span<const double> f, double h) {
    const std::size_t n = f.size();
    if (n < 2) return 0.0;
    double s = 0.5 * (f[0] + f[n - 1]);
    for (std::size_t i = 1; i + 1 < n; ++i) s += f[i];
    return s * h;
}

double simpson(std::span<const double> f, double h) {
    const std::size_t n = f.size();
    if (n < 2) return 0.0;
    if (n == 2) return 0.5 * h * (f[0] + f[1]);
    std::size_t m = n - 1; // segments
    double s = 0.0;
    std::size_t last = 0;
    if (m % 2 == 1) {
        if (n >= 4) {
            // Simpson 3/8 on the first three segments keeps the rest even.
            s += 3.0 * h / 8.0 * (f[0] + 3.0 * f[1] + 3.0 * f[2] + f[3]);
            last = 3;
        } else {
            return trapezoid(f, h);
        }
    }
    double acc = f[last] + f[n - 1];
    for (std::size_t i = last + 1; i + 1 < n; ++i) acc += ((i - last) % 2 == 1) ? 4.0 * f[i] : 2.0 * f[i];
    s += acc * h / 3.0;
    return s;
}

std::vector<double> cumulative_trapezoid(std::span<const double> f, double h) {
    std::vector<double> out(f.size(), 0.0);
    for (std::size_t i = 1; i < f.size(); ++i)
        out[i] = out[i - 1] + 0.5 * h * (f[i - 1] + f[i]);
    return out;
}

std::vector<double> cumulative_simpson(std::span<const double> f, double h) {
    const std::size_t n = f.size();
    std::vector<double> out(n, 0.0);
    if (n < 3) {
        for (std::size_t i = 1; i < n; ++i) out[i] = out[i - 1] + 0.5 * h * (f[i - 1] + f[i]);
        return out;
    }
    for (std::size_t i = 1; i < n; ++i) {
        if (i % 2 == 0) {
            out[i] = out[i - 2] + h / 3.0 * (f[i - 2] + 4.0 * f[i - 1] + f[i]);
        } else if (i + 1 < n) {
            out[i] = out[i - 1] + h / 12.0 * (5.0 * f[i - 1] + 8.0 * f[i] - f[i + 1]);
        } else {
            // last (odd) node: mirrored half-panel using the two nodes before it
            out[i] = out[i - 1] + h / 12.0 * (-f[i - 2] + 8.0 * f[i - 1] + 5.0 * f[i]);
        }
    }
    return out;
}

} // namespace tumorlin
