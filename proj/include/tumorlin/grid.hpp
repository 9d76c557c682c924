#ifndef TUMORLIN_GRID_HPP
#define TUMORLIN_GRID_HPP

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace tumorlin {

// Uniform radial grid r_i = i*R/N, i = 0..N.
struct RadialGrid {
    double R = 1.0;
    int N = 4096;

    RadialGrid() = default;
    RadialGrid(double radius, int segments) : R(radius), N(segments) {
        if (!(R > 0.0) || N < 8) throw std::invalid_argument("RadialGrid: need R>0 and N>=8");
    }

    double h() const { return R / N; }
    int nodes() const { return N + 1; }
    double r(int i) const { return (i == N) ? R : i * h(); }

    std::vector<double> node_values() const {
        std::vector<double> out(static_cast<std::size_t>(N) + 1);
        for (int i = 0; i <= N; ++i) out[static_cast<std::size_t>(i)] = r(i);
        return out;
    }
};

} // namespace tumorlin

#endif
