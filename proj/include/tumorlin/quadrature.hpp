#ifndef TUMORLIN_QUADRATURE_HPP
#define TUMORLIN_QUADRATURE_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace tumorlin {

// Composite trapezoid on a uniform grid with spacing h.
double trapezoid(std::span<const double> f, double h);

// Composite Simpson; odd segment counts fall back to Simpson + a cubic
// (Simpson 3/8) tail so the order stays 4.
double simpson(std::span<const double> f, double h);

// M_i = int_0^{r_i} f, trapezoid panels. M[0] = 0.
std::vector<double> cumulative_trapezoid(std::span<const double> f, double h);

// Cumulative integral with 4th-order panels: even nodes by Simpson pairs,
// odd nodes by the 3-point half-panel rule (h/12)(5 f_i + 8 f_{i+1} - f_{i+2}).
std::vector<double> cumulative_simpson(std::span<const double> f, double h);

} // namespace tumorlin

#endif
