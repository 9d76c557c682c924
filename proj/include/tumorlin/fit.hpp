#ifndef TUMORLIN_FIT_HPP
#define TUMORLIN_FIT_HPP

#include <span>

namespace tumorlin {

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

// Ordinary least squares y ~ slope*x + intercept.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

} // namespace tumorlin

#endif
