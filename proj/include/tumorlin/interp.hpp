#ifndef TUMORLIN_INTERP_HPP
#define TUMORLIN_INTERP_HPP

#include <span>
#include <vector>

namespace tumorlin {

// Monotone cubic (Fritsch-Carlson) interpolant on a uniform grid.
// Shape-preserving: never overshoots between nodes, C^1 everywhere.
class MonotoneCubic {
  public:
    MonotoneCubic() = default;
    MonotoneCubic(double x0, double h, std::span<const double> y);

    double operator()(double x) const;
    double derivative(double x) const;

  private:
    double x0_ = 0.0, h_ = 1.0;
    std::vector<double> y_;
    std::vector<double> m_; // node slopes
};

} // namespace tumorlin

#endif
