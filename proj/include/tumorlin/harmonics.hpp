#ifndef TUMORLIN_HARMONICS_HPP
#define TUMORLIN_HARMONICS_HPP

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

namespace tumorlin {

// Spherical-harmonic bookkeeping on S^{n-1}: eigenvalues, multiplicities,
// coefficient-space norms, and physical synthesis for n in {2,3}.
//
// Basis convention: real-valued, unit L^2(S^{n-1}) normalization, no
// Condon-Shortley phase. For n=3 the order index l = 1..2k+1 maps to
// m = l-k-1, with sin|m| branches for m<0 and cos for m>0. For n=2,
// l=1 is cos(k theta)/sqrt(pi) and l=2 is sin(k theta)/sqrt(pi).

// lambda_k = (n+k-2) k
std::int64_t eigenvalue_lambda(int n, int k);

// multiplicity d_k of degree-k harmonics: C(n+k-1,k) - C(n+k-3,k-2)
std::int64_t dimension_d(int n, int k);

struct ModeIndex {
    int k = 0;
    int l = 1; // 1..d_k
    friend bool operator<(const ModeIndex& a, const ModeIndex& b) {
        return a.k != b.k ? a.k < b.k : a.l < b.l;
    }
    friend bool operator==(const ModeIndex& a, const ModeIndex& b) { return a.k == b.k && a.l == b.l; }
};

// (k,l) -> radial coefficient array on a shared uniform grid
struct RadialCoefficientField {
    int n = 3;
    double R = 1.0;
    std::map<ModeIndex, std::vector<double>> radial;
};

// (k,l) -> scalar coefficient (functions on the sphere)
struct SphereCoefficientField {
    int n = 3;
    std::map<ModeIndex, double> coeff;
};

// X_{alpha,beta} norm: inner weighted L^alpha(r^{n-1} dr) per channel
// (trapezoid), outer l^beta across channels; alpha or beta may be INFINITY.
double norm_X(const RadialCoefficientField& field, double alpha, double beta);

// Y_beta norm: l^beta of the scalar coefficients.
double norm_Y(const SphereCoefficientField& field, double beta);

// Y_{kl}(omega) for omega a unit vector of dimension n (n in {2,3}).
double real_harmonic(int n, int k, int l, std::span<const double> omega);

struct SpherePoint {
    double r = 0.0;
    std::array<double, 3> omega{0.0, 0.0, 1.0}; // first n entries used
};

// pointwise synthesis u(r*omega) = sum u_{kl}(r) Y_{kl}(omega)
std::vector<double> synthesize(const RadialCoefficientField& field,
                               std::span<const SpherePoint> points);

// surface area of S^{n-1}
double sphere_area(int n);

// quadrature nodes/weights on S^{n-1} exact for the harmonics used here:
// Gauss-Legendre x uniform for n=3 (n_theta x n_phi), uniform for n=2.
struct SphereQuadrature {
    std::vector<std::array<double, 3>> omega;
    std::vector<double> weight;
};
SphereQuadrature sphere_quadrature(int n, int n_theta, int n_phi);

} // namespace tumorlin

#endif
