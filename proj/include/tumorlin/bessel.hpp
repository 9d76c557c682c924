#ifndef TUMORLIN_BESSEL_HPP
#define TUMORLIN_BESSEL_HPP

namespace tumorlin {

// log of Q_nu(x) = (x/2)^{-nu} I_nu(x) = sum_{m>=0} (x^2/4)^m / (m! Gamma(m+nu+1)),
// the entire, strictly positive part of the modified Bessel function.
//
// Every radial profile this project needs is a ratio of Q values at the same
// order, so working with logs sidesteps the e^x overflow entirely (the spec's
// sqrt(lambda)*R > 700 regime included).
double log_bessel_q(double nu, double x);

// Q_nu(x) / Q_nu(X): the normalized radial solution of
// u'' + (2nu+1)/r u' = lambda u with u'(0)=0, u(X/sqrt(lambda))=1,
// evaluated at x = sqrt(lambda) r.
double bessel_q_ratio(double nu, double x, double X);

// Same ratio with a precomputed denominator log (hot loops).
double bessel_q_ratio_logden(double nu, double x, double log_qX);

} // namespace tumorlin

#endif
