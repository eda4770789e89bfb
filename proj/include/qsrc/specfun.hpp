#pragma once

#include <complex>

namespace qsrc::specfun {

// Values of the Airy functions and their derivatives at a real argument.
struct AiryPair {
    double ai = 0;
    double ai_prime = 0;
    double bi = 0;
    double bi_prime = 0;
};

// Exponentially scaled values for x > 0:
//   ai = Ai(x) e^{+xi},  bi = Bi(x) e^{-xi},  xi = (2/3) x^{3/2}.
// For x <= 0 the values are unscaled and xi = 0.
struct AiryScaled {
    double ai = 0;
    double ai_prime = 0;
    double bi = 0;
    double bi_prime = 0;
    double xi = 0;
};

// Airy Ai, Bi and derivatives.  Series around the origin, Taylor-stepped ODE
// integration in the intermediate bands, asymptotic expansions beyond.
// Throws std::domain_error on non-finite input.
AiryPair airy(double x);

AiryScaled airy_scaled(double x);

// Outgoing-wave combination Ci(x) = Bi(x) + i Ai(x) and its derivative.
struct CiValue {
    std::complex<double> value;
    std::complex<double> derivative;
};

CiValue ci(double x);

} // namespace qsrc::specfun
