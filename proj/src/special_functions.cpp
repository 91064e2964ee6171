#include "epprobit/special_functions.hpp"

#include <cmath>

namespace epprobit {

namespace {

constexpr double kTailSwitch = -5.0;
constexpr double kInvSqrt2 = 0.707106781186547524400844362105;

// For t >= 5 evaluates the continued-fraction tail
//   D(t) = t + 2/(t + 3/(t + 4/(t + ...)))
// so that the Mills ratio is R(t) = Phi(-t)/phi(t) = 1/(t + 1/D(t)).
// Modified Lentz iteration; converges in a few dozen terms for t >= 5.
double mills_tail(double t) {
    constexpr double tiny = 1e-300;
    constexpr double eps = 1e-16;
    double f = t;
    double c = t;
    double d = 0.0;
    for (int k = 2; k < 500; ++k) {
        const double a = static_cast<double>(k);
        d = t + a * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = t + a / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = c * d;
        f *= delta;
        if (std::fabs(delta - 1.0) < eps) break;
    }
    return f;
}

}  // namespace

double norm_pdf(double x) {
    return kInvSqrt2Pi * std::exp(-0.5 * x * x);
}

double log_norm_pdf(double x) {
    return -0.5 * x * x - kLogSqrt2Pi;
}

double norm_cdf(double x) {
    return 0.5 * std::erfc(-x * kInvSqrt2);
}

double log_norm_cdf(double x) {
    if (x < kTailSwitch) {
        const double t = -x;
        // log Phi(x) = log phi(x) + log R(t), R(t) = 1/(t + 1/D(t))
        return log_norm_pdf(x) - std::log(t + 1.0 / mills_tail(t));
    }
    if (x > 0.0) {
        return std::log1p(-0.5 * std::erfc(x * kInvSqrt2));
    }
    return std::log(norm_cdf(x));
}

ZetaPair zeta(double x) {
    if (x < kTailSwitch) {
        // zeta1 = 1/R(t) = t + 1/D(t), hence zeta1 + x = 1/D(t) exactly.
        const double t = -x;
        const double inv_tail = 1.0 / mills_tail(t);
        const double z1 = t + inv_tail;
        return {z1, -z1 * inv_tail};
    }
    const double z1 = norm_pdf(x) / norm_cdf(x);
    return {z1, -z1 * (z1 + x)};
}

double zeta1(double x) {
    return zeta(x).zeta1;
}

double zeta2(double x) {
    return zeta(x).zeta2;
}

}  // namespace epprobit
