#pragma once

// Scalar normal-distribution helpers used by the EP site updates.
//
// zeta1(x) = phi(x) / Phi(x) and zeta2(x) = -zeta1(x) * (zeta1(x) + x).
// Both are evaluated without cancellation or overflow in the deep lower tail.
// For x above roughly 38.5, phi(x) underflows and zeta1/zeta2 return +0 / -0.

namespace epprobit {

inline constexpr double kInvSqrt2Pi = 0.398942280401432677939946059934;
inline constexpr double kLogSqrt2Pi = 0.918938533204672741780329736406;

double norm_pdf(double x);
double log_norm_pdf(double x);
double norm_cdf(double x);
double log_norm_cdf(double x);

double zeta1(double x);
double zeta2(double x);

/// Both Mills-ratio functions from a single tail evaluation.
struct ZetaPair {
    double zeta1;
    double zeta2;
};
ZetaPair zeta(double x);

}  // namespace epprobit
