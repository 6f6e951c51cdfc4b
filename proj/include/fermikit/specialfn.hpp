#pragma once

namespace fermikit {

// Branch switch points for airy_ai. Between -asymptotic_negative and 2 the
// function is continued by Taylor series from a table of anchors generated
// from Ai(0), Ai'(0); on (2, asymptotic_positive) a Gaussian-damped Laplace
// integral is used.
struct AiryEvalPolicy {
  double asymptotic_positive = 8.0;
  double asymptotic_negative = 20.0;
  int asymptotic_terms = 12;  // minimum number of series terms
};

inline constexpr double kAiryMin = -200.0;
inline constexpr double kAiryMax = 200.0;

// Ai(x) on [kAiryMin, kAiryMax]; RangeError outside.
double airy_ai(double x, const AiryEvalPolicy& policy = {});

// Ai'(x) on [-asymptotic_negative, 2] from the same anchor table (used by tests
// and the closed-form Airy kernel cross-check).
double airy_ai_prime_near(double x);

// Li_{1/2}(-u) for u > 0 through the Fermi-Dirac integral.
double polylog_half_neg(double u);

// Same with the argument given as log(u); usable far beyond the double range of u.
double polylog_half_neg_log(double log_u);

// Li_{1/2}(-u) by its power series; requires 0 < u < 1.
double polylog_half_neg_series(double u);

}  // namespace fermikit
