#pragma once

#include <complex>
#include <limits>

#include "fermikit/params.hpp"

namespace fermikit {

using cplx = std::complex<double>;

// Pass as the length argument to request the infinite product.
inline constexpr long kInfinite = std::numeric_limits<long>::max();

// (a;q)_n = prod_{k<n} (1 - a q^k). Infinite products stop once |a| q^k < 1e-17.
cplx qpochhammer(cplx a, double q, long n);

// Sum of principal logarithms of the factors of (a;q)_n. The imaginary part is a
// valid argument (not reduced to (-pi, pi]); exp() of it recovers the product.
cplx log_qpochhammer(cplx a, double q, long n);

// Gaussian binomial [n choose m]_q.
double qbinom(long n, long m, double q);

// Z_n(q) = q^{n^2/2} / (q;q)_n and its logarithm.
double partition_Z(const ModelParams& p);
double log_partition_Z(const ModelParams& p);

// F(z) = q^{-n(n-1)/2} (q;q)_n (-z;q)_inf / z^n, evaluated in log space.
cplx log_prefactor_F(cplx z, const ModelParams& p);
cplx prefactor_F(cplx z, const ModelParams& p);

// sum_{k in Z} q^{k(k-1)/2} w^k.
cplx theta_sum(cplx w, double q);

// F_n(theta;q) = (q;q)_n/(q;q)_inf * (-sqrt(q)e^{-i pi theta};q)_n / (-sqrt(q)e^{-i pi theta};q)_inf.
cplx prefactor_F_theta(double theta, const ModelParams& p);

// sum_k q^{k^2/2} e^{i k pi theta}, the theta-function weight of the w-substituted contour.
cplx theta_weight(double theta, double q);

}  // namespace fermikit
