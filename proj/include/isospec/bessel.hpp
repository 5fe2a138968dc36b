#pragma once

#include <vector>

namespace isospec {

/// Bessel function of the first kind J_m(x) for integer m >= 0, x >= 0.
double bessel_j(int m, double x);

/// J_m'(x).
double bessel_j_derivative(int m, double x);

struct BesselZeroRequest {
    int order = 0;           // m >= 0
    int index = 1;           // p >= 1
    bool derivative = false; // zeros of J_m' instead of J_m
};

/// The p-th positive zero of J_m (or J_m'), absolute error below 1e-12.
/// Throws InvalidArgument for m < 0 or p < 1.
double bessel_zero(const BesselZeroRequest& req);

/// All positive zeros of J_m (or J_m') not exceeding `limit`, ascending.
std::vector<double> bessel_zeros_below(int m, double limit, bool derivative);

}  // namespace isospec
