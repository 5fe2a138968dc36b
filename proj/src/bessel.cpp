#include "isospec/bessel.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "isospec/errors.hpp"

namespace isospec {

namespace {

double series_j(int m, double x) {
    // sum_k (-1)^k (x/2)^(2k+m) / (k! (k+m)!)
    const double half = x / 2.0;
    double term = 1.0;
    for (int k = 1; k <= m; ++k) term *= half / k;
    double sum = term;
    const double q = half * half;
    for (int k = 1; k < 200; ++k) {
        term *= -q / (static_cast<double>(k) * (k + m));
        sum += term;
        if (std::abs(term) <= 1e-17 * std::abs(sum)) break;
    }
    return sum;
}

// Miller's backward recurrence normalised by J_0 + 2 sum_k J_2k = 1.
double miller_j(int m, double x) {
    const int top = std::max(m, static_cast<int>(x));
    int start = top + 20 + static_cast<int>(std::sqrt(40.0 * top));
    start += start % 2;

    double next = 0.0;  // J_{k+1}
    double cur = 1e-30; // J_k
    double norm = 0.0;
    double result = 0.0;
    for (int k = start; k >= 1; --k) {
        const double prev = 2.0 * k / x * cur - next;  // J_{k-1}
        next = cur;
        cur = prev;
        if (k - 1 == m) result = cur;
        if ((k - 1) % 2 == 0 && k - 1 > 0) norm += 2.0 * cur;
        if (std::abs(cur) > 1e250) {
            next *= 1e-250;
            cur *= 1e-250;
            norm *= 1e-250;
            result *= 1e-250;
        }
    }
    norm += cur;  // J_0
    return result / norm;
}

// First zero of the scanned function is never below this point.
double scan_start(int m, bool derivative) {
    if (m == 0) return derivative ? 1.0 : 0.5;
    return static_cast<double>(m);
}

double bisect(const std::function<double(double)>& f, double lo, double hi) {
    double flo = f(lo);
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// Consecutive zeros of J_m and J_m' are more than 1.8 apart, so a 0.5 step
// never brackets two of them at once.
constexpr double kScanStep = 0.5;

template <class Stop>
std::vector<double> scan_zeros(int m, bool derivative, Stop stop) {
    const auto f = [m, derivative](double x) {
        return derivative ? bessel_j_derivative(m, x) : bessel_j(m, x);
    };
    std::vector<double> zeros;
    double a = scan_start(m, derivative);
    double fa = f(a);
    while (true) {
        const double b = a + kScanStep;
        const double fb = f(b);
        if (fa == 0.0) {
            zeros.push_back(a);
        } else if ((fa < 0.0) != (fb < 0.0) && fb != 0.0) {
            zeros.push_back(bisect(f, a, b));
        }
        if (stop(zeros, b)) break;
        a = b;
        fa = fb;
    }
    return zeros;
}

}  // namespace

double bessel_j(int m, double x) {
    if (m < 0) throw InvalidArgument("Bessel order must be >= 0");
    if (x < 0.0) return (m % 2 == 0 ? 1.0 : -1.0) * bessel_j(m, -x);
    if (x == 0.0) return m == 0 ? 1.0 : 0.0;
    if (x <= 2.0) return series_j(m, x);
    return miller_j(m, x);
}

double bessel_j_derivative(int m, double x) {
    if (m == 0) return -bessel_j(1, x);
    if (x == 0.0) return m == 1 ? 0.5 : 0.0;
    return bessel_j(m - 1, x) - m / x * bessel_j(m, x);
}

double bessel_zero(const BesselZeroRequest& req) {
    if (req.order < 0) throw InvalidArgument("Bessel order must be >= 0");
    if (req.index < 1) throw InvalidArgument("Bessel zero index must be >= 1");
    const auto zeros = scan_zeros(req.order, req.derivative, [&](const auto& z, double) {
        return static_cast<int>(z.size()) >= req.index;
    });
    return zeros[req.index - 1];
}

std::vector<double> bessel_zeros_below(int m, double limit, bool derivative) {
    if (m < 0) throw InvalidArgument("Bessel order must be >= 0");
    if (limit <= scan_start(m, derivative)) return {};
    auto zeros = scan_zeros(m, derivative, [&](const auto&, double b) { return b > limit; });
    std::erase_if(zeros, [limit](double z) { return z > limit; });
    return zeros;
}

}  // namespace isospec
