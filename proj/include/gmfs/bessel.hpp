#pragma once

#include <vector>

namespace gmfs {

/// Bessel function of the first kind J_n(x) for integer order n >= 0 and
/// x >= 0. Power series for small arguments, Miller backward recurrence
/// (normalised by J_0 + 2 sum J_2k = 1) otherwise.
double bessel_j(int n, double x);

/// Ascending positive zeros of J_n.
struct BesselRootTable {
    int order = 0;
    std::vector<double> roots;
};

/// First `count` positive zeros of J_n. Each zero is bracketed around its
/// McMahon estimate (falling back to a scan from the previous zero) and
/// refined by bisection. Throws InternalError if a zero cannot be bracketed.
BesselRootTable bessel_roots(int n, int count);

}  // namespace gmfs
