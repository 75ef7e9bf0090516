#pragma once

namespace qmspec {

/// Hermite polynomial H_n(x) by the three-term recurrence
/// H_0 = 1, H_1 = 2x, H_{n+1} = 2x H_n - 2n H_{n-1}.
double hermite(int n, double x);

/// Generalized Laguerre polynomial L_n^{(alpha)}(x), alpha > -1.
double laguerre(int n, double alpha, double x);

}  // namespace qmspec
