#include "qmspec/special.hpp"

#include "qmspec/errors.hpp"

namespace qmspec {

double hermite(int n, double x) {
    if (n < 0) throw validation_error("hermite: n must be non-negative");
    if (n == 0) return 1.0;
    double hm = 1.0;        // H_0
    double h = 2.0 * x;     // H_1
    for (int k = 1; k < n; ++k) {
        const double hp = 2.0 * x * h - 2.0 * k * hm;
        hm = h;
        h = hp;
    }
    return h;
}

double laguerre(int n, double alpha, double x) {
    if (n < 0) throw validation_error("laguerre: n must be non-negative");
    if (alpha <= -1.0) throw validation_error("laguerre: alpha must exceed -1");
    if (n == 0) return 1.0;
    double lm = 1.0;             // L_0
    double l = 1.0 + alpha - x;  // L_1
    for (int k = 2; k <= n; ++k) {
        const double lp = ((2.0 * k - 1.0 + alpha - x) * l - (k - 1.0 + alpha) * lm) / k;
        lm = l;
        l = lp;
    }
    return l;
}

}  // namespace qmspec
