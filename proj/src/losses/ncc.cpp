#include "gssr/losses/ncc.hpp"

#include <cmath>

namespace gssr {

namespace {

constexpr double kEps = 1e-8;

struct Moments {
    double mean_a = 0, mean_b = 0, s_aa = 0, s_bb = 0, s_ab = 0;
};

Moments moments(const double* a, const double* b, size_t n) {
    Moments m;
    for (size_t i = 0; i < n; ++i) {
        m.mean_a += a[i];
        m.mean_b += b[i];
    }
    m.mean_a /= double(n);
    m.mean_b /= double(n);
    for (size_t i = 0; i < n; ++i) {
        const double da = a[i] - m.mean_a;
        const double db = b[i] - m.mean_b;
        m.s_aa += da * da;
        m.s_bb += db * db;
        m.s_ab += da * db;
    }
    return m;
}

}  // namespace

double ncc(const double* a, const double* b, size_t n) {
    const Moments m = moments(a, b, n);
    return m.s_ab / std::sqrt(m.s_aa * m.s_bb + kEps);
}

double ncc_grad(const double* a, const double* b, size_t n, double* db) {
    const Moments m = moments(a, b, n);
    const double denom = std::sqrt(m.s_aa * m.s_bb + kEps);
    const double value = m.s_ab / denom;
    // d/db_j: S_ab picks up (a_j − ā) (b̄ shifts cancel against centered a),
    // S_bb picks up 2(b_j − b̄).
    const double c1 = 1.0 / denom;
    const double c2 = value * m.s_aa / (denom * denom);
    for (size_t i = 0; i < n; ++i) db[i] = c1 * (a[i] - m.mean_a) - c2 * (b[i] - m.mean_b);
    return value;
}

}  // namespace gssr
