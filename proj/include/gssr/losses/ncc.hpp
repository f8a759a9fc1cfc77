#pragma once

#include <cstddef>

namespace gssr {

/// Normalized cross-correlation of two equal-length scalar patches:
/// Σ(a−ā)(b−b̄) / sqrt(Σ(a−ā)²·Σ(b−b̄)² + 1e-8). The ε keeps constant
/// patches finite (they score ≈ 0) and bounds the result within
/// [−1−1e-6, 1+1e-6].
double ncc(const double* a, const double* b, size_t n);

/// ncc plus its derivative with respect to patch b (written, not
/// accumulated, into db).
double ncc_grad(const double* a, const double* b, size_t n, double* db);

}  // namespace gssr
