#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "rrunits/rational.hpp"

namespace rrunits {

/// Exact rank of an integer matrix by fraction-free (Bareiss) elimination.
/// The matrix is consumed. No floating point anywhere.
inline unsigned bareiss_rank(std::vector<std::vector<Int>> m) {
    if (m.empty()) return 0;
    const size_t rows = m.size(), cols = m[0].size();
    unsigned rank = 0;
    Int prev = 1;
    size_t row = 0;
    for (size_t col = 0; col < cols && row < rows; ++col) {
        size_t piv = row;
        while (piv < rows && m[piv][col] == 0) ++piv;
        if (piv == rows) continue;
        if (piv != row) std::swap(m[piv], m[row]);
        for (size_t i = row + 1; i < rows; ++i) {
            for (size_t j = col + 1; j < cols; ++j) {
                Int t = m[row][col] * m[i][j] - m[i][col] * m[row][j];
                mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
                m[i][j] = t;
            }
            m[i][col] = 0;
        }
        prev = m[row][col];
        ++row;
        ++rank;
    }
    return rank;
}

/// Rank of a rational matrix: each row is scaled by its denominator lcm
/// (rank-preserving), then Bareiss.
inline unsigned rational_matrix_rank(const std::vector<std::vector<Rat>>& m) {
    std::vector<std::vector<Int>> mi;
    mi.reserve(m.size());
    for (const auto& r : m) {
        Int l = 1;
        for (const Rat& x : r) l = int_lcm(l, x.get_den());
        std::vector<Int> ri;
        ri.reserve(r.size());
        for (const Rat& x : r) ri.push_back(Int(x.get_num() * (l / x.get_den())));
        mi.push_back(std::move(ri));
    }
    return bareiss_rank(std::move(mi));
}

inline unsigned int_matrix_rank(const std::vector<std::vector<long>>& m) {
    std::vector<std::vector<Int>> mi;
    mi.reserve(m.size());
    for (const auto& r : m) mi.emplace_back(r.begin(), r.end());
    return bareiss_rank(std::move(mi));
}

/// Singular values by one-sided Jacobi; used only as a floating-point
/// cross-check oracle, never for exact decisions.
inline std::vector<double> jacobi_singular_values(std::vector<std::vector<double>> a) {
    if (a.empty()) return {};
    const size_t rows = a.size(), cols = a[0].size();
    // work on columns of the rows x cols matrix
    bool rotated = true;
    for (int sweep = 0; sweep < 60 && rotated; ++sweep) {
        rotated = false;
        for (size_t p = 0; p < cols; ++p) {
            for (size_t q = p + 1; q < cols; ++q) {
                double app = 0, aqq = 0, apq = 0;
                for (size_t i = 0; i < rows; ++i) {
                    app += a[i][p] * a[i][p];
                    aqq += a[i][q] * a[i][q];
                    apq += a[i][p] * a[i][q];
                }
                if (std::abs(apq) < 1e-300) continue;
                if (apq * apq < 1e-34 * app * aqq) continue;
                double tau = (aqq - app) / (2 * apq);
                double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1 + tau * tau));
                double c = 1 / std::sqrt(1 + t * t), s = t * c;
                for (size_t i = 0; i < rows; ++i) {
                    double xp = a[i][p], xq = a[i][q];
                    a[i][p] = c * xp - s * xq;
                    a[i][q] = s * xp + c * xq;
                }
                rotated = true;
            }
        }
    }
    std::vector<double> sv(cols, 0.0);
    for (size_t j = 0; j < cols; ++j) {
        double s = 0;
        for (size_t i = 0; i < rows; ++i) s += a[i][j] * a[i][j];
        sv[j] = std::sqrt(s);
    }
    std::sort(sv.begin(), sv.end(), std::greater<double>());
    return sv;
}

inline unsigned numeric_rank(const std::vector<std::vector<double>>& a, double rel_threshold) {
    auto sv = jacobi_singular_values(a);
    if (sv.empty() || sv[0] == 0) return 0;
    unsigned r = 0;
    for (double s : sv)
        if (s > rel_threshold * sv[0]) ++r;
    return r;
}

}  // namespace rrunits
