#pragma once

#include <functional>
#include <vector>

#include "rrunits/rational.hpp"

namespace rrunits {

/// Partition = weakly decreasing list of positive parts.
using Partition = std::vector<unsigned>;

inline unsigned partition_size(const Partition& p) {
    unsigned s = 0;
    for (unsigned x : p) s += x;
    return s;
}

/// n(lambda) = sum (i-1) lambda_i
inline unsigned partition_n(const Partition& p) {
    unsigned s = 0;
    for (size_t i = 0; i < p.size(); ++i) s += static_cast<unsigned>(i) * p[i];
    return s;
}

inline bool is_partition(const Partition& p) {
    for (size_t i = 0; i < p.size(); ++i) {
        if (p[i] == 0) return false;
        if (i + 1 < p.size() && p[i] < p[i + 1]) return false;
    }
    return true;
}

/// multiplicity of the part i in lambda
inline unsigned multiplicity(const Partition& p, unsigned part) {
    unsigned c = 0;
    for (unsigned x : p) c += (x == part);
    return c;
}

inline Partition doubled(const Partition& p) {
    Partition d = p;
    for (unsigned& x : d) x *= 2;
    return d;
}

/// All partitions with parts <= max_part and |lambda| <= max_size,
/// in increasing order of size.
inline std::vector<Partition> partitions_up_to(unsigned max_part, unsigned max_size) {
    std::vector<Partition> out;
    Partition cur;
    std::function<void(unsigned, unsigned)> rec = [&](unsigned largest, unsigned remaining) {
        out.push_back(cur);
        for (unsigned part = std::min(largest, remaining); part >= 1; --part) {
            cur.push_back(part);
            rec(part, remaining - part);
            cur.pop_back();
        }
    };
    rec(max_part, max_size);
    std::sort(out.begin(), out.end(), [](const Partition& a, const Partition& b) {
        unsigned sa = partition_size(a), sb = partition_size(b);
        return sa != sb ? sa < sb : a < b;
    });
    return out;
}

/// Visits every mu such that lambda/mu is a horizontal strip
/// (lambda_1 >= mu_1 >= lambda_2 >= mu_2 >= ...).
inline void for_each_strip_predecessor(const Partition& lam,
                                       const std::function<void(const Partition&)>& fn) {
    size_t len = lam.size();
    Partition mu(len);
    std::function<void(size_t)> rec = [&](size_t i) {
        if (i == len) {
            Partition trimmed;
            for (unsigned x : mu)
                if (x > 0) trimmed.push_back(x);
            fn(trimmed);
            return;
        }
        unsigned lo = i + 1 < len ? lam[i + 1] : 0;
        for (unsigned v = lo; v <= lam[i]; ++v) {
            mu[i] = v;
            rec(i + 1);
        }
    };
    if (len == 0)
        fn(Partition{});
    else
        rec(0);
}

/// The exponents m_i(mu) of the branching factor
/// psi_{lambda/mu}(t) = prod_{i : m_i(mu) = m_i(lambda) + 1} (1 - t^{m_i(mu)}).
inline std::vector<unsigned> psi_strip_exponents(const Partition& lam, const Partition& mu) {
    std::vector<unsigned> out;
    unsigned top = lam.empty() ? 0 : lam[0];
    for (unsigned i = 1; i <= top; ++i) {
        unsigned mi_mu = multiplicity(mu, i);
        if (mi_mu == multiplicity(lam, i) + 1) out.push_back(mi_mu);
    }
    return out;
}

}  // namespace rrunits
