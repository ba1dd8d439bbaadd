#pragma once

#include <stdexcept>
#include <vector>

namespace adomian {

/// Integer partition of n stored as multiplicities: mult[j-1] copies of part j,
/// so sum over j of j*mult[j-1] == n. order() counts the parts.
struct Partition {
    std::vector<int> mult; // size n; empty for n == 0

    int n() const {
        int s = 0;
        for (std::size_t j = 0; j < mult.size(); ++j) s += int(j + 1) * mult[j];
        return s;
    }
    int order() const {
        int s = 0;
        for (int m : mult) s += m;
        return s;
    }
};

/// Ordered tuple of m nonnegative parts summing to n.
struct WeakComposition {
    std::vector<int> parts;

    int n() const {
        int s = 0;
        for (int p : parts) s += p;
        return s;
    }
};

namespace detail {
inline void partitions_rec(int remaining, int max_part, int n,
                           std::vector<int>& mult, std::vector<Partition>& out) {
    if (remaining == 0) {
        out.push_back(Partition{mult});
        return;
    }
    for (int part = std::min(max_part, remaining); part >= 1; --part) {
        ++mult[part - 1];
        partitions_rec(remaining - part, part, n, mult, out);
        --mult[part - 1];
    }
}
} // namespace detail

/// All partitions of n, largest-part-descending order. p(n) entries.
inline std::vector<Partition> enumerate_partitions(int n) {
    if (n < 0) throw std::invalid_argument("enumerate_partitions: n < 0");
    std::vector<Partition> out;
    if (n == 0) {
        out.push_back(Partition{{}});
        return out;
    }
    std::vector<int> mult(n, 0);
    detail::partitions_rec(n, n, n, mult, out);
    return out;
}

/// All weak compositions of n into m parts, lexicographically ascending.
/// Count is C(n+m-1, m-1).
inline std::vector<WeakComposition> enumerate_weak_compositions(int n, int m) {
    if (n < 0) throw std::invalid_argument("enumerate_weak_compositions: n < 0");
    if (m < 1) throw std::invalid_argument("enumerate_weak_compositions: m < 1");
    std::vector<WeakComposition> out;
    std::vector<int> parts(m, 0);
    // odometer over the first m-1 parts; the last part absorbs the remainder
    std::vector<int> idx(m - 1, 0);
    while (true) {
        int used = 0;
        bool ok = true;
        for (int j = 0; j < m - 1; ++j) {
            used += idx[j];
            if (used > n) { ok = false; break; }
        }
        if (ok) {
            for (int j = 0; j < m - 1; ++j) parts[j] = idx[j];
            parts[m - 1] = n - used;
            out.push_back(WeakComposition{parts});
        }
        int j = m - 2;
        while (j >= 0) {
            if (idx[j] < n) { ++idx[j]; break; }
            idx[j] = 0;
            --j;
        }
        if (j < 0) break;
    }
    return out;
}

} // namespace adomian
