#pragma once

// Shared fixtures and independent brute-force oracles for the test suites.

#include <algorithm>
#include <limits>
#include <vector>

#include "rtleak/cluster.hpp"
#include "rtleak/pst.hpp"
#include "rtleak/taskmodel.hpp"

namespace testutil {

using rtleak::Mode;
using rtleak::Role;
using rtleak::Symbol;
using rtleak::SymbolSeq;
using rtleak::TaskSet;
using rtleak::TaskSpec;
using rtleak::Time;

// Three-task example: victim T=10 C={1,3}, middle T=15 C={2,3},
// observer T=30 C=2.
inline TaskSet table1() {
    TaskSet ts;
    ts.tasks = {
        {0, "victim", 10, 10, 1, 3, 1, 0.3, Role::Victim},
        {1, "middle", 15, 15, 2, 3, 2, 0.3, Role::Other},
        {2, "observer", 30, 30, 2, 2, 3, 0.0, Role::Observer},
    };
    return ts;
}

// Five-task clustering example: victim T=30 C={2,6}, observer T=100 C=12.
inline TaskSet table2() {
    TaskSet ts;
    ts.tasks = {
        {0, "victim", 30, 30, 2, 6, 1, 0.3, Role::Victim},
        {1, "t2", 70, 70, 5, 8, 2, 0.3, Role::Other},
        {2, "t1", 80, 80, 4, 6, 3, 0.3, Role::Other},
        {3, "t3", 90, 90, 15, 15, 4, 0.0, Role::Other},
        {4, "observer", 100, 100, 12, 12, 5, 0.0, Role::Observer},
    };
    return ts;
}

// The 9-symbol base pattern repeated and truncated.
inline SymbolSeq repeated_pattern(std::size_t length) {
    const SymbolSeq base{1, 2, 1, 3, 1, 2, 2, 3, 1};
    SymbolSeq out;
    out.reserve(length);
    while (out.size() < length)
        out.push_back(base[out.size() % base.size()]);
    return out;
}

// Literal sliding-window count of S in seq (start positions).
inline long oracle_count(const SymbolSeq& seq, const SymbolSeq& S) {
    if (S.empty() || S.size() > seq.size()) return 0;
    long n = 0;
    for (std::size_t i = 0; i + S.size() <= seq.size(); ++i) {
        bool match = true;
        for (std::size_t k = 0; k < S.size(); ++k)
            if (seq[i + k] != S[k]) { match = false; break; }
        if (match) ++n;
    }
    return n;
}

inline long oracle_count_followed(const SymbolSeq& seq, const SymbolSeq& S,
                                  Symbol a) {
    if (S.empty() || S.size() + 1 > seq.size()) return 0;
    long n = 0;
    for (std::size_t i = 0; i + S.size() < seq.size(); ++i) {
        bool match = true;
        for (std::size_t k = 0; k < S.size(); ++k)
            if (seq[i + k] != S[k]) { match = false; break; }
        if (match && seq[i + S.size()] == a) ++n;
    }
    return n;
}

// Global minimum WCSS over all contiguous two-way splits of the sorted data.
inline double oracle_split_wcss(std::vector<Time> values) {
    std::sort(values.begin(), values.end());
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t cut = 1; cut < values.size(); ++cut) {
        double m0 = 0, m1 = 0;
        for (std::size_t i = 0; i < cut; ++i) m0 += double(values[i]);
        for (std::size_t i = cut; i < values.size(); ++i) m1 += double(values[i]);
        m0 /= double(cut);
        m1 /= double(values.size() - cut);
        double wcss = 0;
        for (std::size_t i = 0; i < cut; ++i)
            wcss += (double(values[i]) - m0) * (double(values[i]) - m0);
        for (std::size_t i = cut; i < values.size(); ++i)
            wcss += (double(values[i]) - m1) * (double(values[i]) - m1);
        best = std::min(best, wcss);
    }
    return best;
}

}  // namespace testutil
