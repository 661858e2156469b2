#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace rtleak {

/// A symbol is an integer observer response time.
using Symbol = std::int64_t;
using SymbolSeq = std::vector<Symbol>;

/// Payload of one suffix node. `suffix` holds the context with the most
/// recent symbol last; the empty suffix is the root.
struct PstNode {
    SymbolSeq suffix;
    long count = 0;                           // N(S)
    std::map<Symbol, long> successor_counts;  // N(S a)
    std::map<Symbol, double> successor_probs; // P(a|S), only entries > p_min
};

/// Variable-order suffix model over response-time symbols. Nodes are kept
/// in a context-keyed map; the parent of a suffix is the suffix minus its
/// oldest symbol.
struct Pst {
    std::map<SymbolSeq, PstNode> nodes;  // includes the root (empty suffix)
    int max_depth = 3;
    double p_min = 0.001;
    std::set<Symbol> alphabet;
    long training_length = 0;

    const PstNode& root() const { return nodes.at(SymbolSeq{}); }
    const PstNode* find(const SymbolSeq& suffix) const;
};

/// Overlapping occurrences of S in seq.
long count_suffix(std::span<const Symbol> seq, std::span<const Symbol> S);

/// Occurrences of S immediately followed by a.
long count_followed(std::span<const Symbol> seq, std::span<const Symbol> S,
                    Symbol a);

/// N(S a) / N(S); throws when S never occurs.
double cond_prob(std::span<const Symbol> seq, std::span<const Symbol> S,
                 Symbol a);

/// Single-pass construction; node contents match the brute-force counts.
Pst build_pst(std::span<const Symbol> seq, int max_depth, double p_min);

/// Longest-matching-suffix prediction with back-off toward the root.
/// Ties pick the smallest symbol; unknown symbols in `recent` are ignored.
Symbol predict(const Pst& pst, std::span<const Symbol> recent);

std::string pst_to_json_string(const Pst& pst);
Pst pst_from_json_string(const std::string& text);

}  // namespace rtleak
