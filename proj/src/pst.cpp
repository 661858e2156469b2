#include "rtleak/pst.hpp"

#include <algorithm>
#include <stdexcept>

#include "json.hpp"

namespace rtleak {

const PstNode* Pst::find(const SymbolSeq& suffix) const {
    auto it = nodes.find(suffix);
    return it == nodes.end() ? nullptr : &it->second;
}

long count_suffix(std::span<const Symbol> seq, std::span<const Symbol> S) {
    if (S.empty()) throw std::invalid_argument("count_suffix: empty suffix");
    if (S.size() > seq.size()) return 0;
    long n = 0;
    for (std::size_t i = 0; i + S.size() <= seq.size(); ++i)
        if (std::equal(S.begin(), S.end(), seq.begin() + i)) ++n;
    return n;
}

long count_followed(std::span<const Symbol> seq, std::span<const Symbol> S,
                    Symbol a) {
    if (S.empty()) throw std::invalid_argument("count_followed: empty suffix");
    if (S.size() + 1 > seq.size()) return 0;
    long n = 0;
    for (std::size_t i = 0; i + S.size() < seq.size(); ++i)
        if (seq[i + S.size()] == a &&
            std::equal(S.begin(), S.end(), seq.begin() + i))
            ++n;
    return n;
}

double cond_prob(std::span<const Symbol> seq, std::span<const Symbol> S,
                 Symbol a) {
    long ns = count_suffix(seq, S);
    if (ns == 0) throw std::invalid_argument("cond_prob: suffix never occurs");
    return double(count_followed(seq, S, a)) / double(ns);
}

Pst build_pst(std::span<const Symbol> seq, int max_depth, double p_min) {
    if (seq.size() < 2)
        throw std::invalid_argument("build_pst: need at least two symbols");
    if (max_depth < 1) throw std::invalid_argument("build_pst: depth >= 1");
    if (p_min < 0.0 || p_min >= 1.0)
        throw std::invalid_argument("build_pst: p_min in [0,1)");

    const long sigma = long(seq.size());

    // One pass over end positions: every context of length 1..L ending at i
    // contributes to N(S), and to N(S a) when a successor exists.
    std::map<SymbolSeq, PstNode> raw;
    for (long i = 0; i < sigma; ++i) {
        for (int l = 1; l <= max_depth && l <= i + 1; ++l) {
            SymbolSeq ctx(seq.begin() + (i - l + 1), seq.begin() + i + 1);
            PstNode& node = raw[ctx];
            ++node.count;
            if (i + 1 < sigma) ++node.successor_counts[seq[i + 1]];
        }
    }

    Pst pst;
    pst.max_depth = max_depth;
    pst.p_min = p_min;
    pst.training_length = sigma;
    for (Symbol s : seq) pst.alphabet.insert(s);

    PstNode root;
    root.count = sigma;
    for (long i = 0; i < sigma; ++i) ++root.successor_counts[seq[i]];
    raw[SymbolSeq{}] = std::move(root);

    for (auto& [ctx, node] : raw) {
        node.suffix = ctx;
        bool keep = ctx.empty();
        for (const auto& [a, n] : node.successor_counts) {
            double p = double(n) / double(node.count);
            if (p > p_min) {
                node.successor_probs[a] = p;
                keep = true;
            }
        }
        // Only successors above threshold stay on the node.
        std::erase_if(node.successor_counts, [&](const auto& kv) {
            return !node.successor_probs.count(kv.first);
        });
        if (keep) pst.nodes.emplace(ctx, std::move(node));
    }
    return pst;
}

Symbol predict(const Pst& pst, std::span<const Symbol> recent) {
    SymbolSeq window;
    for (Symbol s : recent)
        if (pst.alphabet.count(s)) window.push_back(s);

    auto argmax = [](const PstNode& node) {
        Symbol best = 0;
        double best_p = -1.0;
        for (const auto& [a, p] : node.successor_probs)
            if (p > best_p) {  // map order gives smallest symbol on ties
                best = a;
                best_p = p;
            }
        return best;
    };

    int max_len = std::min<int>(pst.max_depth, int(window.size()));
    for (int l = max_len; l >= 1; --l) {
        SymbolSeq ctx(window.end() - l, window.end());
        const PstNode* node = pst.find(ctx);
        if (node && !node->successor_probs.empty()) return argmax(*node);
    }
    const PstNode& root = pst.root();
    if (root.successor_probs.empty())
        throw std::runtime_error("predict: degenerate model");
    return argmax(root);
}

std::string pst_to_json_string(const Pst& pst) {
    nlohmann::json j;
    j["max_depth"] = pst.max_depth;
    j["p_min"] = pst.p_min;
    j["training_length"] = pst.training_length;
    j["alphabet"] = std::vector<Symbol>(pst.alphabet.begin(), pst.alphabet.end());
    j["nodes"] = nlohmann::json::array();
    for (const auto& [ctx, node] : pst.nodes) {
        nlohmann::json nj;
        nj["suffix"] = node.suffix;
        nj["count"] = node.count;
        nlohmann::json succ = nlohmann::json::object();
        for (const auto& [a, p] : node.successor_probs)
            succ[std::to_string(a)] = p;
        nj["successors"] = succ;
        nlohmann::json counts = nlohmann::json::object();
        for (const auto& [a, n] : node.successor_counts)
            counts[std::to_string(a)] = n;
        nj["successor_counts"] = counts;
        j["nodes"].push_back(nj);
    }
    return j.dump(2) + "\n";
}

Pst pst_from_json_string(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    Pst pst;
    pst.max_depth = j.at("max_depth").get<int>();
    pst.p_min = j.at("p_min").get<double>();
    pst.training_length = j.at("training_length").get<long>();
    for (const auto& s : j.at("alphabet")) pst.alphabet.insert(s.get<Symbol>());
    for (const auto& nj : j.at("nodes")) {
        PstNode node;
        node.suffix = nj.at("suffix").get<SymbolSeq>();
        node.count = nj.at("count").get<long>();
        for (auto it = nj.at("successors").begin(); it != nj.at("successors").end(); ++it)
            node.successor_probs[std::stoll(it.key())] = it.value().get<double>();
        for (auto it = nj.at("successor_counts").begin();
             it != nj.at("successor_counts").end(); ++it)
            node.successor_counts[std::stoll(it.key())] = it.value().get<long>();
        pst.nodes.emplace(node.suffix, std::move(node));
    }
    return pst;
}

}  // namespace rtleak
