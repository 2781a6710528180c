#include "subsumm/rouge.hpp"

#include <algorithm>

namespace subsumm {

namespace {

PRF make_prf(double overlap, double cand_total, double ref_total) {
    PRF p;
    p.precision = cand_total > 0 ? overlap / cand_total : 0.0;
    p.recall = ref_total > 0 ? overlap / ref_total : 0.0;
    double pr = p.precision + p.recall;
    p.f1 = pr > 0 ? 2.0 * p.precision * p.recall / pr : 0.0;
    return p;
}

}  // namespace

std::unordered_map<std::string, int> ngram_counts(TokenView tokens, int n) {
    std::unordered_map<std::string, int> counts;
    if (n < 1 || tokens.size() < static_cast<size_t>(n)) return counts;
    for (size_t i = 0; i + n <= tokens.size(); ++i) {
        std::string key = tokens[i];
        for (int j = 1; j < n; ++j) {
            key.push_back('\x1f');
            key += tokens[i + j];
        }
        ++counts[key];
    }
    return counts;
}

PRF rouge_n(TokenView candidate, TokenView reference, int n) {
    auto cand = ngram_counts(candidate, n);
    auto ref = ngram_counts(reference, n);
    long overlap = 0, cand_total = 0, ref_total = 0;
    for (const auto& [g, c] : cand) {
        cand_total += c;
        auto it = ref.find(g);
        if (it != ref.end()) overlap += std::min(c, it->second);
    }
    for (const auto& [g, c] : ref) ref_total += c;
    return make_prf(static_cast<double>(overlap), static_cast<double>(cand_total),
                    static_cast<double>(ref_total));
}

size_t lcs_length(TokenView a, TokenView b) {
    if (a.empty() || b.empty()) return 0;
    // two-row DP
    std::vector<size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
    for (size_t i = 1; i <= a.size(); ++i) {
        for (size_t j = 1; j <= b.size(); ++j) {
            if (a[i - 1] == b[j - 1])
                cur[j] = prev[j - 1] + 1;
            else
                cur[j] = std::max(prev[j], cur[j - 1]);
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

PRF rouge_l(TokenView candidate, TokenView reference) {
    double l = static_cast<double>(lcs_length(candidate, reference));
    return make_prf(l, static_cast<double>(candidate.size()), static_cast<double>(reference.size()));
}

RougeScore rouge_all(TokenView candidate, TokenView reference) {
    RougeScore s;
    s.r1 = rouge_n(candidate, reference, 1);
    s.r2 = rouge_n(candidate, reference, 2);
    s.rl = rouge_l(candidate, reference);
    return s;
}

double rouge_mean(TokenView candidate, TokenView reference) {
    RougeScore s = rouge_all(candidate, reference);
    return (s.r1.f1 + s.r2.f1 + s.rl.f1) / 3.0;
}

}  // namespace subsumm
