#pragma once

// Independent brute-force oracles used by the unit and acceptance suites.
// Nothing here may call into the implementation paths it checks.

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace oracles {

// LCS by exhaustive subsequence enumeration of the shorter sequence.
// Only valid for lengths <= ~20.
inline size_t brute_lcs(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    const auto& s = a.size() <= b.size() ? a : b;
    const auto& t = a.size() <= b.size() ? b : a;
    size_t best = 0;
    for (uint32_t mask = 0; mask < (1u << s.size()); ++mask) {
        std::vector<std::string> sub;
        for (size_t i = 0; i < s.size(); ++i)
            if (mask & (1u << i)) sub.push_back(s[i]);
        if (sub.size() <= best) continue;
        // is sub a subsequence of t?
        size_t j = 0;
        for (size_t i = 0; i < t.size() && j < sub.size(); ++i)
            if (t[i] == sub[j]) ++j;
        if (j == sub.size()) best = sub.size();
    }
    return best;
}

// Quadratic-scan n-gram overlap count (sum of min multiplicities).
inline long brute_ngram_overlap(const std::vector<std::string>& cand,
                                const std::vector<std::string>& ref, int n) {
    auto grams = [&](const std::vector<std::string>& v) {
        std::map<std::vector<std::string>, long> m;
        for (size_t i = 0; i + n <= v.size(); ++i)
            ++m[std::vector<std::string>(v.begin() + i, v.begin() + i + n)];
        return m;
    };
    auto gc = grams(cand), gr = grams(ref);
    long overlap = 0;
    for (const auto& [g, c] : gc) {
        auto it = gr.find(g);
        if (it != gr.end()) overlap += std::min(c, it->second);
    }
    return overlap;
}

// Central finite difference of a scalar function of one parameter vector
// entry; the parameter is restored afterwards.
template <typename LossFn>
double central_diff(std::vector<double>& param, size_t index, LossFn loss, double step = 1e-5) {
    double saved = param[index];
    param[index] = saved + step;
    double up = loss();
    param[index] = saved - step;
    double down = loss();
    param[index] = saved;
    return (up - down) / (2.0 * step);
}

inline bool grad_close(double analytic, double numeric, double rel_tol = 1e-4) {
    double denom = std::max(std::abs(analytic) + std::abs(numeric), 1e-8);
    return std::abs(analytic - numeric) / denom <= rel_tol;
}

// One-sided paired t statistic for mean(d) > 0; normal approximation is fine
// at the sample sizes used here.
inline double paired_t(const std::vector<double>& d) {
    const double n = static_cast<double>(d.size());
    double mean = 0.0;
    for (double v : d) mean += v;
    mean /= n;
    double var = 0.0;
    for (double v : d) var += (v - mean) * (v - mean);
    var /= (n - 1);
    if (var <= 0.0) return mean > 0 ? 1e9 : 0.0;
    return mean / std::sqrt(var / n);
}

}  // namespace oracles
