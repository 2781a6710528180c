#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

namespace subsumm {

inline void softmax_inplace(std::vector<double>& logits) {
    double mx = *std::max_element(logits.begin(), logits.end());
    double sum = 0.0;
    for (double& v : logits) {
        v = std::exp(v - mx);
        sum += v;
    }
    for (double& v : logits) v /= sum;
}

inline int argmax_lowest(const std::vector<double>& v) {
    int best = 0;
    for (int i = 1; i < static_cast<int>(v.size()); ++i)
        if (v[i] > v[best]) best = i;
    return best;
}

// Global-norm gradient clipping over a set of parameter blocks.
inline void clip_global_norm(std::vector<std::vector<double>*> blocks, double max_norm) {
    double sq = 0.0;
    for (auto* b : blocks)
        for (double v : *b) sq += v * v;
    double norm = std::sqrt(sq);
    if (norm <= max_norm || norm == 0.0) return;
    double scale = max_norm / norm;
    for (auto* b : blocks)
        for (double& v : *b) v *= scale;
}

}  // namespace subsumm
