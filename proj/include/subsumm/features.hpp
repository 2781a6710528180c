#pragma once

#include <cstdint>
#include <vector>

#include "subsumm/corpus.hpp"

namespace subsumm {

constexpr int kFeatureDim = 1 << 15;

// Sparse L2-normalized bag of hashed unigram + bigram term frequencies.
struct FeatureVec {
    std::vector<std::pair<uint32_t, double>> entries;  // sorted by index, values > 0

    double dot_dense(const double* row) const {
        double s = 0.0;
        for (const auto& [i, v] : entries) s += row[i] * v;
        return s;
    }

    // dst[i] += scale * value[i] for every stored entry
    void axpy_dense(double scale, double* dst) const {
        for (const auto& [i, v] : entries) dst[i] += scale * v;
    }

    double norm() const;
};

// Hash: 64-bit FNV-1a over the n-gram's token bytes with '\x1f' separators,
// bucket = hash mod 2^15. Empty input yields the zero vector.
FeatureVec featurize(const TokenSeq& tokens);

// Direction of the sum of per-review feature vectors (L2-normalized).
// Invariant under review permutation and duplication.
FeatureVec pool_features(const std::vector<FeatureVec>& per_review);

}  // namespace subsumm
