#include "subsumm/features.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "subsumm/rng.hpp"

namespace subsumm {

double FeatureVec::norm() const {
    double s = 0.0;
    for (const auto& [i, v] : entries) s += v * v;
    return std::sqrt(s);
}

namespace {

FeatureVec from_counts(const std::map<uint32_t, double>& counts) {
    FeatureVec f;
    double sq = 0.0;
    for (const auto& [i, v] : counts) sq += v * v;
    if (sq <= 0.0) return f;
    double inv = 1.0 / std::sqrt(sq);
    f.entries.reserve(counts.size());
    for (const auto& [i, v] : counts) f.entries.emplace_back(i, v * inv);
    return f;
}

uint32_t bucket_of(const std::string& a, const std::string* b) {
    uint64_t h = fnv1a64(a);
    if (b) {
        h = fnv1a64("\x1f", 1, h);
        h = fnv1a64(b->data(), b->size(), h);
    }
    return static_cast<uint32_t>(h % kFeatureDim);
}

}  // namespace

FeatureVec featurize(const TokenSeq& tokens) {
    std::map<uint32_t, double> counts;
    for (size_t i = 0; i < tokens.size(); ++i) {
        counts[bucket_of(tokens[i], nullptr)] += 1.0;
        if (i + 1 < tokens.size()) counts[bucket_of(tokens[i], &tokens[i + 1])] += 1.0;
    }
    return from_counts(counts);
}

FeatureVec pool_features(const std::vector<FeatureVec>& per_review) {
    std::map<uint32_t, double> sum;
    for (const FeatureVec& f : per_review)
        for (const auto& [i, v] : f.entries) sum[i] += v;
    return from_counts(sum);
}

}  // namespace subsumm
