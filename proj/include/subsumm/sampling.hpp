#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "subsumm/corpus.hpp"
#include "subsumm/sentiment.hpp"

namespace subsumm {

struct Quota {
    int k_pos = 0;
    int k_neg = 0;
};

struct Subset {
    std::vector<int> review_ids;  // selection order, unique
    std::string strategy;
    uint64_t seed = 0;
};

// (K+, K-) per perspective: Pros -> (K, 0), Cons -> (0, K), Verdict split
// proportionally with round-half-up on the positive share. Quotas exceeding
// availability are clamped and the deficit reallocated to the other polarity,
// so k_pos + k_neg = min(K, n_pos + n_neg).
Quota compute_quota(Perspective perspective, int k, int n_pos, int n_neg);

Subset sample_random(const Entity& entity, int k, uint64_t seed);

Subset sample_sentiment_random(const Entity& entity, const std::vector<Polarity>& tags,
                               const Quota& quota, uint64_t seed);

// Deterministic: top-Corr per polarity, ties by ascending id; positives first.
Subset select_sentiment_info(const Entity& entity, const std::vector<Polarity>& tags,
                             const std::vector<double>& corr, const Quota& quota);

// Softmax(Corr) within each polarity pool, sampled without replacement by
// iterative draw-and-renormalize.
Subset sample_sentiment_info_weighted(const Entity& entity, const std::vector<Polarity>& tags,
                                      const std::vector<double>& corr, const Quota& quota,
                                      uint64_t seed);

std::string subset_to_json(const std::string& entity_id, const Subset& subset);

}  // namespace subsumm
