#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "subsumm/corpus.hpp"

namespace subsumm {

// Synthetic corpus generator. References are built from "key" tokens planted
// in a known subset of reviews, so the ROUGE-optimal subset, the polarity of
// every review, and the informativeness ordering are all known exactly.
struct GenConfig {
    int n_entities = 50;
    int reviews_per_entity = 40;
    int key_reviews_per_polarity = 5;   // reviews carrying the entity's key tokens
    int key_tokens_per_entity = 6;      // key tokens per entity per polarity
    int tokens_per_review = 12;
    int pool_size = 30;                 // generic tokens per polarity
    int filler_pool_size = 40;          // polarity-neutral tokens
    int key_pool_size = 24;             // global key tokens per polarity
    double pos_fraction = 0.5;
    int rating_max = 5;
    std::optional<int> fixed_rating;    // force every rating (e.g. all-5 corpora)
};

struct EntityOracle {
    std::vector<int> key_pos_ids;   // planted review ids, ascending
    std::vector<int> key_neg_ids;
    std::vector<bool> is_positive;  // ground-truth polarity per review
};

struct SyntheticResult {
    Corpus corpus;
    std::vector<EntityOracle> oracles;  // parallel to corpus.entities
};

SyntheticResult generate_synthetic(const GenConfig& cfg, uint64_t seed);

}  // namespace subsumm
