#include "subsumm/synthetic.hpp"

#include <algorithm>
#include <string>

#include "subsumm/error.hpp"
#include "subsumm/rng.hpp"

namespace subsumm {

namespace {

std::vector<std::string> make_pool(const std::string& prefix, int n) {
    std::vector<std::string> pool;
    pool.reserve(n);
    for (int i = 0; i < n; ++i) pool.push_back(prefix + std::to_string(i));
    return pool;
}

std::vector<std::string> sample_distinct(const std::vector<std::string>& pool, int k, Rng& rng) {
    std::vector<size_t> idx(pool.size());
    for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    rng.shuffle(idx);
    std::vector<std::string> out;
    for (int i = 0; i < k; ++i) out.push_back(pool[idx[i]]);
    return out;
}

void validate(const GenConfig& c) {
    if (c.n_entities < 1 || c.reviews_per_entity < 1 || c.tokens_per_review < 1 ||
        c.pool_size < 1 || c.filler_pool_size < 1 || c.key_pool_size < 1 ||
        c.key_reviews_per_polarity < 0 || c.rating_max < 2)
        throw Error("InvalidGenConfig", "all counts must be positive");
    if (c.key_tokens_per_entity > c.key_pool_size)
        throw Error("InvalidGenConfig", "key_tokens_per_entity exceeds key pool");
    if (c.key_tokens_per_entity > c.tokens_per_review)
        throw Error("InvalidGenConfig", "key tokens do not fit in a review");
    if (c.pos_fraction < 0.0 || c.pos_fraction > 1.0)
        throw Error("InvalidGenConfig", "pos_fraction outside [0,1]");
    if (c.fixed_rating && (*c.fixed_rating < 1 || *c.fixed_rating > c.rating_max))
        throw Error("InvalidGenConfig", "fixed_rating outside rating range");
}

}  // namespace

SyntheticResult generate_synthetic(const GenConfig& cfg, uint64_t seed) {
    validate(cfg);
    Rng rng(seed);

    const auto pos_pool = make_pool("pos", cfg.pool_size);
    const auto neg_pool = make_pool("neg", cfg.pool_size);
    const auto fill_pool = make_pool("fill", cfg.filler_pool_size);
    const auto key_pos_pool = make_pool("kpos", cfg.key_pool_size);
    const auto key_neg_pool = make_pool("kneg", cfg.key_pool_size);

    // Rating classes strictly above the midpoint are positive.
    std::vector<int> pos_ratings, neg_ratings;
    for (int r = 1; r <= cfg.rating_max; ++r)
        (2 * r > cfg.rating_max + 1 ? pos_ratings : neg_ratings).push_back(r);

    SyntheticResult result;
    result.corpus.rating_max = cfg.rating_max;

    for (int e = 0; e < cfg.n_entities; ++e) {
        Entity entity;
        entity.entity_id = "synth" + std::to_string(e);
        EntityOracle oracle;

        auto key_pos = sample_distinct(key_pos_pool, cfg.key_tokens_per_entity, rng);
        auto key_neg = sample_distinct(key_neg_pool, cfg.key_tokens_per_entity, rng);

        std::vector<bool> positive(cfg.reviews_per_entity);
        std::vector<int> ratings(cfg.reviews_per_entity);
        std::vector<int> pos_ids, neg_ids;
        for (int i = 0; i < cfg.reviews_per_entity; ++i) {
            int rating;
            if (cfg.fixed_rating) {
                rating = *cfg.fixed_rating;
            } else if (rng.next_double() < cfg.pos_fraction) {
                rating = pos_ratings[rng.next_below(pos_ratings.size())];
            } else {
                rating = neg_ratings[rng.next_below(neg_ratings.size())];
            }
            ratings[i] = rating;
            positive[i] = 2 * rating > cfg.rating_max + 1;
            (positive[i] ? pos_ids : neg_ids).push_back(i);
        }
        oracle.is_positive = positive;

        auto pick_keys = [&](std::vector<int>& ids) {
            rng.shuffle(ids);
            int k = std::min<int>(cfg.key_reviews_per_polarity, static_cast<int>(ids.size()));
            std::vector<int> keys(ids.begin(), ids.begin() + k);
            std::sort(keys.begin(), keys.end());
            return keys;
        };
        oracle.key_pos_ids = pick_keys(pos_ids);
        oracle.key_neg_ids = pick_keys(neg_ids);

        auto is_key = [](const std::vector<int>& keys, int id) {
            return std::binary_search(keys.begin(), keys.end(), id);
        };

        for (int i = 0; i < cfg.reviews_per_entity; ++i) {
            const auto& pool = positive[i] ? pos_pool : neg_pool;
            const auto& keys = positive[i] ? key_pos : key_neg;
            bool key_review =
                positive[i] ? is_key(oracle.key_pos_ids, i) : is_key(oracle.key_neg_ids, i);

            TokenSeq tokens;
            if (key_review) tokens = keys;
            while (static_cast<int>(tokens.size()) < cfg.tokens_per_review) {
                if (rng.next_double() < 0.7)
                    tokens.push_back(pool[rng.next_below(pool.size())]);
                else
                    tokens.push_back(fill_pool[rng.next_below(fill_pool.size())]);
            }

            Review rev;
            rev.id = i;
            rev.rating = ratings[i];
            for (size_t t = 0; t < tokens.size(); ++t) {
                if (t) rev.text.push_back(' ');
                rev.text += tokens[t];
            }
            rev.tokens = std::move(tokens);
            entity.reviews.push_back(std::move(rev));
        }

        auto make_summary = [&](const std::vector<std::string>& keys,
                                const std::vector<std::string>& pool) {
            TokenSeq s = keys;
            for (int i = 0; i < cfg.key_tokens_per_entity; ++i)
                s.push_back(pool[rng.next_below(pool.size())]);
            return s;
        };
        entity.summaries[Perspective::Pros] = make_summary(key_pos, pos_pool);
        entity.summaries[Perspective::Cons] = make_summary(key_neg, neg_pool);
        TokenSeq verdict;
        int half = (cfg.key_tokens_per_entity + 1) / 2;
        verdict.insert(verdict.end(), key_pos.begin(), key_pos.begin() + half);
        verdict.insert(verdict.end(), key_neg.begin(), key_neg.begin() + half);
        for (int i = 0; i < half; ++i) {
            verdict.push_back(pos_pool[rng.next_below(pos_pool.size())]);
            verdict.push_back(neg_pool[rng.next_below(neg_pool.size())]);
        }
        entity.summaries[Perspective::Verdict] = verdict;

        for (Perspective p : kAllPerspectives) {
            auto& s = entity.summaries[p];
            std::string text;
            for (size_t t = 0; t < s.size(); ++t) {
                if (t) text.push_back(' ');
                text += s[t];
            }
            s = tokenize(text);  // canonical form, identical round-trip
        }

        result.corpus.entities.push_back(std::move(entity));
        result.oracles.push_back(std::move(oracle));
    }
    return result;
}

}  // namespace subsumm
