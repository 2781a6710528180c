#include "subsumm/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "json.hpp"
#include "subsumm/error.hpp"
#include "subsumm/rng.hpp"

namespace subsumm {

Quota compute_quota(Perspective perspective, int k, int n_pos, int n_neg) {
    if (k < 1) throw Error("InvalidK", "K must be >= 1");
    if (n_pos + n_neg < 1) return {0, 0};  // min(K, N) = 0
    Quota q;
    switch (perspective) {
        case Perspective::Pros: q = {k, 0}; break;
        case Perspective::Cons: q = {0, k}; break;
        case Perspective::Verdict: {
            // round half up on the positive share, remainder to negative
            q.k_pos = static_cast<int>(
                std::floor(static_cast<double>(k) * n_pos / (n_pos + n_neg) + 0.5));
            q.k_neg = k - q.k_pos;
            break;
        }
    }
    // clamp to availability and reallocate the deficit
    int total = std::min(k, n_pos + n_neg);
    q.k_pos = std::min(q.k_pos, n_pos);
    q.k_neg = std::min(q.k_neg, n_neg);
    if (q.k_pos + q.k_neg < total) {
        int deficit = total - q.k_pos - q.k_neg;
        int add_pos = std::min(deficit, n_pos - q.k_pos);
        q.k_pos += add_pos;
        q.k_neg += std::min(deficit - add_pos, n_neg - q.k_neg);
    }
    return q;
}

namespace {

std::vector<int> draw_uniform(const std::vector<int>& pool, int k, Rng& rng) {
    std::vector<int> ids = pool;
    rng.shuffle(ids);
    ids.resize(std::min<size_t>(ids.size(), k));
    return ids;
}

void split_pools(const std::vector<Polarity>& tags, std::vector<int>& pos, std::vector<int>& neg) {
    for (size_t i = 0; i < tags.size(); ++i)
        (tags[i] == Polarity::Positive ? pos : neg).push_back(static_cast<int>(i));
}

}  // namespace

Subset sample_random(const Entity& entity, int k, uint64_t seed) {
    std::vector<int> ids(entity.reviews.size());
    std::iota(ids.begin(), ids.end(), 0);
    Rng rng(seed);
    rng.shuffle(ids);
    ids.resize(std::min<size_t>(ids.size(), k));
    return {std::move(ids), "random", seed};
}

Subset sample_sentiment_random(const Entity& entity, const std::vector<Polarity>& tags,
                               const Quota& quota, uint64_t seed) {
    std::vector<int> pos, neg;
    split_pools(tags, pos, neg);
    if (quota.k_pos > static_cast<int>(pos.size()) || quota.k_neg > static_cast<int>(neg.size()))
        throw Error("QuotaInfeasible", "quota exceeds pool for entity " + entity.entity_id);
    Rng rng(seed);
    std::vector<int> ids = draw_uniform(pos, quota.k_pos, rng);
    std::vector<int> neg_ids = draw_uniform(neg, quota.k_neg, rng);
    ids.insert(ids.end(), neg_ids.begin(), neg_ids.end());
    return {std::move(ids), "sentiment-random", seed};
}

Subset select_sentiment_info(const Entity& entity, const std::vector<Polarity>& tags,
                             const std::vector<double>& corr, const Quota& quota) {
    if (corr.size() != entity.reviews.size())
        throw Error("LengthMismatch", "corr length != review count");
    std::vector<int> pos, neg;
    split_pools(tags, pos, neg);
    auto top = [&](std::vector<int>& pool, int k) {
        std::sort(pool.begin(), pool.end(), [&](int a, int b) {
            if (corr[a] != corr[b]) return corr[a] > corr[b];
            return a < b;
        });
        pool.resize(std::min<size_t>(pool.size(), k));
    };
    top(pos, quota.k_pos);
    top(neg, quota.k_neg);
    std::vector<int> ids = pos;
    ids.insert(ids.end(), neg.begin(), neg.end());
    return {std::move(ids), "sentiment-info", 0};
}

Subset sample_sentiment_info_weighted(const Entity& entity, const std::vector<Polarity>& tags,
                                      const std::vector<double>& corr, const Quota& quota,
                                      uint64_t seed) {
    if (corr.size() != entity.reviews.size())
        throw Error("LengthMismatch", "corr length != review count");
    std::vector<int> pos, neg;
    split_pools(tags, pos, neg);
    Rng rng(seed);
    auto weighted_draw = [&](std::vector<int>& pool, int k) {
        std::vector<int> picked;
        if (pool.empty() || k <= 0) return picked;
        double mx = corr[pool[0]];
        for (int id : pool) mx = std::max(mx, corr[id]);
        std::vector<double> w(pool.size());
        for (size_t i = 0; i < pool.size(); ++i) w[i] = std::exp(corr[pool[i]] - mx);
        for (int n = 0; n < k && !pool.empty(); ++n) {
            double total = std::accumulate(w.begin(), w.end(), 0.0);
            double u = rng.next_double() * total;
            size_t pick = pool.size() - 1;
            double acc = 0.0;
            for (size_t i = 0; i < pool.size(); ++i) {
                acc += w[i];
                if (u < acc) {
                    pick = i;
                    break;
                }
            }
            picked.push_back(pool[pick]);
            pool.erase(pool.begin() + pick);
            w.erase(w.begin() + pick);
        }
        return picked;
    };
    std::vector<int> ids = weighted_draw(pos, quota.k_pos);
    std::vector<int> neg_ids = weighted_draw(neg, quota.k_neg);
    ids.insert(ids.end(), neg_ids.begin(), neg_ids.end());
    return {std::move(ids), "sentiment-info-weighted", seed};
}

std::string subset_to_json(const std::string& entity_id, const Subset& subset) {
    return nlohmann::json{{"entity_id", entity_id},
                          {"strategy", subset.strategy},
                          {"seed", subset.seed},
                          {"review_ids", subset.review_ids}}
        .dump();
}

}  // namespace subsumm
