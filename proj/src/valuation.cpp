#include "subsumm/valuation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "subsumm/error.hpp"
#include "subsumm/rng.hpp"
#include "subsumm/rouge.hpp"

namespace subsumm {

namespace {
constexpr double kTieEps = 1e-9;
}

ValuationScorer make_valuation_scorer(int dim, uint64_t seed, double init_scale) {
    ValuationScorer s;
    s.dim = dim;
    s.proj.resize(static_cast<size_t>(dim) * kFeatureDim);
    Rng rng(seed);
    for (double& v : s.proj) v = (rng.next_double() * 2.0 - 1.0) * init_scale;
    return s;
}

std::vector<double> embed_review(const ValuationScorer& scorer, const FeatureVec& features) {
    std::vector<double> h(scorer.dim);
    for (int r = 0; r < scorer.dim; ++r) h[r] = features.dot_dense(scorer.row(r));
    return h;
}

std::vector<double> embed_review(const ValuationScorer& scorer, const Review& review) {
    return embed_review(scorer, featurize(review.tokens));
}

Ranking ranking_from_scores(const std::vector<double>& scores) {
    const int n = static_cast<int>(scores.size());
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (scores[a] != scores[b]) return scores[a] > scores[b];
        return a < b;
    });
    Ranking r;
    r.rank.resize(n);
    r.score = scores;
    for (int pos = 0; pos < n; ++pos) r.rank[order[pos]] = pos + 1;
    return r;
}

Ranking rouge_ranking(const std::vector<Review>& reviews, const TokenSeq& reference) {
    if (reference.empty()) throw Error("EmptyReference", "cannot rank against empty reference");
    std::vector<double> scores(reviews.size());
    for (size_t i = 0; i < reviews.size(); ++i)
        scores[i] = rouge_mean(reviews[i].tokens, reference);
    return ranking_from_scores(scores);
}

std::vector<double> corr_scores(const std::vector<std::vector<double>>& embeddings) {
    const int n = static_cast<int>(embeddings.size());
    if (n < 2) throw Error("TooFewReviews", "corr_scores needs at least 2 reviews");
    const int d = static_cast<int>(embeddings[0].size());
    std::vector<double> sum(d, 0.0);
    for (const auto& h : embeddings)
        for (int k = 0; k < d; ++k) sum[k] += h[k];
    std::vector<double> corr(n);
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int k = 0; k < d; ++k) s += embeddings[i][k] * (sum[k] - embeddings[i][k]);
        corr[i] = s / (n - 1);
    }
    return corr;
}

std::vector<double> corr_scores_reference(const std::vector<std::vector<double>>& embeddings) {
    const int n = static_cast<int>(embeddings.size());
    if (n < 2) throw Error("TooFewReviews", "corr_scores needs at least 2 reviews");
    const int d = static_cast<int>(embeddings[0].size());
    std::vector<double> corr(n, 0.0);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            double dot = 0.0;
            for (int k = 0; k < d; ++k) dot += embeddings[i][k] * embeddings[j][k];
            s += dot;
        }
        corr[i] = s / (n - 1);
    }
    return corr;
}

std::vector<double> corr_scores(const ValuationScorer& scorer, const std::vector<Review>& reviews) {
    std::vector<std::vector<double>> h(reviews.size());
    for (size_t i = 0; i < reviews.size(); ++i) h[i] = embed_review(scorer, reviews[i]);
    return corr_scores(h);
}

double margin_loss(const std::vector<double>& corr, const Ranking& ranking, double lambda) {
    if (corr.size() != ranking.rank.size())
        throw Error("LengthMismatch", "corr and ranking sizes differ");
    const int n = static_cast<int>(corr.size());
    double loss = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (ranking.rank[j] <= ranking.rank[i]) continue;
            if (std::abs(ranking.score[i] - ranking.score[j]) <= kTieEps) continue;
            double margin = lambda * (ranking.rank[j] - ranking.rank[i]);
            loss += std::max(0.0, corr[j] - corr[i] + margin);
        }
    }
    return loss;
}

std::vector<double> margin_loss_corr_grad(const std::vector<double>& corr, const Ranking& ranking,
                                          double lambda) {
    if (corr.size() != ranking.rank.size())
        throw Error("LengthMismatch", "corr and ranking sizes differ");
    const int n = static_cast<int>(corr.size());
    std::vector<double> g(n, 0.0);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (ranking.rank[j] <= ranking.rank[i]) continue;
            if (std::abs(ranking.score[i] - ranking.score[j]) <= kTieEps) continue;
            double margin = lambda * (ranking.rank[j] - ranking.rank[i]);
            if (corr[j] - corr[i] + margin > 0.0) {
                g[j] += 1.0;
                g[i] -= 1.0;
            }
        }
    }
    return g;
}

double valuation_entity_loss_grad(const ValuationScorer& scorer,
                                  const std::vector<FeatureVec>& features, const Ranking& ranking,
                                  double lambda, std::vector<double>* grad_proj) {
    const int n = static_cast<int>(features.size());
    const int d = scorer.dim;
    std::vector<std::vector<double>> h(n);
    for (int i = 0; i < n; ++i) h[i] = embed_review(scorer, features[i]);
    std::vector<double> corr = corr_scores(h);
    double loss = margin_loss(corr, ranking, lambda);
    if (!grad_proj) return loss;

    std::vector<double> g = margin_loss_corr_grad(corr, ranking, lambda);
    std::vector<double> sum(d, 0.0), a(d, 0.0);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < d; ++k) {
            sum[k] += h[i][k];
            a[k] += g[i] * h[i][k];
        }
    // dL/dh_l = (g_l * (sum - 2 h_l) + a) / (n - 1); dL/dP_r += dL/dh_l[r] * x_l
    const double inv = 1.0 / (n - 1);
    std::vector<double> v(d);
    for (int l = 0; l < n; ++l) {
        bool nonzero = false;
        for (int k = 0; k < d; ++k) {
            v[k] = (g[l] * (sum[k] - 2.0 * h[l][k]) + a[k]) * inv;
            nonzero |= v[k] != 0.0;
        }
        if (!nonzero) continue;
        for (int r = 0; r < d; ++r)
            features[l].axpy_dense(v[r], grad_proj->data() + static_cast<size_t>(r) * kFeatureDim);
    }
    return loss;
}

ValuationTrainResult train_valuation(const Corpus& corpus, Perspective perspective,
                                     const ValuationTrainConfig& cfg) {
    struct Item {
        const Entity* entity;
        std::vector<FeatureVec> features;
    };
    std::vector<Item> items;
    for (const Entity& e : corpus.entities) {
        if (!e.summary(perspective) || e.reviews.size() < 2) continue;
        Item it;
        it.entity = &e;
        it.features.reserve(e.reviews.size());
        for (const Review& r : e.reviews) it.features.push_back(featurize(r.tokens));
        items.push_back(std::move(it));
    }
    if (items.empty()) throw Error("EmptyTrainingSet", "no entities with a reference");

    ValuationTrainResult result;
    result.scorer = make_valuation_scorer(cfg.dim, derive_seed(cfg.seed, "valuation/init"));
    std::vector<double> grad(result.scorer.proj.size());

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        double epoch_loss = 0.0;
        for (size_t start = 0; start < items.size(); start += cfg.batch_entities) {
            size_t end = std::min(items.size(), start + cfg.batch_entities);
            std::fill(grad.begin(), grad.end(), 0.0);
            for (size_t idx = start; idx < end; ++idx) {
                const Item& it = items[idx];
                const TokenSeq& ref = *it.entity->summary(perspective);
                int n = static_cast<int>(it.features.size());

                std::vector<int> chosen(n);
                std::iota(chosen.begin(), chosen.end(), 0);
                if (n > cfg.max_reviews) {
                    Rng rng(derive_seed(cfg.seed, "valuation/sub/epoch" + std::to_string(epoch) +
                                                      "/" + it.entity->entity_id));
                    rng.shuffle(chosen);
                    chosen.resize(cfg.max_reviews);
                    std::sort(chosen.begin(), chosen.end());
                }

                std::vector<FeatureVec> feats;
                std::vector<Review> revs;
                for (int c : chosen) {
                    feats.push_back(it.features[c]);
                    revs.push_back(it.entity->reviews[c]);
                }
                Ranking ranking = rouge_ranking(revs, ref);
                epoch_loss +=
                    valuation_entity_loss_grad(result.scorer, feats, ranking, cfg.lambda, &grad);
            }
            double scale = cfg.learning_rate / static_cast<double>(end - start);
            for (size_t i = 0; i < grad.size(); ++i) result.scorer.proj[i] -= scale * grad[i];
        }
        result.epoch_loss.push_back(epoch_loss / static_cast<double>(items.size()));
    }
    return result;
}

double kendall_tau(const std::vector<double>& a, const std::vector<double>& b) {
    const int n = static_cast<int>(a.size());
    long concordant = 0, discordant = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            double da = a[i] - a[j], db = b[i] - b[j];
            double s = da * db;
            if (s > 0) ++concordant;
            else if (s < 0) ++discordant;
        }
    long pairs = static_cast<long>(n) * (n - 1) / 2;
    return pairs ? static_cast<double>(concordant - discordant) / static_cast<double>(pairs) : 0.0;
}

}  // namespace subsumm
