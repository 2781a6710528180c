#pragma once

#include <cstdint>
#include <vector>

#include "subsumm/corpus.hpp"
#include "subsumm/features.hpp"

namespace subsumm {

// Linear projection from hashed review features to a d-dimensional embedding.
struct ValuationScorer {
    int dim = 64;
    std::vector<double> proj;  // dim x kFeatureDim, row-major

    const double* row(int r) const { return proj.data() + static_cast<size_t>(r) * kFeatureDim; }
};

ValuationScorer make_valuation_scorer(int dim, uint64_t seed, double init_scale = 0.1);

std::vector<double> embed_review(const ValuationScorer& scorer, const FeatureVec& features);
std::vector<double> embed_review(const ValuationScorer& scorer, const Review& review);

// Ranking r over reviews: r[i] = 1 means highest underlying score. Ties are
// broken by ascending review id; the underlying scores travel along so that
// tied pairs can be excluded from the margin loss.
struct Ranking {
    std::vector<int> rank;      // 1-based
    std::vector<double> score;  // underlying score per item
};

Ranking ranking_from_scores(const std::vector<double>& scores_desc_better);

// Ranking of reviews by rouge_mean against the reference, descending.
Ranking rouge_ranking(const std::vector<Review>& reviews, const TokenSeq& reference);

// Leave-one-out correlation: Corr_i = h_i . (sum_j h_j - h_i) / (N-1).
// O(N*d) via the shared-sum trick; embeddings indexed [i][k].
std::vector<double> corr_scores(const std::vector<std::vector<double>>& embeddings);
// O(N^2*d) double loop kept as the testing reference (OpenMP over rows).
std::vector<double> corr_scores_reference(const std::vector<std::vector<double>>& embeddings);

std::vector<double> corr_scores(const ValuationScorer& scorer, const std::vector<Review>& reviews);

// Pairwise hinge over pairs with r(j) > r(i) and strictly different
// underlying scores: max(0, Corr_j - Corr_i + lambda*(r(j)-r(i))).
double margin_loss(const std::vector<double>& corr, const Ranking& ranking, double lambda);

// d(margin_loss)/d(corr_i); same pair set as margin_loss.
std::vector<double> margin_loss_corr_grad(const std::vector<double>& corr, const Ranking& ranking,
                                          double lambda);

struct ValuationTrainConfig {
    int dim = 64;
    int epochs = 30;
    double learning_rate = 0.05;
    double lambda = 1e-2;     // rank-gap margin
    int max_reviews = 64;     // subsample above this before forming pairs
    int batch_entities = 8;
    uint64_t seed = 1;
};

// Loss and projection gradient for one entity (embeddings derived from the
// scorer). Returns the margin loss; grad may be null.
double valuation_entity_loss_grad(const ValuationScorer& scorer,
                                  const std::vector<FeatureVec>& features, const Ranking& ranking,
                                  double lambda, std::vector<double>* grad_proj);

struct ValuationTrainResult {
    ValuationScorer scorer;
    std::vector<double> epoch_loss;
};

ValuationTrainResult train_valuation(const Corpus& corpus, Perspective perspective,
                                     const ValuationTrainConfig& cfg);

// Kendall tau-a between two score vectors' orderings; used to evaluate how
// well Corr tracks the ROUGE ordering.
double kendall_tau(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace subsumm
