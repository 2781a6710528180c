#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "subsumm/corpus.hpp"
#include "subsumm/features.hpp"
#include "subsumm/valuation.hpp"

namespace subsumm {

// Single-layer conditional token LM: previous-token embedding plus a
// projected bag-of-reviews context vector, one tanh layer, vocab logits.
struct SummarizerModel {
    int vocab_size = 0;
    int emb_dim = 32;
    int ctx_dim = 32;

    std::vector<double> emb;       // vocab_size x emb_dim
    std::vector<double> ctx_proj;  // ctx_dim x kFeatureDim
    std::vector<double> cond;      // emb_dim x ctx_dim
    std::vector<double> hidden;    // emb_dim x emb_dim
    std::vector<double> out_w;     // vocab_size x emb_dim
    std::vector<double> out_b;     // vocab_size

    std::vector<std::vector<double>*> param_blocks() {
        return {&emb, &ctx_proj, &cond, &hidden, &out_w, &out_b};
    }
    std::vector<const std::vector<double>*> param_blocks() const {
        return {&emb, &ctx_proj, &cond, &hidden, &out_w, &out_b};
    }
};

SummarizerModel make_summarizer(int vocab_size, int emb_dim, int ctx_dim, uint64_t seed,
                                double init_scale = 0.1);

// Gradient with the same shapes as the model.
struct SummarizerGrad {
    std::vector<double> emb, ctx_proj, cond, hidden, out_w, out_b;

    void reset(const SummarizerModel& m);
    void add_scaled(const SummarizerGrad& other, double scale);
    std::vector<std::vector<double>*> param_blocks() {
        return {&emb, &ctx_proj, &cond, &hidden, &out_w, &out_b};
    }
};

// Pooled review features -> d_ctx context vector. Permutation- and
// duplication-invariant in the reviews.
std::vector<double> encode_input(const SummarizerModel& model,
                                 const std::vector<TokenSeq>& reviews);
std::vector<double> context_from_features(const SummarizerModel& model, const FeatureVec& pooled);

// Softmax over the vocabulary given the last prefix token id and the context.
std::vector<double> next_token_dist(const SummarizerModel& model, const std::vector<double>& context,
                                    int last_token_id);

// -sum_i log p(s_i | context, prefix) over the target tokens plus EOS.
// Targets are content token ids (no BOS/EOS); ids >= vocab_size throw.
double xent_loss(const SummarizerModel& model, const std::vector<double>& context,
                 const std::vector<int>& target_ids);

double seq_loglik(const SummarizerModel& model, const std::vector<double>& context,
                  const std::vector<int>& target_ids);

// loglik / length^alpha (Lh), the candidate reranking score.
inline double length_norm_lik(double loglik, int length, double alpha) {
    return loglik / std::pow(static_cast<double>(length), alpha);
}

// Pairwise hinge over candidates with r(j) > r(i) and strictly different
// underlying ROUGE: max(0, Lh_j - Lh_i + lambda*(r(j)-r(i))).
double ctr_loss(const std::vector<double>& lh, const Ranking& ranking, double lambda);
std::vector<double> ctr_loss_lh_grad(const std::vector<double>& lh, const Ranking& ranking,
                                     double lambda);

inline double multitask_loss(double xent, double ctr, double gamma) { return xent + gamma * ctr; }

// Accumulates d(weight * xent)/d(params) into grad; returns the xent loss.
// pooled is the feature vector behind the context (needed for ctx_proj).
double grad_xent(const SummarizerModel& model, const FeatureVec& pooled,
                 const std::vector<int>& target_ids, double weight, SummarizerGrad& grad);

struct DecodeConfig {
    int beam_size = 5;
    int min_len = 1;
    int max_len = 60;
    double lenpen = 1.0;
    bool trigram_block = true;
};

struct DecodeResult {
    std::vector<int> token_ids;  // content ids, EOS stripped
    double loglik = 0.0;
    bool blocking_fallback = false;  // all beams pruned; re-ran with blocking off
};

DecodeResult beam_search(const SummarizerModel& model, const std::vector<double>& context,
                         const DecodeConfig& cfg);

}  // namespace subsumm
