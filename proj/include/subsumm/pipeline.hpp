#pragma once

#include <map>
#include <string>
#include <vector>

#include "subsumm/config.hpp"
#include "subsumm/corpus.hpp"
#include "subsumm/sampling.hpp"
#include "subsumm/sentiment.hpp"
#include "subsumm/summodel.hpp"
#include "subsumm/valuation.hpp"

namespace subsumm {

enum class SubsetStrategy { Random, SentimentRandom, SentimentInfo, SentimentInfoWeighted };

const char* to_string(SubsetStrategy s);

struct ModelBundle {
    SentimentModel sentiment;
    ValuationScorer scorer;
    SummarizerModel summarizer;
};

std::vector<Polarity> entity_tags(const SentimentModel& model, const Entity& entity,
                                  int rating_max);

// Corr over all reviews of the entity; a single-review entity scores {0}.
std::vector<double> entity_corr(const ValuationScorer& scorer, const Entity& entity);

// Draw a subset with the given strategy. Deterministic strategies ignore the
// seed; stochastic ones are pure functions of it.
Subset draw_subset(SubsetStrategy strategy, const Entity& entity,
                   const std::vector<Polarity>& tags, const std::vector<double>& corr,
                   Perspective perspective, int k, uint64_t seed);

struct SummarizerTrainResult {
    SummarizerModel model;
    std::vector<double> epoch_loss;
};

// Stage I: MLE with per-epoch re-sampled subsets (Sentiment-Random by
// default; other strategies support the analysis experiments).
SummarizerTrainResult train_stage1(const Corpus& corpus, const Vocab& vocab,
                                   const SentimentModel& sentiment, const ValuationScorer& scorer,
                                   Perspective perspective, const RunConfig& cfg,
                                   SubsetStrategy strategy = SubsetStrategy::SentimentRandom);

struct Candidate {
    TokenSeq tokens;
    double rouge = 0.0;          // rouge_mean vs the reference
    std::vector<int> subset_ids;
    uint64_t seed = 0;
};

using CandidateStore = std::map<std::string, std::vector<Candidate>>;  // entity_id -> candidates

CandidateStore gen_candidates(const Corpus& corpus, const Vocab& vocab,
                              const SummarizerModel& stage1, const SentimentModel& sentiment,
                              const ValuationScorer& scorer, Perspective perspective,
                              const RunConfig& cfg,
                              SubsetStrategy strategy = SubsetStrategy::SentimentInfoWeighted);

void save_candidates(const CandidateStore& store, const std::string& path);
CandidateStore load_candidates(const std::string& path);

// Stage II: multi-task loss (xent on the deterministic optimal subset plus
// the gamma-weighted candidate contrastive term) starting from stage1.
SummarizerTrainResult train_stage2(const Corpus& corpus, const Vocab& vocab,
                                   const SummarizerModel& stage1, const SentimentModel& sentiment,
                                   const ValuationScorer& scorer, const CandidateStore& candidates,
                                   Perspective perspective, const RunConfig& cfg,
                                   SubsetStrategy input_strategy = SubsetStrategy::SentimentInfo);

struct InferResult {
    TokenSeq summary;
    Subset subset;
    std::vector<Polarity> tags;
    std::vector<double> corr;
    double lh = 0.0;  // length-normalized likelihood of the decoded summary
    bool blocking_fallback = false;
};

InferResult infer(const ModelBundle& bundle, const Vocab& vocab, const Entity& entity,
                  Perspective perspective, const RunConfig& cfg, int rating_max,
                  SubsetStrategy strategy = SubsetStrategy::SentimentInfo, uint64_t seed = 0);

std::string infer_audit_json(const std::string& entity_id, Perspective perspective,
                             const InferResult& result);

// Lh values of the stored candidates under the given model, conditioned on
// the entity's current input subset. Used for ranking-accuracy metrics.
std::vector<double> candidate_lh(const SummarizerModel& model, const Vocab& vocab,
                                 const Entity& entity, const std::vector<int>& subset_ids,
                                 const std::vector<Candidate>& candidates, double alpha);

// Fraction of candidate pairs with strictly different ROUGE where the
// higher-ROUGE candidate has the higher Lh.
double pairwise_ranking_accuracy(const std::vector<double>& lh, const std::vector<Candidate>& cands);

}  // namespace subsumm
