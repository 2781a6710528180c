#pragma once

#include <string>
#include <vector>

#include "subsumm/pipeline.hpp"

namespace subsumm {

struct MetricsRow {
    std::string variant;
    std::string perspective;
    int n = 0;          // entities evaluated
    double r1 = 0.0;    // mean F1 over entities
    double r2 = 0.0;
    double rl = 0.0;
};

struct MetricsTable {
    std::vector<MetricsRow> rows;

    std::string to_csv() const;   // header: variant,perspective,n,r1,r2,rl
    std::string to_json() const;
};

// Macro-averaged ROUGE F1 of infer output against the references.
MetricsRow evaluate(const ModelBundle& bundle, const Vocab& vocab, const Corpus& corpus,
                    Perspective perspective, const RunConfig& cfg,
                    SubsetStrategy inference_strategy = SubsetStrategy::SentimentInfo,
                    const std::string& variant = "full");

// Stage-I strategy comparison: Rand / Senti-Rand / Senti-Info plus the
// Senti-Rand-Info cross (Senti-Rand checkpoint, Senti-Info test subsets).
MetricsTable compare_strategies(const Corpus& train, const Corpus& test, const Vocab& vocab,
                                const SentimentModel& sentiment, const ValuationScorer& scorer,
                                Perspective perspective, const RunConfig& cfg);

struct AblationSpec {
    bool skip_stage1 = false;       // stage II from a fresh init
    bool skip_stage2 = false;       // evaluate the stage-I model
    bool random_in_stage1 = false;  // Random instead of Sentiment-Random
    bool random_in_stage2 = false;  // Random subsets for candidates and input
    SubsetStrategy strategy_for_inference = SubsetStrategy::SentimentInfo;
};

MetricsRow run_ablation(const AblationSpec& spec, const Corpus& train, const Corpus& test,
                        const Vocab& vocab, const SentimentModel& sentiment,
                        const ValuationScorer& scorer, Perspective perspective,
                        const RunConfig& cfg, const std::string& variant);

}  // namespace subsumm
