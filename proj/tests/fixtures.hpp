#pragma once

// Shared small-scale fixtures for the pipeline-level suites. Training here is
// deliberately tiny; the statistical claims live in the acceptance binary.

#include "subsumm/config.hpp"
#include "subsumm/pipeline.hpp"
#include "subsumm/synthetic.hpp"

namespace fixtures {

inline subsumm::RunConfig small_cfg() {
    subsumm::RunConfig cfg;
    cfg.k = 4;
    cfg.m = 4;
    cfg.beam_size = 3;
    cfg.min_len_pros = cfg.min_len_cons = cfg.min_len_verdict = 2;
    cfg.lenpen_pros = cfg.lenpen_cons = 0.5;
    cfg.lenpen_verdict = 1.0;
    cfg.max_len = 20;
    cfg.sent_epochs = 15;
    cfg.val_dim = 16;
    cfg.val_epochs = 8;
    cfg.emb_dim = 8;
    cfg.ctx_dim = 8;
    cfg.stage1_epochs = 4;
    cfg.stage2_epochs = 2;
    cfg.batch_entities = 4;
    return cfg;
}

struct World {
    subsumm::SyntheticResult syn;
    subsumm::Vocab vocab;
    subsumm::SentimentModel sentiment;
    subsumm::ValuationScorer scorer;
    subsumm::RunConfig cfg;
};

// One trained sentiment model + valuation scorer over a small planted corpus,
// built once per process.
inline const World& world() {
    static World w = [] {
        World out;
        out.cfg = small_cfg();
        subsumm::GenConfig gen;
        gen.n_entities = 8;
        gen.reviews_per_entity = 12;
        out.syn = subsumm::generate_synthetic(gen, 17);
        out.vocab = subsumm::build_vocab(out.syn.corpus, 1);

        subsumm::SentimentTrainConfig scfg;
        scfg.epochs = out.cfg.sent_epochs;
        out.sentiment = subsumm::train_sentiment(out.syn.corpus, scfg).model;

        subsumm::ValuationTrainConfig vcfg;
        vcfg.dim = out.cfg.val_dim;
        vcfg.epochs = out.cfg.val_epochs;
        out.scorer =
            subsumm::train_valuation(out.syn.corpus, subsumm::Perspective::Pros, vcfg).scorer;
        return out;
    }();
    return w;
}

}  // namespace fixtures
