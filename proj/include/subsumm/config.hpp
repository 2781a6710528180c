#pragma once

#include <cstdint>
#include <string>

#include "subsumm/corpus.hpp"
#include "subsumm/summodel.hpp"

namespace subsumm {

// All hyperparameters with their published defaults; training-schedule and
// dimension fields are artifact choices.
struct RunConfig {
    int k = 10;                 // reviews per subset
    int m = 16;                 // candidate summaries per entity
    double lambda_val = 1e-2;   // margin in the valuation loss
    double lambda_ctr = 1e-3;   // margin in the candidate contrastive loss
    double alpha = 2.0;         // length penalty in Lh

    double gamma_pros = 0.1;
    double gamma_cons = 1.0;
    double gamma_verdict = 0.1;

    int beam_size = 5;
    int min_len_pros = 35;
    int min_len_cons = 25;
    int min_len_verdict = 25;
    double lenpen_pros = 0.5;
    double lenpen_cons = 0.5;
    double lenpen_verdict = 1.0;
    int max_len = 100;
    bool trigram_block = true;

    uint64_t master_seed = 1;
    int min_freq = 1;

    int sent_epochs = 60;
    int sent_batch = 32;
    double sent_lr = 0.5;
    double sent_l2 = 1e-4;

    int val_dim = 64;
    int val_epochs = 30;
    double val_lr = 0.05;
    int val_max_reviews = 64;
    int val_batch = 8;

    int emb_dim = 32;
    int ctx_dim = 32;
    int stage1_epochs = 20;
    int stage2_epochs = 10;
    int batch_entities = 8;
    double stage1_lr = 0.5;
    double stage2_lr = 0.1;
    double clip_norm = 5.0;

    double gamma_for(Perspective p) const {
        switch (p) {
            case Perspective::Pros: return gamma_pros;
            case Perspective::Cons: return gamma_cons;
            case Perspective::Verdict: return gamma_verdict;
        }
        return gamma_pros;
    }

    DecodeConfig decode_for(Perspective p) const {
        DecodeConfig d;
        d.beam_size = beam_size;
        d.max_len = max_len;
        d.trigram_block = trigram_block;
        switch (p) {
            case Perspective::Pros: d.min_len = min_len_pros; d.lenpen = lenpen_pros; break;
            case Perspective::Cons: d.min_len = min_len_cons; d.lenpen = lenpen_cons; break;
            case Perspective::Verdict: d.min_len = min_len_verdict; d.lenpen = lenpen_verdict; break;
        }
        return d;
    }
};

std::string config_to_json(const RunConfig& cfg);
RunConfig config_from_json(const std::string& text);
RunConfig load_config(const std::string& path);
void save_config(const RunConfig& cfg, const std::string& path);

}  // namespace subsumm
