#include "subsumm/config.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "subsumm/error.hpp"

namespace subsumm {

using nlohmann::json;

std::string config_to_json(const RunConfig& c) {
    json j{
        {"K", c.k},
        {"M", c.m},
        {"lambda_val", c.lambda_val},
        {"lambda_ctr", c.lambda_ctr},
        {"alpha", c.alpha},
        {"gamma", {{"pros", c.gamma_pros}, {"cons", c.gamma_cons}, {"verdict", c.gamma_verdict}}},
        {"beam_size", c.beam_size},
        {"min_len", {{"pros", c.min_len_pros}, {"cons", c.min_len_cons}, {"verdict", c.min_len_verdict}}},
        {"lenpen", {{"pros", c.lenpen_pros}, {"cons", c.lenpen_cons}, {"verdict", c.lenpen_verdict}}},
        {"max_len", c.max_len},
        {"trigram_block", c.trigram_block},
        {"master_seed", c.master_seed},
        {"min_freq", c.min_freq},
        {"sentiment", {{"epochs", c.sent_epochs}, {"batch", c.sent_batch}, {"lr", c.sent_lr}, {"l2", c.sent_l2}}},
        {"valuation",
         {{"dim", c.val_dim}, {"epochs", c.val_epochs}, {"lr", c.val_lr},
          {"max_reviews", c.val_max_reviews}, {"batch", c.val_batch}}},
        {"summarizer",
         {{"emb_dim", c.emb_dim}, {"ctx_dim", c.ctx_dim}, {"stage1_epochs", c.stage1_epochs},
          {"stage2_epochs", c.stage2_epochs}, {"batch_entities", c.batch_entities},
          {"stage1_lr", c.stage1_lr}, {"stage2_lr", c.stage2_lr}, {"clip_norm", c.clip_norm}}},
    };
    return j.dump(2);
}

RunConfig config_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error("InvalidConfig", e.what());
    }
    RunConfig c;
    c.k = j.value("K", c.k);
    c.m = j.value("M", c.m);
    c.lambda_val = j.value("lambda_val", c.lambda_val);
    c.lambda_ctr = j.value("lambda_ctr", c.lambda_ctr);
    c.alpha = j.value("alpha", c.alpha);
    if (j.contains("gamma")) {
        c.gamma_pros = j["gamma"].value("pros", c.gamma_pros);
        c.gamma_cons = j["gamma"].value("cons", c.gamma_cons);
        c.gamma_verdict = j["gamma"].value("verdict", c.gamma_verdict);
    }
    c.beam_size = j.value("beam_size", c.beam_size);
    if (j.contains("min_len")) {
        c.min_len_pros = j["min_len"].value("pros", c.min_len_pros);
        c.min_len_cons = j["min_len"].value("cons", c.min_len_cons);
        c.min_len_verdict = j["min_len"].value("verdict", c.min_len_verdict);
    }
    if (j.contains("lenpen")) {
        c.lenpen_pros = j["lenpen"].value("pros", c.lenpen_pros);
        c.lenpen_cons = j["lenpen"].value("cons", c.lenpen_cons);
        c.lenpen_verdict = j["lenpen"].value("verdict", c.lenpen_verdict);
    }
    c.max_len = j.value("max_len", c.max_len);
    c.trigram_block = j.value("trigram_block", c.trigram_block);
    c.master_seed = j.value("master_seed", c.master_seed);
    c.min_freq = j.value("min_freq", c.min_freq);
    if (j.contains("sentiment")) {
        const auto& s = j["sentiment"];
        c.sent_epochs = s.value("epochs", c.sent_epochs);
        c.sent_batch = s.value("batch", c.sent_batch);
        c.sent_lr = s.value("lr", c.sent_lr);
        c.sent_l2 = s.value("l2", c.sent_l2);
    }
    if (j.contains("valuation")) {
        const auto& v = j["valuation"];
        c.val_dim = v.value("dim", c.val_dim);
        c.val_epochs = v.value("epochs", c.val_epochs);
        c.val_lr = v.value("lr", c.val_lr);
        c.val_max_reviews = v.value("max_reviews", c.val_max_reviews);
        c.val_batch = v.value("batch", c.val_batch);
    }
    if (j.contains("summarizer")) {
        const auto& s = j["summarizer"];
        c.emb_dim = s.value("emb_dim", c.emb_dim);
        c.ctx_dim = s.value("ctx_dim", c.ctx_dim);
        c.stage1_epochs = s.value("stage1_epochs", c.stage1_epochs);
        c.stage2_epochs = s.value("stage2_epochs", c.stage2_epochs);
        c.batch_entities = s.value("batch_entities", c.batch_entities);
        c.stage1_lr = s.value("stage1_lr", c.stage1_lr);
        c.stage2_lr = s.value("stage2_lr", c.stage2_lr);
        c.clip_norm = s.value("clip_norm", c.clip_norm);
    }

    if (c.k < 1 || c.m < 1 || c.lambda_val < 0 || c.lambda_ctr < 0 || c.alpha < 0 ||
        c.beam_size < 1 || c.min_len_pros < 1 || c.min_len_cons < 1 || c.min_len_verdict < 1 ||
        c.max_len < 1 || c.min_freq < 1)
        throw Error("InvalidConfig", "hyperparameter outside its valid range");
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("IoError", "cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return config_from_json(ss.str());
}

void save_config(const RunConfig& cfg, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("IoError", "cannot write " + path);
    out << config_to_json(cfg) << "\n";
}

}  // namespace subsumm
