#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"
#include "json.hpp"
#include "subsumm/checkpoint.hpp"
#include "subsumm/error.hpp"
#include "subsumm/eval.hpp"
#include "subsumm/rng.hpp"
#include "subsumm/pipeline.hpp"
#include "subsumm/synthetic.hpp"

namespace fs = std::filesystem;
using namespace subsumm;

namespace {

struct Options {
    std::string config_path;
    std::string corpus_path;
    std::string test_path;
    std::string split = "train";
    std::string perspective = "pros";
    std::optional<uint64_t> seed;
    std::string out;
    std::string checkpoint;
    std::string sentiment_path;
    std::string valuation_path;
    std::string stage1_path;
    std::string candidates_path;
    std::string vocab_path;
    std::string strategy;  // per-command default when empty

    // synth
    int gen_entities = 50;
    int gen_reviews = 40;
    int gen_key_reviews = 5;

    // ablate
    bool skip_stage1 = false;
    bool skip_stage2 = false;
    bool random_in_stage1 = false;
    bool random_in_stage2 = false;
};

Split parse_split(const std::string& s) {
    if (s == "train") return Split::Train;
    if (s == "dev") return Split::Dev;
    if (s == "test") return Split::Test;
    throw Error("UsageError", "--split must be train|dev|test, got " + s);
}

Perspective parse_perspective(const std::string& s) {
    auto p = perspective_from_string(s);
    if (!p) throw Error("UsageError", "--perspective must be pros|cons|verdict, got " + s);
    return *p;
}

SubsetStrategy parse_strategy(const std::string& s,
                              const char* fallback = "sentiment-info") {
    if (s.empty()) return parse_strategy(fallback, fallback);
    if (s == "random") return SubsetStrategy::Random;
    if (s == "sentiment-random") return SubsetStrategy::SentimentRandom;
    if (s == "sentiment-info") return SubsetStrategy::SentimentInfo;
    if (s == "sentiment-info-weighted") return SubsetStrategy::SentimentInfoWeighted;
    throw Error("UsageError", "unknown --strategy " + s);
}

RunConfig make_config(const Options& opt) {
    RunConfig cfg = opt.config_path.empty() ? RunConfig{} : load_config(opt.config_path);
    if (opt.seed) cfg.master_seed = *opt.seed;  // flag beats config file
    return cfg;
}

Corpus require_corpus(const Options& opt) {
    if (opt.corpus_path.empty()) throw Error("UsageError", "--corpus is required");
    return load_corpus(opt.corpus_path, parse_split(opt.split));
}

Vocab vocab_for(const Options& opt, const Corpus& corpus, const RunConfig& cfg) {
    if (!opt.vocab_path.empty() && fs::exists(opt.vocab_path)) return load_vocab(opt.vocab_path);
    Vocab v = build_vocab(corpus, cfg.min_freq);
    if (!opt.vocab_path.empty()) save_vocab(v, opt.vocab_path);
    return v;
}

void require(const std::string& value, const char* flag) {
    if (value.empty()) throw Error("UsageError", std::string(flag) + " is required");
}

ModelBundle load_bundle(const Options& opt) {
    require(opt.sentiment_path, "--sentiment");
    require(opt.valuation_path, "--valuation");
    require(opt.checkpoint, "--checkpoint");
    return {load_sentiment_checkpoint(opt.sentiment_path),
            load_valuation_checkpoint(opt.valuation_path),
            load_summarizer_checkpoint(opt.checkpoint)};
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw Error("IoError", "cannot write " + path);
    out << content;
}

int run(const std::string& cmd, const Options& opt) {
    RunConfig cfg = make_config(opt);

    if (cmd == "ingest") {
        Corpus c = require_corpus(opt);
        size_t reviews = 0;
        for (const auto& e : c.entities) reviews += e.reviews.size();
        std::cout << "entities=" << c.entities.size() << " reviews=" << reviews
                  << " rating_max=" << c.rating_max << "\n";
        if (!opt.out.empty()) save_corpus(c, opt.out);
        return 0;
    }

    if (cmd == "synth") {
        require(opt.out, "--out");
        GenConfig gen;
        gen.n_entities = opt.gen_entities;
        gen.reviews_per_entity = opt.gen_reviews;
        gen.key_reviews_per_polarity = opt.gen_key_reviews;
        SyntheticResult r = generate_synthetic(gen, cfg.master_seed);
        save_corpus(r.corpus, opt.out);
        std::ofstream oracle(opt.out + ".oracle.jsonl");
        for (size_t i = 0; i < r.oracles.size(); ++i)
            oracle << "{\"entity_id\":\"" << r.corpus.entities[i].entity_id << "\",\"key_pos\":"
                   << nlohmann::json(r.oracles[i].key_pos_ids).dump()
                   << ",\"key_neg\":" << nlohmann::json(r.oracles[i].key_neg_ids).dump() << "}\n";
        std::cout << "wrote " << r.corpus.entities.size() << " entities to " << opt.out << "\n";
        return 0;
    }

    if (cmd == "train-sentiment") {
        Corpus c = require_corpus(opt);
        require(opt.checkpoint, "--checkpoint");
        SentimentTrainConfig tc{cfg.sent_epochs, cfg.sent_batch, cfg.sent_lr, cfg.sent_l2};
        SentimentTrainResult r = train_sentiment(c, tc);
        save_checkpoint(r.model, opt.checkpoint);
        std::cout << "final_loss=" << r.epoch_loss.back() << "\n";
        return 0;
    }

    if (cmd == "train-valuation") {
        Corpus c = require_corpus(opt);
        require(opt.checkpoint, "--checkpoint");
        ValuationTrainConfig vc;
        vc.dim = cfg.val_dim;
        vc.epochs = cfg.val_epochs;
        vc.learning_rate = cfg.val_lr;
        vc.lambda = cfg.lambda_val;
        vc.max_reviews = cfg.val_max_reviews;
        vc.batch_entities = cfg.val_batch;
        vc.seed = cfg.master_seed;
        ValuationTrainResult r = train_valuation(c, parse_perspective(opt.perspective), vc);
        save_checkpoint(r.scorer, opt.checkpoint);
        std::cout << "final_loss=" << r.epoch_loss.back() << "\n";
        return 0;
    }

    if (cmd == "select") {
        Corpus c = require_corpus(opt);
        require(opt.sentiment_path, "--sentiment");
        require(opt.valuation_path, "--valuation");
        require(opt.out, "--out");
        SentimentModel sent = load_sentiment_checkpoint(opt.sentiment_path);
        ValuationScorer scorer = load_valuation_checkpoint(opt.valuation_path);
        Perspective p = parse_perspective(opt.perspective);
        SubsetStrategy strategy = parse_strategy(opt.strategy);
        std::ofstream out(opt.out);
        for (const Entity& e : c.entities) {
            auto tags = entity_tags(sent, e, c.rating_max);
            auto corr = entity_corr(scorer, e);
            uint64_t seed = derive_seed(cfg.master_seed, "select/" + e.entity_id);
            Subset s = draw_subset(strategy, e, tags, corr, p, cfg.k, seed);
            out << subset_to_json(e.entity_id, s) << "\n";
        }
        return 0;
    }

    if (cmd == "train-stage1") {
        Corpus c = require_corpus(opt);
        require(opt.sentiment_path, "--sentiment");
        require(opt.valuation_path, "--valuation");
        require(opt.checkpoint, "--checkpoint");
        SentimentModel sent = load_sentiment_checkpoint(opt.sentiment_path);
        ValuationScorer scorer = load_valuation_checkpoint(opt.valuation_path);
        Vocab vocab = vocab_for(opt, c, cfg);
        SubsetStrategy strategy = parse_strategy(opt.strategy, "sentiment-random");
        auto r = train_stage1(c, vocab, sent, scorer, parse_perspective(opt.perspective), cfg,
                              strategy);
        save_checkpoint(r.model, opt.checkpoint);
        std::cout << "first_loss=" << r.epoch_loss.front() << " final_loss=" << r.epoch_loss.back()
                  << "\n";
        return 0;
    }

    if (cmd == "gen-candidates") {
        Corpus c = require_corpus(opt);
        require(opt.sentiment_path, "--sentiment");
        require(opt.valuation_path, "--valuation");
        require(opt.stage1_path, "--stage1");
        require(opt.out, "--out");
        SentimentModel sent = load_sentiment_checkpoint(opt.sentiment_path);
        ValuationScorer scorer = load_valuation_checkpoint(opt.valuation_path);
        SummarizerModel stage1 = load_summarizer_checkpoint(opt.stage1_path);
        Vocab vocab = vocab_for(opt, c, cfg);
        CandidateStore store = gen_candidates(c, vocab, stage1, sent, scorer,
                                              parse_perspective(opt.perspective), cfg);
        save_candidates(store, opt.out);
        size_t skipped = 0;
        for (const auto& [id, cands] : store)
            if (cands.size() < 2) ++skipped;
        std::cout << "entities=" << store.size() << " skipped_for_stage2=" << skipped << "\n";
        return 0;
    }

    if (cmd == "train-stage2") {
        Corpus c = require_corpus(opt);
        require(opt.sentiment_path, "--sentiment");
        require(opt.valuation_path, "--valuation");
        require(opt.stage1_path, "--stage1");
        require(opt.candidates_path, "--candidates");
        require(opt.checkpoint, "--checkpoint");
        SentimentModel sent = load_sentiment_checkpoint(opt.sentiment_path);
        ValuationScorer scorer = load_valuation_checkpoint(opt.valuation_path);
        SummarizerModel stage1 = load_summarizer_checkpoint(opt.stage1_path);
        Vocab vocab = vocab_for(opt, c, cfg);
        CandidateStore store = load_candidates(opt.candidates_path);
        auto r = train_stage2(c, vocab, stage1, sent, scorer, store,
                              parse_perspective(opt.perspective), cfg);
        save_checkpoint(r.model, opt.checkpoint);
        std::cout << "first_loss=" << r.epoch_loss.front() << " final_loss=" << r.epoch_loss.back()
                  << "\n";
        return 0;
    }

    if (cmd == "summarize") {
        Corpus c = require_corpus(opt);
        ModelBundle bundle = load_bundle(opt);
        Vocab vocab = vocab_for(opt, c, cfg);
        Perspective p = parse_perspective(opt.perspective);
        SubsetStrategy strategy = parse_strategy(opt.strategy);
        std::ofstream out;
        if (!opt.out.empty()) out.open(opt.out);
        for (const Entity& e : c.entities) {
            uint64_t seed = derive_seed(cfg.master_seed, "summarize/" + e.entity_id);
            InferResult r = infer(bundle, vocab, e, p, cfg, c.rating_max, strategy, seed);
            std::string line = infer_audit_json(e.entity_id, p, r);
            if (out.is_open()) out << line << "\n";
            else std::cout << line << "\n";
        }
        return 0;
    }

    if (cmd == "evaluate") {
        Corpus c = require_corpus(opt);
        ModelBundle bundle = load_bundle(opt);
        Vocab vocab = vocab_for(opt, c, cfg);
        MetricsTable table;
        table.rows.push_back(evaluate(bundle, vocab, c, parse_perspective(opt.perspective), cfg,
                                      parse_strategy(opt.strategy)));
        std::cout << table.to_csv();
        if (!opt.out.empty()) {
            write_file(opt.out + ".csv", table.to_csv());
            write_file(opt.out + ".json", table.to_json());
        }
        return 0;
    }

    if (cmd == "compare-strategies") {
        Corpus train = require_corpus(opt);
        require(opt.test_path, "--test");
        Corpus test = load_corpus(opt.test_path, Split::Test);
        require(opt.sentiment_path, "--sentiment");
        require(opt.valuation_path, "--valuation");
        SentimentModel sent = load_sentiment_checkpoint(opt.sentiment_path);
        ValuationScorer scorer = load_valuation_checkpoint(opt.valuation_path);
        Vocab vocab = vocab_for(opt, train, cfg);
        MetricsTable table = compare_strategies(train, test, vocab, sent, scorer,
                                                parse_perspective(opt.perspective), cfg);
        std::cout << table.to_csv();
        if (!opt.out.empty()) {
            write_file(opt.out + ".csv", table.to_csv());
            write_file(opt.out + ".json", table.to_json());
        }
        return 0;
    }

    if (cmd == "ablate") {
        Corpus train = require_corpus(opt);
        require(opt.test_path, "--test");
        Corpus test = load_corpus(opt.test_path, Split::Test);
        require(opt.sentiment_path, "--sentiment");
        require(opt.valuation_path, "--valuation");
        SentimentModel sent = load_sentiment_checkpoint(opt.sentiment_path);
        ValuationScorer scorer = load_valuation_checkpoint(opt.valuation_path);
        Vocab vocab = vocab_for(opt, train, cfg);
        AblationSpec spec;
        spec.skip_stage1 = opt.skip_stage1;
        spec.skip_stage2 = opt.skip_stage2;
        spec.random_in_stage1 = opt.random_in_stage1;
        spec.random_in_stage2 = opt.random_in_stage2;
        spec.strategy_for_inference = parse_strategy(opt.strategy);
        std::string name = spec.skip_stage1 ? "wo-stage1"
                           : spec.skip_stage2 ? "wo-stage2"
                           : spec.random_in_stage1 ? "rand-in-stage1"
                           : spec.random_in_stage2 ? "rand-in-stage2"
                                                   : "full";
        MetricsTable table;
        table.rows.push_back(run_ablation(spec, train, test, vocab, sent, scorer,
                                          parse_perspective(opt.perspective), cfg, name));
        std::cout << table.to_csv();
        if (!opt.out.empty()) {
            write_file(opt.out + ".csv", table.to_csv());
            write_file(opt.out + ".json", table.to_json());
        }
        return 0;
    }

    throw Error("UsageError", "unknown command " + cmd);
}

}  // namespace

int main(int argc, char** argv) {
#ifdef _OPENMP
    if (const char* env = std::getenv("SUBSEL_THREADS")) {
        int n = std::atoi(env);
        if (n > 0) omp_set_num_threads(n);
    }
#endif

    CLI::App app{"SubSumm-style review-subset opinion summarization pipeline"};
    app.require_subcommand(1);
    Options opt;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", opt.config_path, "JSON run configuration");
        sub->add_option("--corpus", opt.corpus_path, "JSONL corpus file");
        sub->add_option("--split", opt.split, "train|dev|test");
        sub->add_option("--perspective", opt.perspective, "pros|cons|verdict");
        sub->add_option("--seed", opt.seed, "master seed (overrides config)");
        sub->add_option("--out", opt.out, "output path");
        sub->add_option("--checkpoint", opt.checkpoint, "model checkpoint path");
        sub->add_option("--vocab", opt.vocab_path, "vocab file (written if absent)");
        return sub;
    };

    add_common(app.add_subcommand("ingest", "validate a corpus file"));
    auto* synth = add_common(app.add_subcommand("synth", "generate a synthetic corpus"));
    synth->add_option("--entities", opt.gen_entities, "entity count");
    synth->add_option("--reviews", opt.gen_reviews, "reviews per entity");
    synth->add_option("--key-reviews", opt.gen_key_reviews, "planted key reviews per polarity");

    add_common(app.add_subcommand("train-sentiment", "train the rating classifier"));
    add_common(app.add_subcommand("train-valuation", "train the information-value scorer"));

    auto with_models = [&](CLI::App* sub) {
        sub->add_option("--sentiment", opt.sentiment_path, "sentiment checkpoint");
        sub->add_option("--valuation", opt.valuation_path, "valuation checkpoint");
        return sub;
    };

    auto* select = with_models(add_common(app.add_subcommand("select", "emit review subsets")));
    select->add_option("--strategy", opt.strategy, "sampling strategy");

    auto* stage1 =
        with_models(add_common(app.add_subcommand("train-stage1", "MLE on re-sampled subsets")));
    stage1->add_option("--strategy", opt.strategy, "subset strategy (default sentiment-random)");

    auto* genc = with_models(
        add_common(app.add_subcommand("gen-candidates", "decode candidate summaries")));
    genc->add_option("--stage1", opt.stage1_path, "stage-I summarizer checkpoint");

    auto* stage2 = with_models(
        add_common(app.add_subcommand("train-stage2", "contrastive multi-task training")));
    stage2->add_option("--stage1", opt.stage1_path, "stage-I summarizer checkpoint");
    stage2->add_option("--candidates", opt.candidates_path, "candidate store JSONL");

    auto* summarize = with_models(add_common(app.add_subcommand("summarize", "run inference")));
    summarize->add_option("--strategy", opt.strategy, "inference subset strategy");

    auto* eval_cmd = with_models(add_common(app.add_subcommand("evaluate", "ROUGE table")));
    eval_cmd->add_option("--strategy", opt.strategy, "inference subset strategy");

    auto* cmp = with_models(
        add_common(app.add_subcommand("compare-strategies", "stage-I strategy comparison")));
    cmp->add_option("--test", opt.test_path, "test corpus JSONL");

    auto* abl = with_models(add_common(app.add_subcommand("ablate", "analysis experiments")));
    abl->add_option("--test", opt.test_path, "test corpus JSONL");
    abl->add_flag("--skip-stage1", opt.skip_stage1, "stage II from a fresh init");
    abl->add_flag("--skip-stage2", opt.skip_stage2, "evaluate the stage-I model");
    abl->add_flag("--random-in-stage1", opt.random_in_stage1, "Random sampling in stage I");
    abl->add_flag("--random-in-stage2", opt.random_in_stage2, "Random subsets in stage II");
    abl->add_option("--strategy", opt.strategy, "inference subset strategy");

    CLI11_PARSE(app, argc, argv);

    try {
        return run(app.get_subcommands().front()->get_name(), opt);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: Internal: " << e.what() << "\n";
        return 1;
    }
}
