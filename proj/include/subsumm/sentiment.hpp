#pragma once

#include <cstdint>
#include <vector>

#include "subsumm/corpus.hpp"
#include "subsumm/features.hpp"

namespace subsumm {

enum class Polarity { Positive, Negative };

// Positive iff the class lies strictly above the midpoint of [1, rating_max];
// for a 5-point scale classes 4-5 are positive.
inline Polarity polarity_of(int cls, int rating_max) {
    return 2 * cls > rating_max + 1 ? Polarity::Positive : Polarity::Negative;
}

struct SentimentTag {
    int cls = 1;                    // 1-based rating class, argmax of dist
    std::vector<double> dist;       // softmax over classes, sums to 1
    Polarity polarity = Polarity::Negative;
};

// Multinomial logistic regression over hashed text features.
struct SentimentModel {
    int num_classes = 5;
    std::vector<double> weights;  // num_classes x kFeatureDim, row-major
    std::vector<double> bias;     // num_classes

    const double* row(int c) const { return weights.data() + static_cast<size_t>(c) * kFeatureDim; }
    double* row(int c) { return weights.data() + static_cast<size_t>(c) * kFeatureDim; }
};

SentimentModel make_sentiment_model(int num_classes);

std::vector<double> sentiment_distribution(const SentimentModel& model, const FeatureVec& x);
SentimentTag predict_sentiment(const SentimentModel& model, const Review& review, int rating_max);

struct SentimentTrainConfig {
    int epochs = 60;
    int batch_size = 32;
    double learning_rate = 2.0;
    double l2 = 1e-4;
};

struct SentimentExample {
    FeatureVec x;
    int label = 0;  // 0-based class
};

// Mean NLL over the batch plus L2 penalty; gradient in the same layout as the
// model. Exposed for the finite-difference harness.
double sentiment_nll_grad(const SentimentModel& model, const std::vector<SentimentExample>& batch,
                          double l2, SentimentModel* grad);

struct SentimentTrainResult {
    SentimentModel model;
    std::vector<double> epoch_loss;  // fixed-order full-pass loss per epoch
};

SentimentTrainResult train_sentiment(const Corpus& corpus, const SentimentTrainConfig& cfg);

}  // namespace subsumm
