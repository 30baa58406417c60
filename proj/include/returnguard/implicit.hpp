#pragma once

#include <map>
#include <string>
#include <vector>

#include "returnguard/domain.hpp"

namespace returnguard::implicit {

struct SignalCounts {
    long views = 0;
    long clicks = 0;
    long cart_adds = 0;
    long orders = 0;

    bool empty() const { return views == 0 && clicks == 0 && cart_adds == 0 && orders == 0; }
};

struct SignalWeights {
    double w_view = 0.0;
    double w_click = 0.0;
    double w_cart = 0.0;
    double w_order = 0.0;
    double bias = 0.0;

    Json to_json() const;
    static SignalWeights from_json(const Json& j);
};

struct TrainConfig {
    double learning_rate = 0.1;
    int epochs = 500;
    double l2 = 1e-4;
};

struct LabeledPair {
    SignalCounts counts;
    bool ordered = false;
};

struct TrainResult {
    SignalWeights weights;
    std::vector<double> epoch_loss;  // train log-loss after each epoch
};

/// Logistic regression on log-loss by full-batch gradient descent. Features
/// are standardized internally; the returned weights are folded back into
/// raw count space so rate() applies them directly.
TrainResult learn_weights_detailed(const std::vector<LabeledPair>& pairs,
                                   const TrainConfig& cfg = {});
SignalWeights learn_weights(const std::vector<LabeledPair>& pairs, const TrainConfig& cfg = {});

/// sigmoid(bias + w . counts), always in (0,1).
double rate(const SignalCounts& counts, const SignalWeights& weights);

/// Log-loss of the weights over a labeled set (used by tests and training).
double log_loss(const std::vector<LabeledPair>& pairs, const SignalWeights& weights);

using PairKey = std::pair<std::string, std::string>;  // (user_id, product_id)

/// Per-pair signal counts from events with ts < cutoff (no cutoff when 0).
std::map<PairKey, SignalCounts> count_signals(const std::vector<domain::InteractionEvent>& events,
                                              EpochMs cutoff = 0);

/// Training pairs for the signal classifier: counts from the first
/// `split_fraction` of the event time range, label = Order event for the
/// pair in the remainder. Pairs with no early-window interaction are dropped.
std::vector<LabeledPair> build_training_pairs(const std::vector<domain::InteractionEvent>& events,
                                              double split_fraction = 0.7);

struct Rating {
    std::string user_id;
    std::string product_id;
    double rating = 0.0;
};

/// Ratings for every pair with at least one interaction, sorted by
/// (user_id, product_id).
std::vector<Rating> build_ratings(const std::vector<domain::InteractionEvent>& events,
                                  const SignalWeights& weights);

void save_ratings(const std::string& path, const std::vector<Rating>& ratings);
std::vector<Rating> load_ratings(const std::string& path);

}  // namespace returnguard::implicit
