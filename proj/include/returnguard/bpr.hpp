#pragma once

#include <map>
#include <string>
#include <vector>

#include "returnguard/implicit.hpp"

namespace returnguard::bpr {

struct BprConfig {
    int dim = 32;
    double learning_rate = 0.05;
    double lambda_theta = 1e-4;
    int epochs = 30;
    // 0 means "one pass per observed pair per epoch".
    int triplets_per_epoch = 0;
    std::uint64_t seed = 7;
    double init_scale = 0.1;

    void validate() const;
};

/// Binary "observed" view of the implicit ratings: per user, the sorted set
/// of observed item indices over a fixed item universe.
class InteractionMatrix {
public:
    InteractionMatrix() = default;

    /// observed means rating >= threshold (default 0.5, the sigmoid midpoint).
    static InteractionMatrix from_ratings(const std::vector<implicit::Rating>& ratings,
                                          const std::vector<std::string>& item_universe,
                                          double observed_threshold = 0.5);

    /// Directly from index pairs; used by tests and planted benchmarks.
    static InteractionMatrix from_pairs(std::size_t n_users, std::size_t n_items,
                                        const std::vector<std::pair<std::size_t, std::size_t>>& observed,
                                        std::vector<std::string> user_ids = {},
                                        std::vector<std::string> item_ids = {});

    std::size_t n_users() const { return observed_.size(); }
    std::size_t n_items() const { return n_items_; }
    const std::vector<std::string>& user_ids() const { return user_ids_; }
    const std::vector<std::string>& item_ids() const { return item_ids_; }
    const std::vector<std::size_t>& observed_items(std::size_t user) const {
        return observed_[user];
    }
    bool is_observed(std::size_t user, std::size_t item) const;
    const std::vector<std::size_t>& eligible_users() const { return eligible_; }
    std::size_t total_observed() const { return total_observed_; }

private:
    void finalize();

    std::size_t n_items_ = 0;
    std::vector<std::string> user_ids_;
    std::vector<std::string> item_ids_;
    std::vector<std::vector<std::size_t>> observed_;  // sorted per user
    std::vector<std::size_t> eligible_;  // >=1 observed and >=1 unobserved
    std::size_t total_observed_ = 0;
};

/// "user prefers item pos over item neg", all as matrix indices.
struct Triplet {
    std::size_t user = 0;
    std::size_t pos = 0;
    std::size_t neg = 0;
};

struct EmbeddingMatrix {
    int dim = 0;
    std::vector<std::string> user_ids;
    std::vector<std::string> item_ids;
    std::vector<std::vector<double>> user_factors;
    std::vector<std::vector<double>> item_factors;
    std::map<std::string, std::size_t> user_index;
    std::map<std::string, std::size_t> item_index;

    void rebuild_index();
    const std::vector<double>* find_item(const std::string& product_id) const;

    /// <w_u, h_i>; unknown id -> ModelError.
    double affinity(const std::string& user_id, const std::string& item_id) const;
    double affinity_idx(std::size_t user, std::size_t item) const;
    /// Cosine of the two item factors; zero vector or unknown id -> ModelError.
    double similarity(const std::string& item_a, const std::string& item_b) const;

    void save(const std::string& path, std::uint64_t seed) const;
    static EmbeddingMatrix load(const std::string& path);
};

/// Uniform eligible user, uniform observed positive, uniform unobserved
/// negative. No eligible user -> ModelError.
Triplet sample_triplet(const InteractionMatrix& matrix, Rng& rng);

/// Per-triplet loss -ln sigma(x_uij) + lambda (|w_u|^2 + |h_i|^2 + |h_j|^2).
double triplet_loss(const EmbeddingMatrix& emb, const Triplet& t, double lambda_theta);

/// x_uij = <w_u, h_i> - <w_u, h_j>.
double triplet_score(const EmbeddingMatrix& emb, const Triplet& t);

/// One SGD step on the per-triplet loss; updates w_u, h_i, h_j in place.
void bpr_step(EmbeddingMatrix& emb, const Triplet& t, const BprConfig& cfg);

/// Seeded N(0, init_scale^2) factors for the matrix's users/items.
EmbeddingMatrix init_embedding(const InteractionMatrix& matrix, const BprConfig& cfg);

EmbeddingMatrix train(const InteractionMatrix& matrix, const BprConfig& cfg);

}  // namespace returnguard::bpr
