#pragma once

#include <map>
#include <string>
#include <vector>

#include "returnguard/domain.hpp"

namespace returnguard::datagen {

/// Knobs for the planted return drivers. Everything else inside the
/// generator (catalog shape, browsing behavior, city skew) is fixed.
struct GenConfig {
    std::uint64_t seed = 42;
    int n_users = 3000;
    int n_products = 950;  // target; rounded up to whole size/color grids
    int n_carts = 20000;

    // Per-item return probability of an item whose size differs from the
    // user's latent size for that (brand, category).
    double size_mismatch_return_prob = 0.46;
    // Per-item return probability of a size-matched item (scaled further by
    // a per-archetype propensity factor with mean 1).
    double base_return_prob = 0.086;
    // Added to every item of a cart holding >= 2 items of one archetype.
    double similar_item_boost = 0.08;
    // Multiplier applied to the per-item probability, indexed by cart size
    // (entry 0 = size 1). Sizes beyond the end use the last entry.
    std::vector<double> cart_size_curve = {0.5870, 0.6848, 0.7827, 0.9131,
                                           1.0305, 1.1512, 1.1512, 1.1512};

    void validate() const;
};

/// What only the generator knows: the oracle for similarity, sizing and
/// attribution tests. Written as a sidecar JSONL, consumed by tests and by
/// ground_truth_report.
struct GroundTruth {
    int n_archetypes = 0;
    std::map<std::string, std::vector<std::string>> category_scales;
    std::map<std::string, int> product_archetype;
    // user -> ("brand|category" -> size index into that category's scale)
    std::map<std::string, std::map<std::string, int>> user_latent_size;
    std::map<std::string, double> user_mismatch_prob;

    int size_index(const std::string& category, const std::string& size) const;
    bool is_mismatch(const std::string& user_id, const domain::ProductRecord& p) const;
};

struct Dataset {
    domain::Catalog catalog;
    std::vector<domain::InteractionEvent> events;
    std::vector<domain::CartRecord> carts;
    GroundTruth truth;
};

/// Pure function of the config: identical configs give identical datasets.
Dataset generate(const GenConfig& cfg);

struct SizeBucket {
    long total = 0;
    long returned = 0;
};

struct GroundTruthReport {
    std::map<int, SizeBucket> by_cart_size;
    long total_carts = 0;
    long returned_carts = 0;
    long returned_items = 0;
    // Returned items that were size-mismatched / all returned items.
    double size_fit_share = 0.0;
    // Of the returned carts: share containing >= 2 same-archetype items.
    double similar_cart_share = 0.0;
    // Of the returned carts: share containing a same-style different-color pair.
    double color_pair_cart_share = 0.0;

    double return_rate(int cart_size) const;
    double return_rate_above(int cart_size) const;
    Json to_json() const;
};

/// Exact counting over labeled carts; throws ValidationError on a cart
/// without labels.
GroundTruthReport ground_truth_report(const std::vector<domain::CartRecord>& carts,
                                      const domain::Catalog& catalog,
                                      const GroundTruth& truth);

void save_ground_truth(const std::string& path, const GroundTruth& truth);
GroundTruth load_ground_truth(const std::string& path);

}  // namespace returnguard::datagen
