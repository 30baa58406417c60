#include "returnguard/datagen.hpp"

#include <algorithm>
#include <array>
#include <set>

namespace returnguard::datagen {

using domain::CartItem;
using domain::CartRecord;
using domain::Catalog;
using domain::EventKind;
using domain::Gender;
using domain::InteractionEvent;
using domain::PaymentMode;
using domain::Platform;
using domain::ProductRecord;

namespace {

constexpr EpochMs kEpochEnd = 1751241600000LL;  // 2025-06-30T00:00:00Z
constexpr EpochMs kHistoryDays = 320;

const std::vector<std::string> kBrands = {"Nike", "Adidas", "Puma", "Levis", "Zara"};
// Brands cut small/large relative to the category scale.
const std::map<std::string, int> kBrandSizeOffset = {
    {"Nike", 0}, {"Adidas", 1}, {"Puma", -1}, {"Levis", 0}, {"Zara", 1}};

const std::map<std::string, std::vector<std::string>> kCategoryScales = {
    {"Shoes", {"6", "7", "8", "9", "10", "11"}},
    {"Tshirts", {"XS", "S", "M", "L", "XL", "XXL"}},
    {"Jeans", {"28", "30", "32", "34", "36", "38"}},
    {"Jackets", {"S", "M", "L", "XL"}}};
const std::vector<std::string> kCategories = {"Shoes", "Tshirts", "Jeans", "Jackets"};

const std::vector<std::string> kUsages = {"Sports", "Casual", "Formal"};
const std::vector<std::string> kColors = {"Black", "White", "Blue", "Red", "Green"};
const std::vector<std::string> kCities = {"Bangalore", "Mumbai", "Delhi",  "Chennai",
                                          "Hyderabad", "Pune",   "Kolkata", "Jaipur",
                                          "Lucknow",   "Indore", "Kochi",  "Guwahati"};
// Skewed so the 65th-percentile encoder rule has a long tail to cut.
const std::vector<double> kCityWeights = {22, 18, 16, 10, 9, 8, 6, 4, 3, 2, 1, 1};

constexpr int kNumArchetypes = 24;
// Archetype-level propensity on the non-size return term, mean 1.
constexpr std::array<double, 5> kArchetypeFactor = {0.6, 0.8, 1.0, 1.2, 1.4};

constexpr double kColorPairProb = 0.019;    // carts of size >= 2
constexpr double kSimilarPairProb = 0.021;  // carts of size >= 2

const std::vector<double> kCartSizeWeights = {0.30, 0.20, 0.15, 0.10, 0.10, 0.08, 0.05, 0.02};
const std::vector<double> kMismatchGroups = {0.06, 0.18, 0.30};
const std::vector<double> kMismatchGroupWeights = {0.25, 0.50, 0.25};

struct Design {
    int id;
    std::string brand;
    Gender gender;
    std::string category;
    std::string usage;
    int archetype;
    Money base_mrp;
    std::int64_t age_days;
    // per size index, per color slot -> catalog product index
    std::vector<std::vector<int>> products;
    std::vector<std::vector<std::string>> colors;  // chosen palette per size
};

struct User {
    std::string id;
    Gender gender;
    std::string city;
    Platform platform;
    double prepaid_affinity;
    double mismatch_prob;
    std::map<std::string, int> latent_size;  // "brand|category" -> scale index
    std::vector<int> preferred_designs;
    std::vector<int> preferred_archetypes;
};

int pick_weighted(Rng& rng, const std::vector<double>& weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    double x = rng.uniform() * total;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        x -= weights[i];
        if (x < 0.0) return static_cast<int>(i);
    }
    return static_cast<int>(weights.size()) - 1;
}

double clamp01(double x) { return std::min(1.0, std::max(0.0, x)); }

std::string latent_key(const std::string& brand, const std::string& category) {
    return brand + "|" + category;
}

double archetype_factor(int archetype) {
    return kArchetypeFactor[static_cast<std::size_t>(archetype) % kArchetypeFactor.size()];
}

bool gender_ok(Gender design, Gender user) {
    return design == Gender::Unisex || design == user;
}

int event_rank(EventKind k) { return static_cast<int>(k); }

}  // namespace

void GenConfig::validate() const {
    if (n_users <= 0 || n_products <= 0 || n_carts <= 0) {
        throw ConfigError("datagen: counts must be > 0");
    }
    for (double p : {size_mismatch_return_prob, base_return_prob, similar_item_boost}) {
        if (p < 0.0 || p > 1.0) throw ConfigError("datagen: probabilities must be in [0,1]");
    }
    if (cart_size_curve.empty()) throw ConfigError("datagen: cart_size_curve empty");
    for (std::size_t i = 0; i < cart_size_curve.size(); ++i) {
        if (cart_size_curve[i] < 0.0) throw ConfigError("datagen: curve must be >= 0");
        if (i > 0 && cart_size_curve[i] < cart_size_curve[i - 1]) {
            throw ConfigError("datagen: cart_size_curve must be non-decreasing");
        }
    }
}

int GroundTruth::size_index(const std::string& category, const std::string& size) const {
    auto it = category_scales.find(category);
    if (it == category_scales.end()) throw ValidationError("unknown category: " + category);
    const auto& scale = it->second;
    for (std::size_t i = 0; i < scale.size(); ++i) {
        if (scale[i] == size) return static_cast<int>(i);
    }
    throw ValidationError("size " + size + " not in scale of " + category);
}

bool GroundTruth::is_mismatch(const std::string& user_id, const ProductRecord& p) const {
    auto uit = user_latent_size.find(user_id);
    if (uit == user_latent_size.end()) return false;
    auto kit = uit->second.find(latent_key(p.brand, p.category));
    if (kit == uit->second.end()) return false;
    return size_index(p.category, p.size) != kit->second;
}

Dataset generate(const GenConfig& cfg) {
    cfg.validate();
    Rng rng(cfg.seed);

    Dataset ds;
    ds.truth.n_archetypes = kNumArchetypes;
    ds.truth.category_scales = kCategoryScales;

    // ---- catalog: designs x full size scale x 3 colors -------------------
    std::vector<Design> designs;
    std::vector<ProductRecord> products;
    int design_id = 0;
    while (static_cast<int>(products.size()) < cfg.n_products) {
        Design d;
        d.id = design_id;
        d.brand = kBrands[rng.below(kBrands.size())];
        d.category = kCategories[rng.below(kCategories.size())];
        d.usage = kUsages[rng.below(kUsages.size())];
        const double g = rng.uniform();
        d.gender = g < 0.4 ? Gender::Men : (g < 0.8 ? Gender::Women : Gender::Unisex);
        d.archetype = design_id % kNumArchetypes;
        d.base_mrp = static_cast<Money>(300 + rng.below(3000)) * 100;
        d.age_days = static_cast<std::int64_t>(rng.below(400));

        const auto& scale = kCategoryScales.at(d.category);
        d.products.resize(scale.size());
        d.colors.resize(scale.size());
        for (std::size_t s = 0; s < scale.size(); ++s) {
            std::vector<std::string> palette = kColors;
            rng.shuffle(palette);
            palette.resize(3);
            const std::string style_group =
                "S" + std::to_string(design_id) + "-" + std::to_string(s);
            const Money mrp = d.base_mrp + static_cast<Money>(s) * 500;
            for (const auto& color : palette) {
                ProductRecord p;
                p.product_id = "P" + std::to_string(products.size());
                p.brand = d.brand;
                p.gender = d.gender;
                p.category = d.category;
                p.usage = d.usage;
                p.size = scale[s];
                p.color = color;
                p.style_group_id = style_group;
                p.mrp = mrp;
                p.age_days = d.age_days;
                p.returnable_flag = rng.uniform() >= 0.02;
                ds.truth.product_archetype[p.product_id] = d.archetype;
                d.products[s].push_back(static_cast<int>(products.size()));
                d.colors[s].push_back(color);
                products.push_back(std::move(p));
            }
        }
        designs.push_back(std::move(d));
        ++design_id;
    }
    ds.catalog = Catalog(products);

    // Zipf-ish popularity over designs.
    std::vector<double> design_pop(designs.size());
    for (std::size_t i = 0; i < designs.size(); ++i) {
        design_pop[i] = 1.0 / std::pow(1.0 + static_cast<double>(i), 0.7);
    }

    // ---- users -----------------------------------------------------------
    std::vector<User> users;
    users.reserve(static_cast<std::size_t>(cfg.n_users));
    for (int ui = 0; ui < cfg.n_users; ++ui) {
        User u;
        u.id = "U" + std::to_string(ui);
        u.gender = rng.uniform() < 0.5 ? Gender::Men : Gender::Women;
        u.city = kCities[pick_weighted(rng, kCityWeights)];
        u.platform = rng.uniform() < 0.7 ? Platform::App : Platform::Web;
        u.prepaid_affinity = 0.3 + 0.55 * rng.uniform();
        u.mismatch_prob = kMismatchGroups[pick_weighted(rng, kMismatchGroupWeights)];

        // Base body size per category; brand offset shifts the label.
        std::map<std::string, int> base_idx;
        for (const auto& [cat, scale] : kCategoryScales) {
            const int mid = static_cast<int>(scale.size()) / 2;
            int idx = mid + static_cast<int>(std::llround(rng.normal(0.0, 1.0)));
            idx = std::clamp(idx, 0, static_cast<int>(scale.size()) - 1);
            base_idx[cat] = idx;
        }
        for (const auto& brand : kBrands) {
            for (const auto& [cat, scale] : kCategoryScales) {
                int idx = base_idx[cat] + kBrandSizeOffset.at(brand);
                idx = std::clamp(idx, 0, static_cast<int>(scale.size()) - 1);
                u.latent_size[latent_key(brand, cat)] = idx;
            }
        }

        for (int k = 0; k < 3; ++k) {
            u.preferred_archetypes.push_back(static_cast<int>(rng.below(kNumArchetypes)));
        }
        std::set<std::string> pref_brandcats;
        while (pref_brandcats.size() < 3) {
            pref_brandcats.insert(latent_key(kBrands[rng.below(kBrands.size())],
                                             kCategories[rng.below(kCategories.size())]));
        }

        std::vector<double> w(designs.size(), 0.0);
        for (std::size_t di = 0; di < designs.size(); ++di) {
            const Design& d = designs[di];
            if (!gender_ok(d.gender, u.gender)) continue;
            double weight = design_pop[di];
            if (std::find(u.preferred_archetypes.begin(), u.preferred_archetypes.end(),
                          d.archetype) != u.preferred_archetypes.end()) {
                weight *= 8.0;
            }
            if (pref_brandcats.count(latent_key(d.brand, d.category))) weight *= 8.0;
            w[di] = weight;
        }
        std::set<int> chosen;
        int guard = 0;
        while (chosen.size() < 10 && guard++ < 500) {
            chosen.insert(pick_weighted(rng, w));
        }
        u.preferred_designs.assign(chosen.begin(), chosen.end());

        ds.truth.user_latent_size[u.id] = u.latent_size;
        ds.truth.user_mismatch_prob[u.id] = u.mismatch_prob;
        users.push_back(std::move(u));
    }

    const EpochMs t_start = kEpochEnd - kHistoryDays * kMsPerDay;

    auto pick_size_index = [&](const User& u, const Design& d, bool mismatch) {
        const auto& scale = kCategoryScales.at(d.category);
        const int latent = u.latent_size.at(latent_key(d.brand, d.category));
        if (!mismatch) return latent;
        std::vector<int> candidates;
        if (latent - 1 >= 0) candidates.push_back(latent - 1);
        if (latent + 1 < static_cast<int>(scale.size())) candidates.push_back(latent + 1);
        return candidates[rng.below(candidates.size())];
    };

    auto product_of = [&](const Design& d, int size_idx, int color_idx) -> const ProductRecord& {
        return ds.catalog.products()[static_cast<std::size_t>(d.products[size_idx][color_idx])];
    };

    // ---- browsing sessions (views / clicks / abandoned cart-adds) --------
    std::vector<InteractionEvent> events;
    for (const auto& u : users) {
        const int n_sessions = 5 + static_cast<int>(rng.below(6));
        for (int s = 0; s < n_sessions; ++s) {
            const EpochMs session_ts =
                t_start + static_cast<EpochMs>(rng.below(static_cast<std::uint64_t>(
                              (kHistoryDays - 5) * kMsPerDay)));
            const int n_views = 3 + static_cast<int>(rng.below(6));
            for (int v = 0; v < n_views; ++v) {
                int di;
                if (!u.preferred_designs.empty() && rng.uniform() < 0.8) {
                    di = u.preferred_designs[rng.below(u.preferred_designs.size())];
                } else {
                    di = pick_weighted(rng, design_pop);
                }
                const Design& d = designs[static_cast<std::size_t>(di)];
                const bool jitter = rng.uniform() < 0.3;
                const int size_idx = pick_size_index(u, d, jitter);
                const int color_idx = static_cast<int>(rng.below(d.colors[size_idx].size()));
                const ProductRecord& p = product_of(d, size_idx, color_idx);
                const EpochMs ts = session_ts + static_cast<EpochMs>(v) * 120000;
                events.push_back({u.id, p.product_id, EventKind::View, ts});
                if (rng.uniform() < 0.5) {
                    events.push_back({u.id, p.product_id, EventKind::Click, ts + 20000});
                    if (rng.uniform() < 0.25) {
                        events.push_back({u.id, p.product_id, EventKind::CartAdd, ts + 40000});
                    }
                }
            }
        }
    }

    // ---- carts ------------------------------------------------------------
    struct CartSeed {
        int user;
        EpochMs order_ts;
        int size;
    };
    std::vector<CartSeed> seeds;
    seeds.reserve(static_cast<std::size_t>(cfg.n_carts));
    for (int c = 0; c < cfg.n_carts; ++c) {
        CartSeed s;
        s.user = static_cast<int>(rng.below(static_cast<std::uint64_t>(cfg.n_users)));
        s.order_ts = t_start + 30 * kMsPerDay +
                     static_cast<EpochMs>(rng.below(static_cast<std::uint64_t>(
                         (kHistoryDays - 50) * kMsPerDay)));
        s.size = 1 + pick_weighted(rng, kCartSizeWeights);
        seeds.push_back(s);
    }
    std::stable_sort(seeds.begin(), seeds.end(),
                     [](const CartSeed& a, const CartSeed& b) { return a.order_ts < b.order_ts; });

    const auto curve_at = [&](int n) {
        const std::size_t i =
            std::min(static_cast<std::size_t>(n - 1), cfg.cart_size_curve.size() - 1);
        return cfg.cart_size_curve[i];
    };

    for (std::size_t ci = 0; ci < seeds.size(); ++ci) {
        const CartSeed& seed = seeds[ci];
        const User& u = users[static_cast<std::size_t>(seed.user)];
        const int n = seed.size;

        struct PickedItem {
            int design;
            int size_idx;
            int color_idx;
            bool mismatch;
        };
        std::vector<PickedItem> picked;
        std::set<int> used_archetypes;
        std::set<int> used_designs;

        auto pick_design = [&]() {
            for (int attempt = 0; attempt < 20; ++attempt) {
                int di;
                if (!u.preferred_designs.empty() && rng.uniform() < 0.8) {
                    di = u.preferred_designs[rng.below(u.preferred_designs.size())];
                } else {
                    di = pick_weighted(rng, design_pop);
                }
                const Design& d = designs[static_cast<std::size_t>(di)];
                if (!gender_ok(d.gender, u.gender) && attempt < 19) continue;
                if ((used_designs.count(di) || used_archetypes.count(d.archetype)) &&
                    attempt < 19) {
                    continue;
                }
                return di;
            }
            return u.preferred_designs.empty() ? 0 : u.preferred_designs[0];
        };

        for (int i = 0; i < n; ++i) {
            const int di = pick_design();
            const Design& d = designs[static_cast<std::size_t>(di)];
            const bool mismatch = rng.uniform() < u.mismatch_prob;
            const int size_idx = pick_size_index(u, d, mismatch);
            const int color_idx = static_cast<int>(rng.below(d.colors[size_idx].size()));
            used_designs.insert(di);
            used_archetypes.insert(d.archetype);
            picked.push_back({di, size_idx, color_idx, mismatch});
        }

        // Planted composition effects (carts of size >= 2).
        if (n >= 2) {
            const double r = rng.uniform();
            if (r < kColorPairProb) {
                // Same design and size as item 0, different color.
                const PickedItem& a = picked[0];
                const Design& d = designs[static_cast<std::size_t>(a.design)];
                int color = static_cast<int>(rng.below(d.colors[a.size_idx].size() - 1));
                if (color >= a.color_idx) ++color;
                picked[1] = {a.design, a.size_idx, color, a.mismatch};
            } else if (r < kColorPairProb + kSimilarPairProb) {
                // Different design sharing item 0's archetype.
                const Design& d0 = designs[static_cast<std::size_t>(picked[0].design)];
                std::vector<int> same_arch;
                for (const auto& d : designs) {
                    if (d.archetype == d0.archetype && d.id != d0.id &&
                        gender_ok(d.gender, u.gender)) {
                        same_arch.push_back(d.id);
                    }
                }
                if (!same_arch.empty()) {
                    const int di = same_arch[rng.below(same_arch.size())];
                    const Design& d = designs[static_cast<std::size_t>(di)];
                    const bool mismatch = rng.uniform() < u.mismatch_prob;
                    const int size_idx = pick_size_index(u, d, mismatch);
                    const int color_idx = static_cast<int>(rng.below(d.colors[size_idx].size()));
                    picked[1] = {di, size_idx, color_idx, mismatch};
                }
            }
        }

        // Group items by brand+category so per-user token sequences stay
        // locally coherent, then assign increasing cart-add times.
        std::stable_sort(picked.begin(), picked.end(), [&](const PickedItem& a, const PickedItem& b) {
            const Design& da = designs[static_cast<std::size_t>(a.design)];
            const Design& db = designs[static_cast<std::size_t>(b.design)];
            return latent_key(da.brand, da.category) < latent_key(db.brand, db.category);
        });

        std::map<int, int> archetype_count;
        for (const auto& it : picked) {
            archetype_count[designs[static_cast<std::size_t>(it.design)].archetype]++;
        }
        bool similar_cart = false;
        for (const auto& [a, cnt] : archetype_count) {
            if (cnt >= 2) similar_cart = true;
        }

        CartRecord cart;
        cart.cart_id = "C" + std::to_string(ci);
        cart.user_id = u.id;
        cart.delivery_city = u.city;
        cart.platform = rng.uniform() < 0.9 ? u.platform
                                            : (u.platform == Platform::App ? Platform::Web
                                                                           : Platform::App);
        cart.order_timestamp = seed.order_ts;
        cart.payment_mode = rng.uniform() < u.prepaid_affinity ? PaymentMode::Prepaid
                                                               : PaymentMode::CashOnDelivery;

        std::vector<bool> labels;
        for (int i = 0; i < n; ++i) {
            const PickedItem& it = picked[static_cast<std::size_t>(i)];
            const Design& d = designs[static_cast<std::size_t>(it.design)];
            const ProductRecord& p = product_of(d, it.size_idx, it.color_idx);
            const EpochMs add_ts =
                seed.order_ts - static_cast<EpochMs>(n - i) * 600000 -
                static_cast<EpochMs>(rng.below(300000));
            cart.items.push_back(CartItem{p.product_id, add_ts});

            events.push_back({u.id, p.product_id, EventKind::View, add_ts - 3600000});
            events.push_back({u.id, p.product_id, EventKind::Click, add_ts - 1800000});
            events.push_back({u.id, p.product_id, EventKind::CartAdd, add_ts});
            events.push_back({u.id, p.product_id, EventKind::Order, seed.order_ts});

            const double term = it.mismatch
                                    ? cfg.size_mismatch_return_prob
                                    : cfg.base_return_prob * archetype_factor(d.archetype);
            const double boost = similar_cart ? cfg.similar_item_boost : 0.0;
            const double p_ret = clamp01(curve_at(n) * (term + boost));
            const bool ret = rng.uniform() < p_ret;
            labels.push_back(ret);
            if (ret) {
                const EpochMs ret_ts = seed.order_ts +
                                       (3 + static_cast<EpochMs>(rng.below(13))) * kMsPerDay +
                                       static_cast<EpochMs>(rng.below(kMsPerDay));
                events.push_back({u.id, p.product_id, EventKind::Return, ret_ts});
            }
        }
        cart.per_item_returned = labels;
        ds.carts.push_back(std::move(cart));
    }

    std::stable_sort(events.begin(), events.end(),
                     [](const InteractionEvent& a, const InteractionEvent& b) {
                         if (a.ts != b.ts) return a.ts < b.ts;
                         if (a.user_id != b.user_id) return a.user_id < b.user_id;
                         if (a.product_id != b.product_id) return a.product_id < b.product_id;
                         return event_rank(a.kind) < event_rank(b.kind);
                     });
    ds.events = std::move(events);
    return ds;
}

double GroundTruthReport::return_rate(int cart_size) const {
    auto it = by_cart_size.find(cart_size);
    if (it == by_cart_size.end() || it->second.total == 0) return 0.0;
    return static_cast<double>(it->second.returned) / static_cast<double>(it->second.total);
}

double GroundTruthReport::return_rate_above(int cart_size) const {
    long total = 0, returned = 0;
    for (const auto& [size, b] : by_cart_size) {
        if (size > cart_size) {
            total += b.total;
            returned += b.returned;
        }
    }
    return total == 0 ? 0.0 : static_cast<double>(returned) / static_cast<double>(total);
}

Json GroundTruthReport::to_json() const {
    Json sizes = Json::object();
    for (const auto& [size, b] : by_cart_size) {
        sizes[std::to_string(size)] =
            Json{{"total", b.total},
                 {"returned", b.returned},
                 {"rate", b.total == 0 ? 0.0
                                       : static_cast<double>(b.returned) /
                                             static_cast<double>(b.total)}};
    }
    return Json{{"total_carts", total_carts},
                {"returned_carts", returned_carts},
                {"returned_items", returned_items},
                {"by_cart_size", sizes},
                {"size_fit_share", size_fit_share},
                {"similar_cart_share", similar_cart_share},
                {"color_pair_cart_share", color_pair_cart_share}};
}

GroundTruthReport ground_truth_report(const std::vector<CartRecord>& carts,
                                      const Catalog& catalog,
                                      const GroundTruth& truth) {
    GroundTruthReport rep;
    long mismatched_returned_items = 0;
    long similar_returned_carts = 0;
    long color_returned_carts = 0;

    for (const auto& cart : carts) {
        if (!cart.per_item_returned) {
            throw ValidationError("ground_truth_report: cart " + cart.cart_id + " unlabeled");
        }
        const auto& labels = *cart.per_item_returned;
        if (labels.size() != cart.items.size()) {
            throw ValidationError("ground_truth_report: label length mismatch in " + cart.cart_id);
        }
        rep.total_carts++;
        const int n = static_cast<int>(cart.items.size());
        auto& bucket = rep.by_cart_size[n];
        bucket.total++;
        const bool cart_returned = cart.returned();
        if (cart_returned) {
            bucket.returned++;
            rep.returned_carts++;
        }

        std::map<int, int> arch_count;
        std::map<std::string, int> style_count;
        for (std::size_t i = 0; i < cart.items.size(); ++i) {
            const ProductRecord& p = catalog.at(cart.items[i].product_id);
            auto ait = truth.product_archetype.find(p.product_id);
            if (ait != truth.product_archetype.end()) arch_count[ait->second]++;
            style_count[p.style_group_id]++;
            if (labels[i]) {
                rep.returned_items++;
                if (truth.is_mismatch(cart.user_id, p)) mismatched_returned_items++;
            }
        }
        if (cart_returned) {
            bool similar = false, color = false;
            for (const auto& [a, cnt] : arch_count) {
                if (cnt >= 2) similar = true;
            }
            for (const auto& [s, cnt] : style_count) {
                if (cnt >= 2) color = true;
            }
            if (similar) similar_returned_carts++;
            if (color) color_returned_carts++;
        }
    }

    rep.size_fit_share = rep.returned_items == 0
                             ? 0.0
                             : static_cast<double>(mismatched_returned_items) /
                                   static_cast<double>(rep.returned_items);
    rep.similar_cart_share = rep.returned_carts == 0
                                 ? 0.0
                                 : static_cast<double>(similar_returned_carts) /
                                       static_cast<double>(rep.returned_carts);
    rep.color_pair_cart_share = rep.returned_carts == 0
                                    ? 0.0
                                    : static_cast<double>(color_returned_carts) /
                                          static_cast<double>(rep.returned_carts);
    return rep;
}

void save_ground_truth(const std::string& path, const GroundTruth& truth) {
    JsonlWriter w(path);
    Json scales = Json::object();
    for (const auto& [cat, scale] : truth.category_scales) scales[cat] = scale;
    w.write(Json{{"kind", "meta"},
                 {"n_archetypes", truth.n_archetypes},
                 {"category_scales", scales}});
    for (const auto& [pid, arch] : truth.product_archetype) {
        w.write(Json{{"kind", "product"}, {"product_id", pid}, {"archetype", arch}});
    }
    for (const auto& [uid, sizes] : truth.user_latent_size) {
        Json latent = Json::object();
        for (const auto& [k, v] : sizes) latent[k] = v;
        w.write(Json{{"kind", "user"},
                     {"user_id", uid},
                     {"latent_sizes", latent},
                     {"mismatch_prob", truth.user_mismatch_prob.at(uid)}});
    }
}

GroundTruth load_ground_truth(const std::string& path) {
    GroundTruth truth;
    for_each_jsonl(path, [&](const Json& j) {
        const std::string kind = j.at("kind").get<std::string>();
        if (kind == "meta") {
            truth.n_archetypes = j.at("n_archetypes").get<int>();
            for (const auto& [cat, scale] : j.at("category_scales").items()) {
                truth.category_scales[cat] = scale.get<std::vector<std::string>>();
            }
        } else if (kind == "product") {
            truth.product_archetype[j.at("product_id").get<std::string>()] =
                j.at("archetype").get<int>();
        } else if (kind == "user") {
            const std::string uid = j.at("user_id").get<std::string>();
            for (const auto& [k, v] : j.at("latent_sizes").items()) {
                truth.user_latent_size[uid][k] = v.get<int>();
            }
            truth.user_mismatch_prob[uid] = j.at("mismatch_prob").get<double>();
        } else {
            throw ParseError("ground truth: unknown kind " + kind);
        }
    });
    return truth;
}

}  // namespace returnguard::datagen
