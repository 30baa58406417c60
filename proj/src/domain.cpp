#include "returnguard/domain.hpp"

#include <algorithm>
#include <set>

namespace returnguard::domain {

std::string to_string(Gender g) {
    switch (g) {
        case Gender::Men: return "Men";
        case Gender::Women: return "Women";
        case Gender::Unisex: return "Unisex";
    }
    throw ParseError("bad Gender");
}

std::string to_string(EventKind k) {
    switch (k) {
        case EventKind::View: return "View";
        case EventKind::Click: return "Click";
        case EventKind::CartAdd: return "CartAdd";
        case EventKind::Order: return "Order";
        case EventKind::Return: return "Return";
    }
    throw ParseError("bad EventKind");
}

std::string to_string(Platform p) {
    return p == Platform::App ? "App" : "Web";
}

std::string to_string(PaymentMode m) {
    return m == PaymentMode::Prepaid ? "Prepaid" : "CashOnDelivery";
}

Gender gender_from_string(const std::string& s) {
    if (s == "Men") return Gender::Men;
    if (s == "Women") return Gender::Women;
    if (s == "Unisex") return Gender::Unisex;
    throw ParseError("unknown gender: " + s);
}

EventKind event_kind_from_string(const std::string& s) {
    if (s == "View") return EventKind::View;
    if (s == "Click") return EventKind::Click;
    if (s == "CartAdd") return EventKind::CartAdd;
    if (s == "Order") return EventKind::Order;
    if (s == "Return") return EventKind::Return;
    throw ParseError("unknown event kind: " + s);
}

Platform platform_from_string(const std::string& s) {
    if (s == "App") return Platform::App;
    if (s == "Web") return Platform::Web;
    throw ParseError("unknown platform: " + s);
}

PaymentMode payment_mode_from_string(const std::string& s) {
    if (s == "Prepaid") return PaymentMode::Prepaid;
    if (s == "CashOnDelivery") return PaymentMode::CashOnDelivery;
    throw ParseError("unknown payment mode: " + s);
}

Json ProductRecord::to_json() const {
    return Json{{"product_id", product_id},
                {"brand", brand},
                {"gender", to_string(gender)},
                {"category", category},
                {"usage", usage},
                {"size", size},
                {"color", color},
                {"style_group_id", style_group_id},
                {"mrp", mrp},
                {"age_days", age_days},
                {"returnable_flag", returnable_flag}};
}

ProductRecord ProductRecord::from_json(const Json& j) {
    ProductRecord p;
    p.product_id = j.at("product_id").get<std::string>();
    p.brand = j.at("brand").get<std::string>();
    p.gender = gender_from_string(j.at("gender").get<std::string>());
    p.category = j.at("category").get<std::string>();
    p.usage = j.at("usage").get<std::string>();
    p.size = j.at("size").get<std::string>();
    p.color = j.at("color").get<std::string>();
    p.style_group_id = j.at("style_group_id").get<std::string>();
    p.mrp = j.at("mrp").get<Money>();
    p.age_days = j.at("age_days").get<std::int64_t>();
    p.returnable_flag = j.at("returnable_flag").get<bool>();
    return p;
}

Json InteractionEvent::to_json() const {
    return Json{{"user_id", user_id},
                {"product_id", product_id},
                {"kind", to_string(kind)},
                {"ts", ts}};
}

InteractionEvent InteractionEvent::from_json(const Json& j) {
    InteractionEvent e;
    e.user_id = j.at("user_id").get<std::string>();
    e.product_id = j.at("product_id").get<std::string>();
    e.kind = event_kind_from_string(j.at("kind").get<std::string>());
    e.ts = j.at("ts").get<EpochMs>();
    return e;
}

bool CartRecord::returned() const {
    if (!per_item_returned) throw ValidationError("cart " + cart_id + " has no labels");
    for (bool b : *per_item_returned) {
        if (b) return true;
    }
    return false;
}

Json CartRecord::to_json() const {
    Json items_j = Json::array();
    for (const auto& it : items) {
        items_j.push_back(Json{{"product_id", it.product_id},
                               {"cart_add_timestamp", it.cart_add_timestamp}});
    }
    Json j{{"cart_id", cart_id},
           {"user_id", user_id},
           {"items", items_j},
           {"delivery_city", delivery_city},
           {"platform", to_string(platform)},
           {"order_timestamp", order_timestamp},
           {"payment_mode", to_string(payment_mode)}};
    if (per_item_returned) {
        j["per_item_returned"] = *per_item_returned;
    }
    return j;
}

CartRecord CartRecord::from_json(const Json& j) {
    CartRecord c;
    c.cart_id = j.at("cart_id").get<std::string>();
    c.user_id = j.at("user_id").get<std::string>();
    for (const auto& it : j.at("items")) {
        c.items.push_back(CartItem{it.at("product_id").get<std::string>(),
                                   it.at("cart_add_timestamp").get<EpochMs>()});
    }
    c.delivery_city = j.at("delivery_city").get<std::string>();
    c.platform = platform_from_string(j.at("platform").get<std::string>());
    c.order_timestamp = j.at("order_timestamp").get<EpochMs>();
    c.payment_mode = payment_mode_from_string(j.at("payment_mode").get<std::string>());
    if (j.contains("per_item_returned")) {
        c.per_item_returned = j.at("per_item_returned").get<std::vector<bool>>();
    }
    return c;
}

Catalog::Catalog(std::vector<ProductRecord> products) : products_(std::move(products)) {
    for (std::size_t i = 0; i < products_.size(); ++i) {
        index_.emplace(products_[i].product_id, i);
    }
}

const ProductRecord* Catalog::find(const std::string& product_id) const {
    auto it = index_.find(product_id);
    return it == index_.end() ? nullptr : &products_[it->second];
}

const ProductRecord& Catalog::at(const std::string& product_id) const {
    const ProductRecord* p = find(product_id);
    if (!p) throw ValidationError("unknown product: " + product_id);
    return *p;
}

Json ValidationReport::to_json() const {
    Json v = Json::array();
    for (const auto& x : violations) {
        v.push_back(Json{{"kind", x.kind}, {"detail", x.detail}});
    }
    return Json{{"counts",
                 Json{{"events", n_events},
                      {"products", n_products},
                      {"carts", n_carts},
                      {"users", n_users}}},
                {"violations", v}};
}

ValidationReport validate_dataset(const std::vector<InteractionEvent>& events,
                                  const Catalog& catalog,
                                  const std::vector<CartRecord>& carts) {
    ValidationReport report;
    report.n_events = events.size();
    report.n_products = catalog.size();
    report.n_carts = carts.size();

    auto add = [&](const char* kind, std::string detail) {
        report.violations.push_back(Violation{kind, std::move(detail)});
    };

    std::set<std::string> seen_products;
    // style_group -> fields that must agree (everything except color).
    std::map<std::string, const ProductRecord*> style_rep;
    for (const auto& p : catalog.products()) {
        if (!seen_products.insert(p.product_id).second) {
            add(kDuplicateProduct, p.product_id);
        }
        if (p.mrp <= 0) add(kInvalidMrp, p.product_id);
        if (p.age_days < 0) add(kInvalidAge, p.product_id);
        auto [it, inserted] = style_rep.emplace(p.style_group_id, &p);
        if (!inserted) {
            const ProductRecord& r = *it->second;
            const bool same = r.brand == p.brand && r.gender == p.gender &&
                              r.category == p.category && r.usage == p.usage &&
                              r.size == p.size && r.mrp == p.mrp;
            if (!same) add(kStyleGroupMismatch, p.style_group_id + "/" + p.product_id);
        }
    }

    std::set<std::string> users;
    // (user, product) -> timestamps of orders and returns; sorted later.
    std::map<std::pair<std::string, std::string>, std::pair<std::vector<EpochMs>, std::vector<EpochMs>>>
        pair_events;
    for (const auto& e : events) {
        users.insert(e.user_id);
        if (!catalog.find(e.product_id)) {
            add(kUnknownProductEvent, e.user_id + "/" + e.product_id);
            continue;
        }
        if (e.kind == EventKind::Order) {
            pair_events[{e.user_id, e.product_id}].first.push_back(e.ts);
        } else if (e.kind == EventKind::Return) {
            pair_events[{e.user_id, e.product_id}].second.push_back(e.ts);
        }
    }
    for (auto& [key, oe] : pair_events) {
        auto& [orders, returns] = oe;
        std::sort(orders.begin(), orders.end());
        for (EpochMs r : returns) {
            // A Return needs some strictly earlier Order for the same pair.
            auto it = std::lower_bound(orders.begin(), orders.end(), r);
            if (it == orders.begin()) {
                add(kReturnWithoutOrder, key.first + "/" + key.second);
            }
        }
    }

    for (const auto& c : carts) {
        users.insert(c.user_id);
        if (c.items.empty()) add(kEmptyCart, c.cart_id);
        for (const auto& it : c.items) {
            if (!catalog.find(it.product_id)) {
                add(kUnknownProductCart, c.cart_id + "/" + it.product_id);
            }
        }
        if (c.per_item_returned && c.per_item_returned->size() != c.items.size()) {
            add(kLabelLengthMismatch, c.cart_id);
        }
    }
    report.n_users = users.size();
    return report;
}

std::vector<InteractionEvent> load_events(const std::string& path) {
    std::vector<InteractionEvent> out;
    for_each_jsonl(path, [&](const Json& j) { out.push_back(InteractionEvent::from_json(j)); });
    return out;
}

Catalog load_catalog(const std::string& path) {
    std::vector<ProductRecord> out;
    for_each_jsonl(path, [&](const Json& j) { out.push_back(ProductRecord::from_json(j)); });
    return Catalog(std::move(out));
}

std::vector<CartRecord> load_carts(const std::string& path) {
    std::vector<CartRecord> out;
    for_each_jsonl(path, [&](const Json& j) { out.push_back(CartRecord::from_json(j)); });
    return out;
}

void save_events(const std::string& path, const std::vector<InteractionEvent>& events) {
    JsonlWriter w(path);
    for (const auto& e : events) w.write(e.to_json());
}

void save_catalog(const std::string& path, const Catalog& catalog) {
    JsonlWriter w(path);
    for (const auto& p : catalog.products()) w.write(p.to_json());
}

void save_carts(const std::string& path, const std::vector<CartRecord>& carts) {
    JsonlWriter w(path);
    for (const auto& c : carts) w.write(c.to_json());
}

}  // namespace returnguard::domain
