#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "returnguard/common.hpp"
#include "returnguard/jsonl.hpp"

namespace returnguard::domain {

enum class Gender { Men, Women, Unisex };
enum class EventKind { View, Click, CartAdd, Order, Return };
enum class Platform { App, Web };
enum class PaymentMode { Prepaid, CashOnDelivery };

std::string to_string(Gender g);
std::string to_string(EventKind k);
std::string to_string(Platform p);
std::string to_string(PaymentMode m);
Gender gender_from_string(const std::string& s);
EventKind event_kind_from_string(const std::string& s);
Platform platform_from_string(const std::string& s);
PaymentMode payment_mode_from_string(const std::string& s);

struct ProductRecord {
    std::string product_id;
    std::string brand;
    Gender gender = Gender::Unisex;
    std::string category;
    std::string usage;
    std::string size;
    std::string color;
    std::string style_group_id;  // same style, different colors share it
    Money mrp = 0;
    std::int64_t age_days = 0;
    bool returnable_flag = true;

    Json to_json() const;
    static ProductRecord from_json(const Json& j);
};

struct InteractionEvent {
    std::string user_id;
    std::string product_id;
    EventKind kind = EventKind::View;
    EpochMs ts = 0;

    Json to_json() const;
    static InteractionEvent from_json(const Json& j);
};

struct CartItem {
    std::string product_id;
    EpochMs cart_add_timestamp = 0;
};

struct CartRecord {
    std::string cart_id;
    std::string user_id;
    std::vector<CartItem> items;  // non-empty
    std::string delivery_city;
    Platform platform = Platform::App;
    EpochMs order_timestamp = 0;
    PaymentMode payment_mode = PaymentMode::Prepaid;
    // Label; absent at serving time. Aligned with items when present.
    std::optional<std::vector<bool>> per_item_returned;

    /// Cart-level label: OR over per_item_returned.
    bool returned() const;

    Json to_json() const;
    static CartRecord from_json(const Json& j);
};

/// In-memory catalog with an id index.
class Catalog {
public:
    Catalog() = default;
    explicit Catalog(std::vector<ProductRecord> products);

    const std::vector<ProductRecord>& products() const { return products_; }
    const ProductRecord* find(const std::string& product_id) const;
    const ProductRecord& at(const std::string& product_id) const;
    std::size_t size() const { return products_.size(); }

private:
    std::vector<ProductRecord> products_;
    std::map<std::string, std::size_t> index_;
};

struct Violation {
    std::string kind;
    std::string detail;
};

struct ValidationReport {
    std::size_t n_events = 0;
    std::size_t n_products = 0;
    std::size_t n_carts = 0;
    std::size_t n_users = 0;
    std::vector<Violation> violations;

    bool ok() const { return violations.empty(); }
    Json to_json() const;
};

// Violation kinds emitted by validate_dataset.
inline constexpr const char* kUnknownProductEvent = "UnknownProductEvent";
inline constexpr const char* kUnknownProductCart = "UnknownProductCart";
inline constexpr const char* kReturnWithoutOrder = "ReturnWithoutOrder";
inline constexpr const char* kLabelLengthMismatch = "LabelLengthMismatch";
inline constexpr const char* kEmptyCart = "EmptyCart";
inline constexpr const char* kDuplicateProduct = "DuplicateProduct";
inline constexpr const char* kInvalidMrp = "InvalidMrp";
inline constexpr const char* kInvalidAge = "InvalidAge";
inline constexpr const char* kStyleGroupMismatch = "StyleGroupMismatch";

/// Single pass referential check over an already parsed dataset.
ValidationReport validate_dataset(const std::vector<InteractionEvent>& events,
                                  const Catalog& catalog,
                                  const std::vector<CartRecord>& carts);

// JSONL loaders/savers for the three dataset files.
std::vector<InteractionEvent> load_events(const std::string& path);
Catalog load_catalog(const std::string& path);
std::vector<CartRecord> load_carts(const std::string& path);
void save_events(const std::string& path, const std::vector<InteractionEvent>& events);
void save_catalog(const std::string& path, const Catalog& catalog);
void save_carts(const std::string& path, const std::vector<CartRecord>& carts);

}  // namespace returnguard::domain
