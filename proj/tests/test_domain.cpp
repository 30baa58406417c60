#include <doctest.h>

#include <algorithm>
#include <filesystem>

#include "returnguard/datagen.hpp"
#include "returnguard/domain.hpp"

using namespace returnguard;
using namespace returnguard::domain;

namespace {

ProductRecord make_product(const std::string& id) {
    ProductRecord p;
    p.product_id = id;
    p.brand = "Nike";
    p.gender = Gender::Men;
    p.category = "Shoes";
    p.usage = "Sports";
    p.size = "10";
    p.color = "Black";
    p.style_group_id = "S-" + id;
    p.mrp = 129900;
    p.age_days = 12;
    return p;
}

}  // namespace

TEST_CASE("validate_dataset: empty inputs give all-zero counts and no violations") {
    ValidationReport r = validate_dataset({}, Catalog{}, {});
    CHECK(r.n_events == 0);
    CHECK(r.n_products == 0);
    CHECK(r.n_carts == 0);
    CHECK(r.violations.empty());
}

TEST_CASE("validate_dataset: Return without prior Order is exactly one violation") {
    Catalog catalog({make_product("P1")});
    std::vector<InteractionEvent> events = {
        {"U1", "P1", EventKind::Return, 1000},
    };
    ValidationReport r = validate_dataset(events, catalog, {});
    REQUIRE(r.violations.size() == 1);
    CHECK(r.violations[0].kind == kReturnWithoutOrder);

    SUBCASE("an earlier Order resolves it") {
        events.push_back({"U1", "P1", EventKind::Order, 500});
        CHECK(validate_dataset(events, catalog, {}).violations.empty());
    }
    SUBCASE("an Order at the same timestamp does not count as preceding") {
        events.push_back({"U1", "P1", EventKind::Order, 1000});
        CHECK(validate_dataset(events, catalog, {}).violations.size() == 1);
    }
}

TEST_CASE("validate_dataset: referential and label violations") {
    Catalog catalog({make_product("P1")});
    CartRecord cart;
    cart.cart_id = "C1";
    cart.user_id = "U1";
    cart.items = {{"P1", 10}, {"P2", 20}};
    cart.delivery_city = "Pune";
    cart.order_timestamp = 100;
    cart.per_item_returned = std::vector<bool>{true};  // wrong length

    std::vector<InteractionEvent> events = {{"U9", "PX", EventKind::View, 5}};
    ValidationReport r = validate_dataset(events, catalog, {cart});
    REQUIRE(r.violations.size() == 3);
    CHECK(r.violations[0].kind == kUnknownProductEvent);
    CHECK(r.violations[1].kind == kUnknownProductCart);
    CHECK(r.violations[2].kind == kLabelLengthMismatch);
}

TEST_CASE("validate_dataset is order-insensitive over distinct timestamps") {
    Catalog catalog({make_product("P1")});
    std::vector<InteractionEvent> events = {
        {"U1", "P1", EventKind::Order, 100},
        {"U1", "P1", EventKind::Return, 900},
        {"U1", "P1", EventKind::View, 50},
    };
    auto reversed = events;
    std::reverse(reversed.begin(), reversed.end());
    const auto a = validate_dataset(events, catalog, {});
    const auto b = validate_dataset(reversed, catalog, {});
    CHECK(a.violations.empty());
    CHECK(b.violations.empty());
    CHECK(a.to_json() == b.to_json());
}

TEST_CASE("cart label is OR over per_item_returned") {
    CartRecord cart;
    cart.cart_id = "C1";
    cart.items = {{"P1", 1}, {"P2", 2}};
    cart.per_item_returned = std::vector<bool>{false, false};
    CHECK_FALSE(cart.returned());
    cart.per_item_returned = std::vector<bool>{false, true};
    CHECK(cart.returned());
    cart.per_item_returned.reset();
    CHECK_THROWS_AS(cart.returned(), ValidationError);
}

TEST_CASE("dataset serialize-then-parse round trip is field-for-field identical") {
    datagen::GenConfig cfg;
    cfg.n_users = 40;
    cfg.n_products = 60;
    cfg.n_carts = 120;
    auto ds = datagen::generate(cfg);

    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "rg_domain_roundtrip";
    fs::create_directories(dir);
    save_events((dir / "events.jsonl").string(), ds.events);
    save_catalog((dir / "catalog.jsonl").string(), ds.catalog);
    save_carts((dir / "carts.jsonl").string(), ds.carts);

    const auto events = load_events((dir / "events.jsonl").string());
    const auto catalog = load_catalog((dir / "catalog.jsonl").string());
    const auto carts = load_carts((dir / "carts.jsonl").string());

    REQUIRE(events.size() == ds.events.size());
    REQUIRE(catalog.size() == ds.catalog.size());
    REQUIRE(carts.size() == ds.carts.size());
    bool all_equal = true;
    for (std::size_t i = 0; i < events.size(); ++i) {
        all_equal = all_equal && events[i].to_json() == ds.events[i].to_json();
    }
    for (std::size_t i = 0; i < catalog.size(); ++i) {
        all_equal = all_equal && catalog.products()[i].to_json() == ds.catalog.products()[i].to_json();
    }
    for (std::size_t i = 0; i < carts.size(); ++i) {
        all_equal = all_equal && carts[i].to_json() == ds.carts[i].to_json();
    }
    CHECK(all_equal);
    fs::remove_all(dir);
}

TEST_CASE("loaders raise IoError on missing files") {
    CHECK_THROWS_AS(load_events("/nonexistent/events.jsonl"), IoError);
    CHECK_THROWS_AS(load_catalog("/nonexistent/catalog.jsonl"), IoError);
}
