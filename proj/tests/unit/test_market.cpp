#include "doctest.h"
#include "storeoffer/errors.hpp"
#include "storeoffer/market.hpp"

using namespace storeoffer;
using doctest::Approx;

TEST_SUITE("market") {

TEST_CASE("settlement commits an offer at or below the clearing price") {
    OfferBook book;
    book.add(30.0, 5.0);
    CHECK(settle_offer(book, 40.0) == 5.0);
    CHECK(settle_offer(book, 20.0) == 0.0);
    CHECK(settle_offer(book, 30.0) == 5.0);
}

TEST_CASE("settlement sums every cleared offer") {
    OfferBook book;
    book.add(10.0, 1.0);
    book.add(20.0, 2.0);
    book.add(30.0, 4.0);
    CHECK(settle_offer(book, 25.0) == 3.0);
    CHECK(settle_offer(book, 5.0) == 0.0);
    CHECK(book.total_volume() == 7.0);
}

TEST_CASE("offer book drops empty offers and rejects bad ones") {
    OfferBook book;
    book.add(10.0, 0.0);
    CHECK(book.empty());
    book.add(20.0, 1.0);
    CHECK_THROWS_AS(book.add(10.0, 1.0), ValidationError);
    CHECK_THROWS_AS(book.add(30.0, -1.0), ValidationError);
}

TEST_CASE("storage evolution") {
    StorageSpec spec{20.0, 2.0, 10.0, 5.0};
    auto s = evolve_storage(5.0, spec, 3.0, 0.0);
    CHECK(s.next_level == 7.0);
    CHECK(s.charge == 2.0);
    CHECK(s.discharge == 0.0);

    spec = StorageSpec{20.0, 10.0, 10.0, 5.0};
    s = evolve_storage(5.0, spec, 0.0, 3.0);
    CHECK(s.next_level == 2.0);
    CHECK(s.charge == 0.0);
    CHECK(s.discharge == 3.0);

    s = evolve_storage(19.0, spec, 5.0, 0.0);
    CHECK(s.next_level == 20.0);
    CHECK(s.charge == 5.0);
    CHECK(s.discharge == 0.0);
}

TEST_CASE("discharge never exceeds the stored energy") {
    const StorageSpec spec{20.0, 10.0, 10.0, 2.0};
    const auto s = evolve_storage(2.0, spec, 0.0, 8.0);
    CHECK(s.discharge == 2.0);
    CHECK(s.next_level == 0.0);
}

TEST_CASE("over-commitment") {
    CHECK(over_commitment(10.0, 3.0, 4.0, 10.0) == 3.0);
    CHECK(over_commitment(5.0, 3.0, 4.0, 10.0) == 0.0);
    CHECK(over_commitment(10.0, 3.0, 8.0, 2.0) == 5.0);
}

TEST_CASE("slot profit") {
    CHECK(slot_profit(40.0, 5.0, 0.0, PenaltyParams{}) == 200.0);
    CHECK(slot_profit(40.0, 5.0, 2.0, PenaltyParams{1.0, 5.0}) == 110.0);
    CHECK(slot_profit(40.0, 0.0, 0.0, PenaltyParams{}) == 0.0);
}

TEST_CASE("simulate_run") {
    const PriceBounds bounds(10.0, 20.0);
    SUBCASE("single slot, sell everything") {
        const Trace trace({{10.0, 2.0}}, bounds);
        const StorageSpec spec{20.0, 10.0, 10.0, 0.0};
        const auto run = simulate_run(trace, spec, {}, [](const SlotView& v) {
            OfferBook b;
            b.add(v.price, v.renewable + v.level);
            return b;
        });
        CHECK(run.total_profit == 20.0);
        CHECK(run.slots.size() == 1);
    }
    SUBCASE("charge then sell") {
        const Trace trace({{10.0, 1.0}, {20.0, 0.0}}, bounds);
        const StorageSpec spec{1.0, 1.0, 1.0, 0.0};
        const auto run = simulate_run(trace, spec, {}, [](const SlotView& v) {
            OfferBook b;
            if (v.t == 1) b.add(v.price, v.level);
            return b;
        });
        CHECK(run.total_profit == 20.0);
        CHECK(run.slots[0].storage_after == 1.0);
    }
    SUBCASE("zero offers earn nothing") {
        const Trace trace({{10.0, 3.0}, {15.0, 1.0}, {20.0, 4.0}}, bounds);
        const auto run = simulate_run(trace, StorageSpec{}, {}, [](const SlotView&) { return OfferBook{}; });
        CHECK(run.total_profit == 0.0);
    }
    SUBCASE("over-commitment is penalized and only the deliverable part is drawn") {
        const Trace trace({{10.0, 1.0}}, bounds);
        const StorageSpec spec{20.0, 10.0, 10.0, 2.0};
        const auto run = simulate_run(trace, spec, PenaltyParams{1.0, 5.0}, [](const SlotView&) {
            OfferBook b;
            b.add(10.0, 5.0);
            return b;
        });
        CHECK(run.slots[0].over_commitment == 2.0);
        CHECK(run.slots[0].profit == Approx(50.0 - 15.0 * 2.0));
        CHECK(run.slots[0].storage_after == 0.0);
    }
}

TEST_CASE("forecasts must cover every slot") {
    const Trace trace({{10.0, 1.0}, {10.0, 1.0}}, PriceBounds(10.0, 20.0));
    const std::vector<Forecast> forecasts(1);
    CHECK_THROWS_AS(simulate_run(trace, StorageSpec{}, {}, [](const SlotView&) { return OfferBook{}; }, forecasts),
                    ValidationError);
}

TEST_CASE("validation of domain types") {
    CHECK_THROWS_AS(PriceBounds(0.0, 10.0), ValidationError);
    CHECK_THROWS_AS(PriceBounds(20.0, 10.0), ValidationError);
    CHECK_THROWS_AS(Trace({}, PriceBounds(1.0, 2.0)), ValidationError);
    CHECK_THROWS_AS(Trace({{3.0, 1.0}}, PriceBounds(1.0, 2.0)), ValidationError);
    CHECK_THROWS_AS(Trace({{1.5, -1.0}}, PriceBounds(1.0, 2.0)), ValidationError);
    CHECK_THROWS_AS((StorageSpec{20.0, 10.0, 10.0, 25.0}.validate()), ValidationError);
    CHECK_THROWS_AS((StorageSpec{-1.0, 10.0, 10.0, 0.0}.validate()), ValidationError);
    CHECK_THROWS_AS((PenaltyParams{-1.0, 0.0}.validate()), ValidationError);
}

}
