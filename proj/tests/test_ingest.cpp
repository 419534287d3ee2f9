#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <string>

#include "switchlab/errors.hpp"
#include "switchlab/experiment.hpp"
#include "switchlab/ingest.hpp"
#include "switchlab/processes.hpp"
#include "switchlab/stats.hpp"

using namespace switchlab;
using ingest::TickRecord;
using ingest::TickSeries;

namespace {

TickSeries parse_string(const std::string& text, char delim = ',') {
    std::istringstream in(text);
    ingest::ParseOptions opt;
    opt.delimiter = delim;
    return ingest::parse_ticks(in, opt);
}

void expect_error_at_line(const std::string& text, long line) {
    try {
        (void)parse_string(text);
        FAIL("expected data_error");
    } catch (const data_error& e) {
        CHECK(std::string(e.what()).find("line " + std::to_string(line)) != std::string::npos);
    }
}

}  // namespace

TEST_CASE("parse_ticks hand cases") {
    SUBCASE("header only gives an empty series") {
        const auto s = parse_string("timestamp,price,volume\n");
        CHECK(s.records.empty());
        CHECK(s.price_increments.empty());
    }
    SUBCASE("tau derives from timestamp differences, zeros preserved") {
        const auto s = parse_string(
            "timestamp,price,volume\n1000,10.5,1\n1000,10.75,2\n1500,10.25,3\n");
        REQUIRE(s.records.size() == 3);
        REQUIRE(s.intertrade_ms.size() == 2);
        CHECK(s.intertrade_ms[0] == 0.0);
        CHECK(s.intertrade_ms[1] == 500.0);
        CHECK(s.price_increments[0] == doctest::Approx(0.25));
        CHECK(s.volumes[0] == 2.0);
        CHECK(s.volumes[1] == 3.0);
    }
    SUBCASE("CRLF endings parse identically") {
        const auto s = parse_string("timestamp,price,volume\r\n5,1.5,2\r\n7,1.25,1\r\n");
        REQUIRE(s.records.size() == 2);
        CHECK(s.intertrade_ms[0] == 2.0);
    }
    SUBCASE("custom delimiter") {
        const auto s = parse_string("timestamp;price;volume\n5;1.5;2\n", ';');
        REQUIRE(s.records.size() == 1);
        CHECK(s.records[0].price == 1.5);
    }
}

TEST_CASE("parse_ticks error reporting names the line") {
    SUBCASE("bad header") {
        expect_error_at_line("time,price,volume\n1,2,3\n", 1);
    }
    SUBCASE("non-positive price") {
        expect_error_at_line("timestamp,price,volume\n1000,10,1\n1001,-1,1\n", 3);
    }
    SUBCASE("non-positive volume") {
        expect_error_at_line("timestamp,price,volume\n1000,10,0\n", 2);
    }
    SUBCASE("malformed number") {
        expect_error_at_line("timestamp,price,volume\n1000,abc,1\n", 2);
    }
    SUBCASE("wrong field count") {
        expect_error_at_line("timestamp,price,volume\n1000,10\n", 2);
    }
    SUBCASE("decreasing timestamps") {
        expect_error_at_line("timestamp,price,volume\n1000,10,1\n999,11,1\n", 3);
    }
    SUBCASE("missing header") {
        std::istringstream empty("");
        CHECK_THROWS_AS((void)ingest::parse_ticks(empty), data_error);
    }
}

TEST_CASE("serialize/parse round trip preserves every derived series") {
    std::mt19937_64 engine(424242);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<TickRecord> records;
    std::int64_t ts = 1700000000000;
    double price = 12345.625;
    for (int i = 0; i < 5000; ++i) {
        if (unif(engine) > 0.3) ts += static_cast<std::int64_t>(unif(engine) * 2000.0);
        price = std::max(0.125, price + (unif(engine) - 0.5) * 0.7918245);
        records.push_back({ts, price, std::floor(unif(engine) * 50.0) + 1.0});
    }
    const auto original = ingest::make_series(records);

    std::ostringstream out;
    ingest::write_ticks(original, out);
    const auto reparsed = parse_string(out.str());

    REQUIRE(reparsed.records.size() == original.records.size());
    CHECK(reparsed.price_increments == original.price_increments);  // bit-exact
    CHECK(reparsed.volumes == original.volumes);
    CHECK(reparsed.intertrade_ms == original.intertrade_ms);

    // sum of tau equals last minus first timestamp
    double tau_sum = 0.0;
    for (double tau : reparsed.intertrade_ms) tau_sum += tau;
    CHECK(tau_sum == doctest::Approx(static_cast<double>(records.back().timestamp_ms -
                                                         records.front().timestamp_ms)));
}

TEST_CASE("zero_interval_fraction") {
    SUBCASE("all distinct timestamps") {
        const auto s = parse_string("timestamp,price,volume\n1,10,1\n2,11,1\n3,12,1\n");
        const auto z = ingest::zero_interval_fraction(s);
        CHECK(z.overall_fraction == 0.0);
        CHECK(z.conditional_fraction == 0.0);
    }
    SUBCASE("equal timestamps with opposite-sign moves stay out of the pool") {
        const auto s = parse_string("timestamp,price,volume\n1000,10,1\n2000,11,1\n2000,9,1\n");
        const auto z = ingest::zero_interval_fraction(s);
        CHECK(z.overall_fraction == doctest::Approx(0.5));
        CHECK(z.n_conditional == 0);
        CHECK(z.conditional_fraction == 0.0);
    }
    SUBCASE("same-sign continuation with zero gap enters the pool") {
        const auto s = parse_string("timestamp,price,volume\n1,10,1\n2,11,1\n2,12,1\n");
        const auto z = ingest::zero_interval_fraction(s);
        CHECK(z.n_conditional == 1);
        CHECK(z.conditional_fraction == doctest::Approx(1.0));
    }
    SUBCASE("too short") {
        const auto s = parse_string("timestamp,price,volume\n1,10,1\n");
        CHECK_THROWS_AS((void)ingest::zero_interval_fraction(s), insufficient_data);
    }
}

TEST_CASE("atom-model round trip recovers p0 in the conditional fraction") {
    auto path = processes::gen_random_walk(
        200001, {processes::IncrementKind::discrete, 0.4, 0.0}, 2101);
    path = processes::attach_intertrade(std::move(path), 0.5, 1.0, 2102);
    path = processes::attach_volume(std::move(path), 2.5, 2103);

    const auto ticks = experiment::ticks_from_path(path, 10000.0, 1000.0);
    std::ostringstream out;
    ingest::write_ticks(ticks, out);
    const auto reparsed = parse_string(out.str());

    const auto z = ingest::zero_interval_fraction(reparsed);
    REQUIRE(z.n_conditional > 10000);
    const double band = 3.0 * std::sqrt(0.25 / static_cast<double>(z.n_conditional)) + 0.001;
    CHECK(std::abs(z.conditional_fraction - 0.5) <= band);
}

TEST_CASE("corr_report on synthetic volume") {
    auto path = processes::gen_random_walk(200001, {}, 31415);
    const double sigma_mu = processes::calibrate_sigma_mu(0.2, 200000, 500);
    path = processes::attach_volume(std::move(path), sigma_mu, 31416);
    const auto ticks = experiment::ticks_from_path(path, 10000.0, 1000.0);

    const auto reports = ingest::corr_report(ticks);
    CHECK(reports.abs_vs_volume.r == doctest::Approx(0.2).epsilon(0.1));
    CHECK(reports.abs_vs_volume.r > std::abs(reports.signed_vs_volume.r));
    CHECK(reports.abs_vs_volume.ci_lo < reports.abs_vs_volume.r);
    CHECK(reports.abs_vs_volume.r < reports.abs_vs_volume.ci_hi);

    SUBCASE("shuffled volume kills the correlation") {
        auto shuffled = ticks;
        std::mt19937_64 engine(8);
        std::shuffle(shuffled.volumes.begin(), shuffled.volumes.end(), engine);
        const auto broken = ingest::corr_report(shuffled);
        CHECK(std::abs(broken.abs_vs_volume.r) <
              3.0 / std::sqrt(static_cast<double>(shuffled.volumes.size())));
    }
    SUBCASE("constant volume is an undefined correlation") {
        auto constant = ticks;
        for (auto& rec : constant.records) rec.volume = 2.0;
        const auto series = ingest::make_series(constant.records);
        CHECK_THROWS_AS((void)ingest::corr_report(series), insufficient_data);
    }
    SUBCASE("fewer than 4 ticks is insufficient") {
        const auto s = parse_string("timestamp,price,volume\n1,10,1\n2,11,2\n3,12,1\n");
        CHECK_THROWS_AS((void)ingest::corr_report(s), insufficient_data);
    }
}
