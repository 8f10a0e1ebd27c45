#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nfat/evidence_store.hpp"
#include "nfat/ingest.hpp"
#include "nfat/serialize.hpp"

#include "test_support.hpp"

#include <atomic>
#include <fstream>
#include <sstream>
#include <thread>

using namespace nfat;

namespace {

CaseRecord demo_case(const std::string& id = "uad-2011-001") {
    return {id, "lab incident", "jdoe", Timestamp::parse("2011-04-04 10:00:00"),
            "initial profile"};
}

AnalysisRecord small_analysis(const std::string& case_id) {
    AnalysisRecord record;
    record.case_id = case_id;
    record.created_at = Timestamp::parse("2011-04-04 11:00:00");
    record.config = {3, 300, 10, 42};
    record.event_ids = {2204, 2203, 2202};
    record.kmeans.centroids = {{1, 0.5, 412, 24}, {1, 89.4, 79, 24}, {0, 0.08, 0, 0}};
    record.kmeans.assignments = {0, 0, 1};
    record.kmeans.per_cluster_sse = {1.5, 0.0, 0.0};
    record.kmeans.total_sse = 1.5;
    record.kmeans.iterations = 4;
    record.kmeans.converged = true;
    record.kmeans.sse_history = {9.0, 2.0, 1.5, 1.5};
    record.labels = {{{Severity::Dangerous, 0, 170321.0},
                      {Severity::RatherDangerous, 1, 14800.0},
                      {Severity::NotDangerous, 2, 0.01}}};
    record.error.total = 3;
    record.error.mismatches = 1;
    record.error.error_rate = 1.0 / 3.0;
    record.error.confusion[2][0] = 1;
    record.error.confusion[2][2] = 2;
    return record;
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace

TEST_CASE("case round trip") {
    testsup::TempDir dir;
    EvidenceStore store(dir.path / "store");
    const auto record = demo_case();
    CHECK(store.create_case(record) == record.case_id);
    CHECK(store.case_exists(record.case_id));
    CHECK(store.load_case(record.case_id) == record);

    const auto cases = store.list_cases();
    REQUIRE(cases.size() == 1);
    CHECK(cases[0].case_id == record.case_id);
    CHECK(cases[0].title == record.title);
    CHECK(cases[0].event_count == 0);
}

TEST_CASE("duplicate and invalid case ids") {
    testsup::TempDir dir;
    EvidenceStore store(dir.path / "store");
    store.create_case(demo_case());

    const auto expect = [&](const CaseRecord& record, Errc code) {
        try {
            store.create_case(record);
            FAIL("expected an Error");
        } catch (const Error& e) {
            CHECK(e.code() == code);
        }
    };
    expect(demo_case(), Errc::DuplicateCase);
    expect(demo_case(""), Errc::InvalidIdentifier);
    expect(demo_case(".."), Errc::InvalidIdentifier);
    expect(demo_case("a/b"), Errc::InvalidIdentifier);
    expect(demo_case("white space"), Errc::InvalidIdentifier);
}

TEST_CASE("query over the fixture") {
    testsup::TempDir dir;
    EvidenceStore store(dir.path / "store");
    store.create_case(demo_case("q"));
    ingest_file(store, testsup::fixture("tcp_listing_28.csv"), "q");

    SUBCASE("full range returns everything, newest first") {
        const auto events =
            store.query_events("q", Timestamp::min_value(), Timestamp::max_value());
        REQUIRE(events.size() == 28);
        for (std::size_t i = 1; i < events.size(); ++i) {
            const bool ordered =
                events[i - 1].timestamp > events[i].timestamp ||
                (events[i - 1].timestamp == events[i].timestamp &&
                 events[i - 1].event_id > events[i].event_id);
            CHECK(ordered);
        }
    }

    SUBCASE("empty range") {
        const auto instant = Timestamp::parse("2009-01-01 00:00:00");
        CHECK(store.query_events("q", instant, instant).empty());
    }

    SUBCASE("bounds are inclusive") {
        const auto t = Timestamp::parse("2011-04-04 00:10:22");
        const auto events = store.query_events("q", t, t);
        REQUIRE(events.size() == 1);
        CHECK(events[0].event_id == 3001);
    }

    SUBCASE("one-day TCP filter excludes the later event") {
        const auto events = store.query_events("q", Timestamp::parse("2011-04-03 00:00:00"),
                                               Timestamp::parse("2011-04-03 23:59:59"),
                                               Protocol::TCP);
        CHECK(events.size() == 27); // everything but the 2011-04-04 row
        for (const auto& e : events)
            CHECK(e.timestamp.to_string().substr(0, 10) == "2011-04-03");
    }

    SUBCASE("protocol filter can empty the result") {
        CHECK(store.query_events("q", Timestamp::min_value(), Timestamp::max_value(),
                                 Protocol::UDP)
                  .empty());
    }

    SUBCASE("inverted range") {
        try {
            (void)store.query_events("q", Timestamp::max_value(), Timestamp::min_value());
            FAIL("expected an Error");
        } catch (const Error& e) {
            CHECK(e.code() == Errc::InvalidRange);
        }
    }

    SUBCASE("unknown case") {
        try {
            (void)store.query_events("nope", Timestamp::min_value(), Timestamp::max_value());
            FAIL("expected an Error");
        } catch (const Error& e) {
            CHECK(e.code() == Errc::CaseNotFound);
        }
    }
}

TEST_CASE("mixed protocols filter correctly") {
    testsup::TempDir dir;
    EvidenceStore store(dir.path / "store");
    store.create_case(demo_case("m"));
    ingest_file(store, testsup::fixture("tcp_listing_28.csv"), "m");
    ingest_file(store, testsup::fixture("udp_dns_17.csv"), "m");

    const auto all = store.query_events("m", Timestamp::min_value(), Timestamp::max_value());
    CHECK(all.size() == 45);
    const auto udp =
        store.query_events("m", Timestamp::min_value(), Timestamp::max_value(), Protocol::UDP);
    CHECK(udp.size() == 17);
    for (const auto& e : udp)
        CHECK(e.protocol == Protocol::UDP);
}

TEST_CASE("analysis round trip is byte-exact") {
    testsup::TempDir dir;
    EvidenceStore store(dir.path / "store");
    store.create_case(demo_case("a"));

    auto record = small_analysis("a");
    std::string id;
    {
        auto writer = store.open_writer("a");
        id = writer.store_analysis(record);
    }
    CHECK(id == "a0001");

    const auto loaded = store.load_analysis("a", id);
    CHECK(loaded.event_ids == record.event_ids);
    CHECK(loaded.config.seed == record.config.seed);
    CHECK(loaded.labels == record.labels);
    CHECK(loaded.error == record.error);
    CHECK(testsup::bit_identical(loaded.kmeans, record.kmeans));

    // re-serializing the loaded record reproduces the stored bytes
    const auto path = dir.path / "store" / "a" / "analyses" / (id + ".json");
    auto reloaded = loaded;
    reloaded.analysis_id = id;
    CHECK(dump_document(to_json(reloaded)) == slurp(path));
}

TEST_CASE("analyses are append-only with sequential ids") {
    testsup::TempDir dir;
    EvidenceStore store(dir.path / "store");
    store.create_case(demo_case("a"));

    auto writer = store.open_writer("a");
    const auto id1 = writer.store_analysis(small_analysis("a"));
    auto second = small_analysis("a");
    second.config.seed = 43;
    const auto id2 = writer.store_analysis(second);
    CHECK(id1 != id2);
    CHECK(store.list_analyses("a") == std::vector<std::string>{"a0001", "a0002"});
    CHECK(store.load_analysis("a", id1).config.seed == 42);
    CHECK(store.load_analysis("a", id2).config.seed == 43);

    auto dup = small_analysis("a");
    dup.analysis_id = id1;
    try {
        writer.store_analysis(dup);
        FAIL("expected an Error");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::DuplicateAnalysis);
    }

    try {
        (void)store.load_analysis("a", "a9999");
        FAIL("expected an Error");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::AnalysisNotFound);
    }
}

TEST_CASE("events file round trips through the store byte for byte") {
    testsup::TempDir dir;
    EvidenceStore store(dir.path / "store");
    store.create_case(demo_case("e"));
    ingest_file(store, testsup::fixture("tcp_probe_15.csv"), "e");

    const auto before = slurp(dir.path / "store" / "e" / "events.csv");
    const auto events = store.load_events("e");
    std::string rebuilt(kEventCsvHeader);
    rebuilt += '\n';
    for (const auto& e : events) {
        rebuilt += render_event_line(e);
        rebuilt += '\n';
    }
    CHECK(rebuilt == before);
}

TEST_CASE("second writer is refused while the lock is held") {
    testsup::TempDir dir;
    EvidenceStore store(dir.path / "store");
    store.create_case(demo_case("l"));

    auto writer = store.open_writer("l");
    try {
        (void)store.open_writer("l");
        FAIL("expected an Error");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::StoreLocked);
    }
}

TEST_CASE("lock is released with the writer") {
    testsup::TempDir dir;
    EvidenceStore store(dir.path / "store");
    store.create_case(demo_case("l"));
    { auto writer = store.open_writer("l"); }
    CHECK_NOTHROW((void)store.open_writer("l"));
}

TEST_CASE("append rejects duplicate ids without writing") {
    testsup::TempDir dir;
    EvidenceStore store(dir.path / "store");
    store.create_case(demo_case("d"));

    const std::vector<LogEvent> batch{
        testsup::make_event(1, "2011-04-01 10:00:00", Protocol::TCP, 80, 60, 16),
        testsup::make_event(2, "2011-04-01 10:00:01", Protocol::TCP, 80, 60, 16)};
    {
        auto writer = store.open_writer("d");
        writer.append_events(batch);
    }
    {
        auto writer = store.open_writer("d");
        const std::vector<LogEvent> clash{
            testsup::make_event(3, "2011-04-01 10:00:02", Protocol::TCP, 80, 60, 16),
            testsup::make_event(2, "2011-04-01 10:00:03", Protocol::TCP, 80, 60, 16)};
        try {
            writer.append_events(clash);
            FAIL("expected an Error");
        } catch (const Error& e) {
            CHECK(e.code() == Errc::DuplicateEventId);
        }
    }
    CHECK(store.load_events("d").size() == 2); // nothing from the failed batch
}

TEST_CASE("append enforces the log event field invariants") {
    testsup::TempDir dir;
    EvidenceStore store(dir.path / "store");
    store.create_case(demo_case("v"));
    auto writer = store.open_writer("v");

    LogEvent bad = testsup::make_event(1, "2011-04-01 10:00:00", Protocol::UDP, 53, 60, 0);
    bad.tcp_flags = 9; // violates the UDP invariant behind make_event's back
    try {
        writer.append_events(std::vector<LogEvent>{bad});
        FAIL("expected an Error");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::FieldOutOfRange);
    }
    CHECK(store.load_events("v").empty());
}

TEST_CASE("a concurrent reader always sees a consistent snapshot") {
    testsup::TempDir dir;
    EvidenceStore store(dir.path / "store");
    store.create_case(demo_case("c"));

    constexpr int kBatches = 40;
    constexpr int kBatchSize = 25;

    std::atomic<bool> done{false};
    std::atomic<int> bad_reads{0};

    std::thread reader([&] {
        EvidenceStore view(dir.path / "store");
        while (!done.load(std::memory_order_acquire)) {
            try {
                const auto events = view.load_events("c");
                if (events.size() % kBatchSize != 0)
                    bad_reads.fetch_add(1);
            } catch (const Error&) {
                bad_reads.fetch_add(1); // torn or unparsable snapshot
            }
        }
    });

    for (int b = 0; b < kBatches; ++b) {
        std::vector<LogEvent> batch;
        for (int i = 0; i < kBatchSize; ++i)
            batch.push_back(testsup::make_event(
                static_cast<std::uint64_t>(b * kBatchSize + i + 1), "2011-04-01 10:00:00",
                Protocol::TCP, 80, 60, 16));
        auto writer = store.open_writer("c");
        writer.append_events(batch);
    }
    done.store(true, std::memory_order_release);
    reader.join();

    CHECK(bad_reads.load() == 0);
    CHECK(store.load_events("c").size() == kBatches * kBatchSize);
}
