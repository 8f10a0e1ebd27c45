#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nfat/cli.hpp"

#include "test_support.hpp"

#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <sstream>

namespace {

struct CliResult {
    int status = 0;
    std::string out;
    std::string err;
};

CliResult run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int status = nfat::cli::dispatch(std::move(args), out, err);
    return {status, out.str(), err.str()};
}

std::string first_analysis_id(const std::string& analyze_out) {
    // first line is "analysis <id>"
    const auto eol = analyze_out.find('\n');
    const auto line = analyze_out.substr(0, eol);
    return line.substr(line.find(' ') + 1);
}

} // namespace

TEST_CASE("full investigation flow") {
    testsup::TempDir dir;
    const std::string store = (dir.path / "store").string();

    auto created = run({"case-create", "--store", store, "--id", "demo", "--title",
                        "lab incident", "--investigator", "jdoe"});
    CHECK(created.status == 0);
    CHECK(created.out.find("created case demo") != std::string::npos);

    auto listed = run({"case-list", "--store", store});
    CHECK(listed.status == 0);
    CHECK(listed.out.find("demo") != std::string::npos);

    auto ingested = run({"ingest", "--store", store, "--case", "demo", "--input",
                         testsup::fixture("tcp_probe_15.csv").string()});
    CHECK(ingested.status == 0);
    CHECK(ingested.out.find("accepted 15 rejected 0") != std::string::npos);

    auto analyzed =
        run({"analyze", "--store", store, "--case", "demo", "--seed", "42"});
    CHECK(analyzed.status == 0);
    CHECK(analyzed.out.find("analysis ") == 0);
    CHECK(analyzed.out.find("events 15") != std::string::npos);
    const auto analysis_id = first_analysis_id(analyzed.out);

    auto classified = run({"classify", "--store", store, "--case", "demo"});
    CHECK(classified.status == 0);
    CHECK(classified.out.find("not_dangerous 15") != std::string::npos);

    auto text = run({"report", "--store", store, "--case", "demo", "--analysis", analysis_id});
    CHECK(text.status == 0);
    CHECK(text.out.find("== dangerous attack") != std::string::npos);
    CHECK(text.err.empty());

    auto json = run({"report", "--store", store, "--case", "demo", "--analysis", analysis_id,
                     "--format", "json"});
    CHECK(json.status == 0);
    CHECK(json.err.empty());
    const auto doc = nlohmann::json::parse(json.out); // machine output is pure JSON
    CHECK(doc.at("case_id") == "demo");
    std::uint64_t total = 0;
    for (const auto& [key, value] : doc.at("severity_counts").items())
        total += value.get<std::uint64_t>();
    CHECK(total == 15);

    const auto out_path = (dir.path / "report.json").string();
    auto to_file = run({"report", "--store", store, "--case", "demo", "--analysis", analysis_id,
                        "--format", "json", "--out", out_path});
    CHECK(to_file.status == 0);
    CHECK(to_file.out.empty());
    std::ifstream file(out_path);
    CHECK(file.good());
}

TEST_CASE("domain errors exit 1 and are reported on stderr") {
    testsup::TempDir dir;
    const std::string store = (dir.path / "store").string();

    auto missing = run({"report", "--store", store, "--case", "nope", "--analysis", "x"});
    CHECK(missing.status == 1);
    CHECK(missing.out.empty());
    CHECK(missing.err.find("CaseNotFound") != std::string::npos);

    run({"case-create", "--store", store, "--id", "tiny", "--title", "t", "--investigator",
         "i"});
    auto too_few = run({"analyze", "--store", store, "--case", "tiny"});
    CHECK(too_few.status == 1);
    CHECK(too_few.err.find("TooFewPoints") != std::string::npos);

    auto dup = run({"case-create", "--store", store, "--id", "tiny", "--title", "t",
                    "--investigator", "i"});
    CHECK(dup.status == 1);
    CHECK(dup.err.find("DuplicateCase") != std::string::npos);
}

TEST_CASE("usage errors exit 2") {
    testsup::TempDir dir;
    const std::string store = (dir.path / "store").string();

    auto unknown = run({"frobnicate"});
    CHECK(unknown.status == 2);
    CHECK(!unknown.err.empty());

    auto missing_flag = run({"ingest", "--store", store});
    CHECK(missing_flag.status == 2);

    auto bad_format = run({"report", "--store", store, "--case", "c", "--analysis", "a",
                           "--format", "xml"});
    CHECK(bad_format.status == 2);

    auto nothing = run({});
    CHECK(nothing.status == 2);
}

TEST_CASE("help exits 0") {
    auto help = run({"--help"});
    CHECK(help.status == 0);
    CHECK(help.out.find("case-create") != std::string::npos);

    auto sub_help = run({"analyze", "--help"});
    CHECK(sub_help.status == 0);
    CHECK(sub_help.out.find("--seed") != std::string::npos);
}

TEST_CASE("store root comes from NFAT_STORE when the flag is absent") {
    testsup::TempDir dir;
    const std::string store = (dir.path / "env-store").string();
    setenv("NFAT_STORE", store.c_str(), 1);

    auto created = run({"case-create", "--id", "envcase", "--title", "t", "--investigator",
                        "i"});
    CHECK(created.status == 0);
    CHECK(std::filesystem::exists(dir.path / "env-store" / "envcase"));

    // explicit flag wins over the environment
    const std::string other = (dir.path / "flag-store").string();
    auto flagged = run({"case-create", "--store", other, "--id", "envcase", "--title", "t",
                        "--investigator", "i"});
    CHECK(flagged.status == 0);
    CHECK(std::filesystem::exists(dir.path / "flag-store" / "envcase"));

    unsetenv("NFAT_STORE");
    auto bare = run({"case-list"});
    CHECK(bare.status == 2); // no store configured is a usage error
}

TEST_CASE("analyze with a custom rules file") {
    testsup::TempDir dir;
    const std::string store = (dir.path / "store").string();
    run({"case-create", "--store", store, "--id", "demo", "--title", "t", "--investigator",
         "i"});
    run({"ingest", "--store", store, "--case", "demo", "--input",
         testsup::fixture("tcp_listing_28.csv").string()});

    auto analyzed = run({"analyze", "--store", store, "--case", "demo", "--seed", "1",
                         "--rules", testsup::fixture("rules_custom.csv").string()});
    CHECK(analyzed.status == 0);

    auto serial = run({"analyze", "--store", store, "--case", "demo", "--seed", "1",
                       "--serial"});
    CHECK(serial.status == 0);
}

TEST_CASE("ingest reports rejected lines on stdout") {
    testsup::TempDir dir;
    const std::string store = (dir.path / "store").string();
    run({"case-create", "--store", store, "--id", "demo", "--title", "t", "--investigator",
         "i"});

    const auto bad = dir.path / "bad.csv";
    std::ofstream(bad) << "event_id,timestamp,src_addr,dst_addr,protocol,d_port,ip_len,tcp_flags\n"
                       << "1,2011-04-01 10:00:00,1.2.3.4,5.6.7.8,TCP,80,60,16\n"
                       << "oops\n";
    auto ingested = run({"ingest", "--store", store, "--case", "demo", "--input", bad.string()});
    CHECK(ingested.status == 0);
    CHECK(ingested.out.find("accepted 1 rejected 1") != std::string::npos);
    CHECK(ingested.out.find("line 3") != std::string::npos);
}
