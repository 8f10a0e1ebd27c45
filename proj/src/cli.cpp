#include "nfat/cli.hpp"

#include "nfat/criteria.hpp"
#include "nfat/evidence_store.hpp"
#include "nfat/ingest.hpp"
#include "nfat/pipeline.hpp"
#include "nfat/report.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>

namespace nfat::cli {

namespace {

struct Options {
    std::string store;
    std::string case_id;
    // case-create
    std::string id;
    std::string title;
    std::string investigator;
    std::string notes;
    // ingest
    std::string input;
    // analyze
    std::size_t k = 3;
    std::size_t restarts = 10;
    std::size_t max_iterations = 300;
    std::uint64_t seed = 0;
    std::string rules_file;
    bool serial = false;
    // report
    std::string analysis;
    std::string format = "text";
    std::string out_path;
    std::size_t top_n = 10;
};

RuleTable load_rules(const Options& opt) {
    return opt.rules_file.empty() ? RuleTable::defaults() : RuleTable::load(opt.rules_file);
}

void cmd_case_create(const Options& opt, std::ostream& out) {
    EvidenceStore store(opt.store);
    store.create_case({opt.id, opt.title, opt.investigator, Timestamp::now(), opt.notes});
    out << "created case " << opt.id << "\n";
}

void cmd_case_list(const Options& opt, std::ostream& out) {
    EvidenceStore store(opt.store);
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%-20s %-28s %-20s %-20s %8s\n", "CASE ID", "TITLE",
                  "INVESTIGATOR", "OPENED", "EVENTS");
    out << buf;
    for (const auto& c : store.list_cases()) {
        std::snprintf(buf, sizeof(buf), "%-20s %-28s %-20s %-20s %8llu\n", c.case_id.c_str(),
                      c.title.c_str(), c.investigator.c_str(), c.opened_at.to_string().c_str(),
                      static_cast<unsigned long long>(c.event_count));
        out << buf;
    }
}

void cmd_ingest(const Options& opt, std::ostream& out) {
    EvidenceStore store(opt.store);
    const auto summary = ingest_file(store, opt.input, opt.case_id);
    out << "accepted " << summary.accepted << " rejected " << summary.rejected << "\n";
    for (const auto& e : summary.errors)
        out << "  " << e.message << "\n";
}

void cmd_analyze(const Options& opt, std::ostream& out) {
    EvidenceStore store(opt.store);
    const KMeansConfig config{opt.k, opt.max_iterations, opt.restarts, opt.seed};
    const auto rules = load_rules(opt);
    const auto run = run_pipeline(store, opt.case_id, config, rules,
                                  opt.serial ? Execution::Serial : Execution::Parallel);
    out << "analysis " << run.analysis_id << "\n";
    out << "events " << run.input_event_count << "\n";
    for (Severity s : kAllSeverities)
        out << severity_key(s) << " " << run.severity_counts[severity_index(s)] << "\n";
    char buf[48];
    std::snprintf(buf, sizeof(buf), "error_rate %.4f\n", run.error_rate);
    out << buf;
}

void cmd_classify(const Options& opt, std::ostream& out) {
    EvidenceStore store(opt.store);
    const auto rules = load_rules(opt);
    const auto events =
        store.query_events(opt.case_id, Timestamp::min_value(), Timestamp::max_value());

    std::array<std::uint64_t, 3> counts{};
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%-20s %-16s %-16s %-9s %6s  %s\n", "Time", "Source Address",
                  "Dest. Address", "Protocol", "Port", "Severity");
    out << buf;
    for (const auto& e : events) {
        const Severity s = rules.classify(e);
        ++counts[severity_index(s)];
        std::snprintf(buf, sizeof(buf), "%-20s %-16s %-16s %-9s %6u  %s\n",
                      e.timestamp.to_string().c_str(), e.src_addr.c_str(), e.dst_addr.c_str(),
                      to_string(e.protocol), static_cast<unsigned>(e.d_port),
                      severity_display(s));
        out << buf;
    }
    out << "\n";
    for (Severity s : kAllSeverities)
        out << severity_key(s) << " " << counts[severity_index(s)] << "\n";
}

void cmd_report(const Options& opt, std::ostream& out) {
    EvidenceStore store(opt.store);
    const auto report = build_attack_report(store, opt.case_id, opt.analysis, opt.top_n);
    const auto text =
        render(report, opt.format == "json" ? ReportFormat::Json : ReportFormat::Text);
    if (opt.out_path.empty()) {
        out << text;
        return;
    }
    std::ofstream file(opt.out_path, std::ios::binary | std::ios::trunc);
    if (!file)
        raise(Errc::IoError, "cannot write '" + opt.out_path + "'");
    file << text;
    file.flush();
    if (!file)
        raise(Errc::IoError, "short write to '" + opt.out_path + "'");
}

} // namespace

int dispatch(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"cluster-based attack analysis over network event logs", "nfat"};
    app.require_subcommand(1);

    Options opt;
    const auto add_store = [&](CLI::App* sub) {
        sub->add_option("--store", opt.store, "evidence store root directory")
            ->envname("NFAT_STORE")
            ->required();
    };
    const auto add_case = [&](CLI::App* sub) {
        sub->add_option("--case", opt.case_id, "case identifier")->required();
    };

    auto* create = app.add_subcommand("case-create", "create a case (evidence profile)");
    add_store(create);
    create->add_option("--id", opt.id, "case identifier")->required();
    create->add_option("--title", opt.title, "case title")->required();
    create->add_option("--investigator", opt.investigator, "investigator name")->required();
    create->add_option("--notes", opt.notes, "profile notes");

    auto* list = app.add_subcommand("case-list", "list cases in the store");
    add_store(list);

    auto* ingest = app.add_subcommand("ingest", "ingest an event log CSV into a case");
    add_store(ingest);
    add_case(ingest);
    ingest->add_option("--input", opt.input, "input CSV file")->required();

    auto* analyze =
        app.add_subcommand("analyze", "cluster a case's events and store the analysis");
    add_store(analyze);
    add_case(analyze);
    analyze->add_option("--k", opt.k, "number of clusters")->capture_default_str();
    analyze->add_option("--restarts", opt.restarts, "independent restarts")
        ->capture_default_str();
    analyze->add_option("--seed", opt.seed, "restart seed base")->capture_default_str();
    analyze->add_option("--max-iterations", opt.max_iterations, "iteration cap per run")
        ->capture_default_str();
    analyze->add_option("--rules", opt.rules_file, "criteria rules CSV replacing the built-ins");
    analyze->add_flag("--serial", opt.serial, "run the clustering kernels single-threaded");

    auto* classify =
        app.add_subcommand("classify", "criteria-only severity listing, no clustering");
    add_store(classify);
    add_case(classify);
    classify->add_option("--rules", opt.rules_file, "criteria rules CSV replacing the built-ins");

    auto* report = app.add_subcommand("report", "render an attack report for a stored analysis");
    add_store(report);
    add_case(report);
    report->add_option("--analysis", opt.analysis, "analysis identifier")->required();
    report->add_option("--format", opt.format, "output format")
        ->capture_default_str()
        ->check(CLI::IsMember({"text", "json"}));
    report->add_option("--out", opt.out_path, "write output to a file instead of stdout");
    report->add_option("--top", opt.top_n, "length of the top source/target lists")
        ->capture_default_str();

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("nfat");
    for (const auto& a : args)
        argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        const auto subs = app.get_subcommands();
        out << (subs.empty() ? app.help() : subs.front()->help());
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        err << "run 'nfat --help' for usage\n";
        return 2;
    }

    try {
        if (create->parsed())
            cmd_case_create(opt, out);
        else if (list->parsed())
            cmd_case_list(opt, out);
        else if (ingest->parsed())
            cmd_ingest(opt, out);
        else if (analyze->parsed())
            cmd_analyze(opt, out);
        else if (classify->parsed())
            cmd_classify(opt, out);
        else if (report->parsed())
            cmd_report(opt, out);
        return 0;
    } catch (const Error& e) {
        err << "error: " << errc_name(e.code()) << ": " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace nfat::cli
