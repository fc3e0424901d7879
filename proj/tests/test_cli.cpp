#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fmlab/cli.hpp"
#include "fmlab/errors.hpp"
#include "fmlab/fragments.hpp"
#include "fmlab/relzoo.hpp"
#include "fmlab/report.hpp"
#include "fmlab/structure_io.hpp"
#include "fmlab/twinwidth.hpp"
#include "helpers.hpp"

using namespace fmlab;
namespace fs = std::filesystem;

namespace {

struct CliRun {
    int code = 0;
    std::string out;
    std::string err;
};

CliRun cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    CliRun r;
    r.code = run_cli(std::move(args), out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

/// Temp directory shared by the fixture-writing cases, removed at exit.
const fs::path& work_dir() {
    static fs::path dir = [] {
        fs::path d = fs::temp_directory_path() /
                     ("fmlab-clitest-" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string fixture(const std::string& name, const Structure& m) {
    fs::path p = work_dir() / name;
    if (!fs::exists(p)) save_structure(m, p.string());
    return p.string();
}

bool report_shape_ok(const ordered_json& j) {
    return j.is_object() && j.size() == 7 && j.at("command").is_string() &&
           j.at("arguments").is_array() && j.at("config_hash").is_string() &&
           j.at("scale").is_object() && j.at("verdicts").is_object() &&
           j.at("witnesses").is_object() && j.at("seconds").is_number();
}

} // namespace

TEST_CASE("reports are deterministic and well-formed") {
    auto a = cli({"gen", "--kind", "oc", "--size", "5", "--seed", "3"});
    auto b = cli({"gen", "--kind", "oc", "--size", "5", "--seed", "3"});
    CHECK(a.code == 0);
    CHECK(b.code == 0);
    auto ja = ordered_json::parse(a.out);
    auto jb = ordered_json::parse(b.out);
    CHECK(report_shape_ok(ja));
    CHECK(strip_timing(ja) == strip_timing(jb));
    CHECK(ja.at("command") == "gen");
    CHECK(ja.at("arguments") ==
          ordered_json({"--kind", "oc", "--size", "5", "--seed", "3"}));
    CHECK(ja.at("config_hash").get<std::string>().size() == 16);

    // the embedded witness structure is a valid instance of its kind
    Structure m = structure_from_json(ja.at("witnesses").at("structure"));
    CHECK(all_passed(validate_structure(m, "oc")));

    // different arguments, different configuration hash
    auto c = cli({"gen", "--kind", "oc", "--size", "5", "--seed", "4"});
    CHECK(ordered_json::parse(c.out).at("config_hash") != ja.at("config_hash"));
}

TEST_CASE("usage and input problems exit with code one") {
    CHECK(cli({}).code == 1);
    CHECK(cli({"gen", "--kind", "oc", "--size", "4"}).code == 1); // seed required
    CHECK(cli({"gen", "--kind", "zzz", "--size", "4", "--seed", "1"}).code == 1);
    CHECK(cli({"gen", "--bogus"}).code == 1);
    CHECK(cli({"tww", "--input", "/nonexistent/graph.json"}).code == 1);
    CHECK(cli({"tww", "--input", fixture("p4.json", path_graph(4)), "--exact",
               "--heuristic"})
              .code == 1);
    // a chain is not a graph
    CHECK(cli({"tww", "--input", fixture("c3.json", chain_structure(3))}).code == 1);

    auto missing_seed = cli({"indisc-scan", "--index", fixture("s2.json", set_structure(2)),
                             "--arity", "1", "--target",
                             fixture("c3g.json", chain_structure(3)), "--mode", "sample"});
    CHECK(missing_seed.code == 1);
    CHECK(!missing_seed.err.empty());
}

TEST_CASE("the lo kind alone needs no seed") {
    auto r = cli({"gen", "--kind", "lo", "--size", "4"});
    CHECK(r.code == 0);
    CHECK(ordered_json::parse(r.out).at("scale").at("seed") == 0);
}

TEST_CASE("negative verdicts still exit zero") {
    auto r = cli({"reasonable", "--index", fixture("s2.json", set_structure(2))});
    CHECK(r.code == 0);
    auto j = ordered_json::parse(r.out);
    CHECK(j.at("verdicts").at("reasonable") == false);
    CHECK(!j.at("witnesses").at("edges").empty());

    auto p = cli({"primitive", "--index", fixture("c4.json", chain_structure(4))});
    CHECK(p.code == 0);
    CHECK(ordered_json::parse(p.out).at("verdicts").at("primitive") == false);
}

TEST_CASE("exhausted budgets exit with code two") {
    std::string c6 = fixture("c6.json", chain_structure(6));
    std::string c3 = fixture("c3.json", chain_structure(3));
    std::string c2 = fixture("c2.json", chain_structure(2));
    auto starved = cli({"arrow", "--C", c6, "--B", c3, "--A", c2, "--k", "2",
                        "--budget", "100"});
    CHECK(starved.code == 2);
    CHECK(!starved.err.empty());

    auto ok = cli({"arrow", "--C", c6, "--B", c3, "--A", c2, "--k", "2"});
    CHECK(ok.code == 0);
    CHECK(ordered_json::parse(ok.out).at("verdicts").at("verdict") == "holds");
    CHECK(ordered_json::parse(ok.out).at("verdicts").at("checked") == 32768);

    auto ip = cli({"ipn", "--input", fixture("c8.json", chain_structure(8)), "--rel",
                   "<", "--n", "1", "--d", "1", "--budget", "2"});
    CHECK(ip.code == 2);

    // a non-exact width under --exact prints its report, then signals code 2
    auto tw = cli({"tww", "--input", fixture("cyc6.json", cycle_structure(6)),
                   "--exact", "--budget", "1"});
    CHECK(tw.code == 2);
    auto j = ordered_json::parse(tw.out);
    CHECK(j.at("verdicts").at("mode") == "upper_bound");
}

TEST_CASE("generated structures round-trip through files") {
    fs::path out = work_dir() / "gen_cod.json";
    auto r = cli({"gen", "--kind", "cod", "--size", "5", "--seed", "9", "-o",
                  out.string()});
    CHECK(r.code == 0);
    auto j = ordered_json::parse(r.out);
    CHECK(!j.at("witnesses").contains("structure")); // written, not embedded
    Structure m = load_structure(out.string());
    CHECK(all_passed(validate_structure(m, "cod")));
    CHECK(j.at("verdicts").at("elements") == m.total_size());

    auto chk = cli({"check-axioms", "--kind", "cod", "--input", out.string()});
    CHECK(chk.code == 0);
    CHECK(ordered_json::parse(chk.out).at("verdicts").at("all_passed") == true);
}

TEST_CASE("products build through the command line") {
    std::string spine = fixture("c2.json", chain_structure(2));
    std::string left = fixture("c2.json", chain_structure(2));
    std::string right = fixture("c3.json", chain_structure(3));
    auto full = cli({"product", "--kind", "full", left, right});
    CHECK(full.code == 0);
    auto j = ordered_json::parse(full.out);
    CHECK(j.at("verdicts").at("sort_sizes") == ordered_json({6, 2, 3}));

    // one rib file broadcasts to every spine element
    std::string rib = fixture("k2.json", complete_graph(2));
    auto lex = cli({"product", "--kind", "lex", spine, "--ribs", rib});
    CHECK(lex.code == 0);
    auto lj = ordered_json::parse(lex.out);
    CHECK(lj.at("verdicts").at("sort_sizes") == ordered_json({4, 2}));

    fs::path out = work_dir() / "prod.json";
    auto saved = cli({"product", "--kind", "disjoint", rib, rib, "-o", out.string()});
    CHECK(saved.code == 0);
    CHECK(load_structure(out.string()).sort_size(0) == 4);
}

TEST_CASE("collapse scans run end to end") {
    fs::path reduct = work_dir() / "keep_order.json";
    {
        std::ofstream f(reduct);
        f << R"({"keep": ["<"]})";
    }
    auto r = cli({"indisc-scan", "--index", fixture("c4.json", chain_structure(4)),
                  "--reduct", reduct.string(), "--target",
                  fixture("c3g.json", chain_structure(3))});
    CHECK(r.code == 0);
    auto j = ordered_json::parse(r.out);
    CHECK(j.at("verdicts").at("collapses") == true);
    CHECK(j.at("verdicts").at("exhaustive") == true);
    CHECK(j.at("verdicts").at("scanned") == 81);
    CHECK(j.at("verdicts").at("indiscernible_count") == 3);

    // --reduct and --arity are mutually exclusive, one is required
    CHECK(cli({"indisc-scan", "--index", fixture("c4.json", chain_structure(4)),
               "--reduct", reduct.string(), "--arity", "1", "--target",
               fixture("c3g.json", chain_structure(3))})
              .code == 1);
    CHECK(cli({"indisc-scan", "--index", fixture("c4.json", chain_structure(4)),
               "--target", fixture("c3g.json", chain_structure(3))})
              .code == 1);
}

TEST_CASE("help requests succeed") {
    CHECK(cli({"--help"}).code == 0);
    CHECK(cli({"gen", "--help"}).code == 0);
    CHECK(cli({"tww", "--help"}).code == 0);
}

TEST_CASE("the acceptance battery is callable as a subcommand") {
    auto r = cli({"suite", "--only", "3"});
    CHECK(r.code == 0);
    auto j = ordered_json::parse(r.out);
    auto rows = j.at("verdicts").at("criteria");
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].at("id") == 3);
    CHECK(rows[0].at("passed") == true);
    CHECK(j.at("verdicts").at("all_passed") == true);
}

TEST_CASE("the installed binary matches the in-process behaviour") {
    std::string c5 = fixture("cyc5.json", cycle_structure(5));
    std::string cmd = std::string("'") + FMLAB_CLI_PATH + "' tww --input '" + c5 +
                      "' 2>/dev/null";
    auto first = testutil::run_command(cmd);
    auto second = testutil::run_command(cmd);
    CHECK(first.code == 0);
    CHECK(second.code == 0);
    auto j1 = ordered_json::parse(first.out);
    auto j2 = ordered_json::parse(second.out);
    CHECK(report_shape_ok(j1));
    CHECK(strip_timing(j1) == strip_timing(j2));
    CHECK(j1.at("verdicts").at("width") == 2);
    CHECK(j1.at("verdicts").at("mode") == "exact");

    auto in_process = cli({"tww", "--input", c5});
    CHECK(strip_timing(ordered_json::parse(in_process.out)) == strip_timing(j1));
}

TEST_CASE("report serialization rejects missing fields") {
    Report r = make_report("demo", {"--x", "1"});
    r.seconds = 1.5;
    auto j = r.to_json();
    Report back = Report::from_json(j);
    CHECK(back.command == "demo");
    CHECK(back.arguments == std::vector<std::string>{"--x", "1"});
    CHECK(back.config_hash == r.config_hash);

    auto stripped = strip_timing(j);
    CHECK(!stripped.contains("seconds"));
    j.erase("verdicts");
    CHECK_THROWS_AS(Report::from_json(j), input_error);

    CHECK(make_report("demo", {"--x", "1"}).config_hash == r.config_hash);
    CHECK(make_report("demo", {"--x", "2"}).config_hash != r.config_hash);
}

TEST_CASE("the published schema mirrors the report envelope") {
    fs::path schema_path = fs::path(FMLAB_SOURCE_DIR) / "schema" / "report.schema.json";
    REQUIRE(fs::exists(schema_path));
    std::ifstream f(schema_path);
    auto schema = ordered_json::parse(f);
    auto required = schema.at("required");
    CHECK(required.size() == 7);

    auto sample = cli({"gen", "--kind", "lo", "--size", "3"});
    auto j = ordered_json::parse(sample.out);
    for (const auto& field : required) CHECK(j.contains(field.get<std::string>()));
    for (auto it = j.begin(); it != j.end(); ++it)
        CHECK(schema.at("properties").contains(it.key()));
}

TEST_CASE("fixture directory cleanup") {
    std::error_code ec;
    fs::remove_all(work_dir(), ec);
    CHECK(!ec);
}
