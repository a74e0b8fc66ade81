#include <doctest.h>

#include <sstream>

#include "cllab/error.hpp"
#include "harness/commands.hpp"

using namespace cllab;
using namespace cllab::harness;

namespace {

nlohmann::ordered_json tables_of(const Report& r) { return to_json(r).at("tables"); }

}  // namespace

TEST_SUITE("harness") {
  TEST_CASE("moments") {
    MomentsConfig c;
    c.target = "Z/3";
    c.gap_tol = 1e-3;
    const auto r = cmd_moments(c);
    CHECK(r.passed());
    CHECK_FALSE(r.tables.empty());
    MomentsConfig bad;
    CHECK_THROWS_AS(cmd_moments(bad), Error);
    bad.target = "Z/3";
    bad.p = 4;
    CHECK_THROWS_AS(cmd_moments(bad), Error);
    MomentsConfig pointed;
    pointed.pointed = "Z/3:1";
    pointed.n = 6;
    CHECK(cmd_moments(pointed).passed());
  }

  TEST_CASE("sample needs a seed and is reproducible") {
    SampleCommandConfig c;
    c.draws = 2000;
    CHECK_THROWS_AS(cmd_sample(c), Error);
    c.seed = 11;
    const auto a = cmd_sample(c);
    c.workers = 3;
    const auto b = cmd_sample(c);
    CHECK(tables_of(a) == tables_of(b));
  }

  TEST_CASE("ffscan and nfscan reports") {
    FfScanConfig f;
    f.model = "ramified";
    f.m_range = std::pair{2, 3};
    f.targets = {"Z/5"};
    CHECK(resolve_degrees(f) == std::vector<int>{3, 5});
    const auto a = cmd_ffscan(f);
    CHECK(a.passed());
    f.workers = 3;
    CHECK(tables_of(cmd_ffscan(f)) == tables_of(a));

    NfScanConfig n;
    n.x = 10000;
    n.v1 = 7;
    n.trend_steps = 2;
    const auto r = cmd_nfscan(n);
    CHECK(r.passed());
    n.workers = 2;
    CHECK(tables_of(cmd_nfscan(n)) == tables_of(r));
  }

  TEST_CASE("rendering") {
    Report r;
    r.command = "demo";
    r.config["x"] = 3;
    auto& t = r.table("numbers", {"name", "value"});
    t.add({"third", 1.0 / 3.0});
    t.add({"big", 12345678901LL});
    r.check("ok", true);
    CHECK(r.passed());
    CHECK(format_cell(1.0 / 3.0) == "0.3333333333");
    CHECK(format_cell("a") == "a");

    std::ostringstream text, csv, json;
    write_report(text, r, OutputFormat::Text);
    write_report(csv, r, OutputFormat::Csv);
    write_report(json, r, OutputFormat::Json);
    CHECK(text.str().find("PASS") != std::string::npos);
    CHECK(csv.str().find("name,value") != std::string::npos);
    CHECK(csv.str().find("third,0.3333333333") != std::string::npos);
    const auto j = nlohmann::json::parse(json.str());
    CHECK(j.at("command") == "demo");
    CHECK(j.at("tables")[0].at("rows")[1].at("value") == 12345678901LL);
    r.check("bad", false);
    CHECK_FALSE(r.passed());
  }
}
