#include <catch_amalgamated.hpp>

#include "icboot/breast_cancer.hpp"
#include "icboot/io.hpp"
#include "icboot/npmle.hpp"

using namespace icboot;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;

namespace {

void expect_line_error(std::string_view text, DatasetFormat f, const std::string& where) {
    try {
        parse_dataset(text, f);
        FAIL("expected InputError");
    } catch (const InputError& e) {
        CHECK_THAT(e.what(), ContainsSubstring(where));
    }
}

}  // namespace

TEST_CASE("parse current status") {
    auto ds = parse_dataset("t,delta\n1.0,1\n2.0,0", DatasetFormat::current_status);
    REQUIRE(ds.current_status.size() == 2);
    CHECK(ds.current_status[0].t == 1.0);
    CHECK(ds.current_status[0].delta == 1);
    CHECK(ds.current_status[1].delta == 0);
}

TEST_CASE("parse intervals") {
    auto ds = parse_dataset("left,right\n0.5,\n0,2\n1,inf\n", DatasetFormat::intervals);
    REQUIRE(ds.intervals.size() == 3);
    CHECK(ds.intervals[0] == CensoringInterval(0.5, kInfinity));
    CHECK(ds.intervals[1] == CensoringInterval(0.0, 2.0));
    CHECK(ds.intervals[2].right_censored());
}

TEST_CASE("parse mixed long") {
    auto ds = parse_dataset("id,time,delta\n1,1.0,0\n1,2.0,1", DatasetFormat::mixed_long);
    REQUIRE(ds.mixed.size() == 1);
    CHECK(ds.mixed[0] == MixedCaseSubject{{1.0, 2.0}, 2});
    CHECK(reduce_to_interval(ds.mixed[0]) == CensoringInterval(1.0, 2.0));
    auto none = parse_dataset("id,time,delta\na,1,0\nb,3,1\na,2,0\n", DatasetFormat::mixed_long);
    REQUIRE(none.mixed.size() == 2);
    CHECK(none.mixed[0] == MixedCaseSubject{{1.0, 2.0}, 3});
    CHECK(none.ids == std::vector<std::string>{"a", "b"});
}

TEST_CASE("parse errors carry line numbers") {
    expect_line_error("t,delta\n1.0,1\nabc,0\n", DatasetFormat::current_status, "line 3");
    expect_line_error("t,delta\n1.0,2\n", DatasetFormat::current_status, "line 2");
    expect_line_error("t,delta\n1.0\n", DatasetFormat::current_status, "line 2");
    expect_line_error("time,delta\n1.0,1\n", DatasetFormat::current_status, "line 1");
    expect_line_error("left,right\n2,1\n", DatasetFormat::intervals, "line 2");
    expect_line_error("id,time,delta\n1,2.0,0\n1,1.0,0\n", DatasetFormat::mixed_long, "line 3");
    expect_line_error("id,time,delta\n1,1.0,1\n1,2.0,1\n", DatasetFormat::mixed_long, "line 3");
    CHECK_THROWS_AS(parse_dataset("", DatasetFormat::current_status), InputError);
    CHECK_THROWS_AS(parse_dataset("t,delta\n", DatasetFormat::current_status), InputError);
    CHECK_THROWS_AS(parse_format("csv"), InputError);
}

TEST_CASE("serialization round trips") {
    const std::pair<const char*, DatasetFormat> cases[] = {
        {"t,delta\n0.1,1\n2.5,0\n1e-7,1\n", DatasetFormat::current_status},
        {"left,right\n0,0.3\n0.1,\n0.2,7\n", DatasetFormat::intervals},
        {"id,time,delta\nx,0.5,0\nx,0.75,0\ny,1,1\nz,2,0\nz,3,1\n", DatasetFormat::mixed_long},
    };
    for (auto [text, fmt] : cases) {
        auto a = parse_dataset(text, fmt);
        auto canon = serialize_dataset(a);
        auto b = parse_dataset(canon, fmt);
        CHECK(serialize_dataset(b) == canon);
        CHECK(b.size() == a.size());
        CHECK(b.censoring_intervals() == a.censoring_intervals());
    }
    CHECK(format_number(0.1) == "0.10000000000000001");
    CHECK(format_number(kInfinity) == "inf");
}

TEST_CASE("embedded breast cosmesis data") {
    auto d = load_breast_cancer();
    CHECK(d.radiotherapy.size() == 46);
    CHECK(d.radio_chemo.size() == 48);
    CHECK(breast_cancer_checksum() == "aadf63fda6c7af55");
    auto t1 = npmle_interval_censored(d.radio_chemo).distribution();
    auto t0 = npmle_interval_censored(d.radiotherapy).distribution();
    CHECK_THAT(t1(20), WithinAbs(0.56, 0.01));
    CHECK_THAT(t1(30), WithinAbs(0.66, 0.01));
    CHECK_THAT(t0(20), WithinAbs(0.24, 0.01));
    CHECK_THAT(t0(30), WithinAbs(0.33, 0.01));
}
