#include <catch2/catch_amalgamated.hpp>

#include <stdexcept>
#include <string>

#include "pmuplace/record.hpp"

using namespace pmuplace;

TEST_CASE("record round trip", "[record]") {
    RunRecord r;
    r.add("record", std::string("pmuplace/1"));
    r.add("pmus", 4);
    r.add("objective", 4.0);
    r.add("placement", std::string("2,6,7,9"));
    r.add("note", std::string(""));

    std::string text = r.serialize();
    CHECK(text ==
          "record=pmuplace/1\n"
          "pmus=4\n"
          "objective=4\n"
          "placement=2,6,7,9\n"
          "note=\n");

    RunRecord back = RunRecord::parse(text);
    REQUIRE(back.fields.size() == r.fields.size());
    CHECK(back.fields == r.fields);
    CHECK(back.serialize() == text);
}

TEST_CASE("record key and value validation", "[record]") {
    RunRecord r;
    CHECK_THROWS_AS(r.add("Bad", std::string("x")), std::logic_error);
    CHECK_THROWS_AS(r.add("has space", std::string("x")), std::logic_error);
    CHECK_THROWS_AS(r.add("dash-key", std::string("x")), std::logic_error);
    CHECK_THROWS_AS(r.add("ok", std::string("line\nbreak")), std::logic_error);
    CHECK_NOTHROW(r.add("ok_1.sub", std::string("value with spaces = fine")));
}

TEST_CASE("record lookup", "[record]") {
    RunRecord r;
    r.add("a", 1);
    r.add("b", std::string("two"));
    REQUIRE(r.find("b") != nullptr);
    CHECK(*r.find("b") == "two");
    CHECK(r.find("missing") == nullptr);
}

TEST_CASE("double formatting", "[record]") {
    CHECK(format_double(4.0) == "4");
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(1.0 / 3.0) == "0.3333333333");

    RunRecord r;
    r.add("x", 1.0 / 3.0);
    CHECK(*r.find("x") == "0.3333333333");
}

TEST_CASE("record parse errors", "[record]") {
    CHECK_THROWS_AS(RunRecord::parse("a=1\nno equals sign\n"), std::runtime_error);

    RunRecord r = RunRecord::parse("a=1\n\n\nb=2");
    REQUIRE(r.fields.size() == 2);
    CHECK(*r.find("a") == "1");
    CHECK(*r.find("b") == "2");
}

TEST_CASE("wall time stripping", "[record]") {
    std::string text =
        "command=bench\n"
        "wall_ms=123\n"
        "row.ieee14.bip.pmus=4\n"
        "row.ieee14.bip.wall_ms=7\n"
        "wall_msx=keep\n"
        "awall_ms=keep\n";
    CHECK(strip_wall_times(text) ==
          "command=bench\n"
          "row.ieee14.bip.pmus=4\n"
          "wall_msx=keep\n"
          "awall_ms=keep\n");
}

TEST_CASE("input digest helpers", "[record]") {
    CHECK(fnv1a64("") == 0xcbf29ce484222325ull);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
    CHECK(hex16(0x2a) == "000000000000002a");
    CHECK(hex16(fnv1a64("a")) == "af63dc4c8601ec8c");
}
