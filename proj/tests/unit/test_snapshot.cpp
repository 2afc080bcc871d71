#include <doctest.h>

#include "tiermem/error.hpp"
#include "tiermem/memory.hpp"
#include "tiermem/snapshot.hpp"

using namespace tiermem;

namespace {

MemorySnapshot populated() {
    MemoryConfig config;
    config.embedding_dim = 3;
    auto m = make_snapshot("user-42", config);
    m = record_note(m, Note{"r0-n0", 0, "note text", 0});
    for (std::uint64_t r = 0; r < 3; ++r) {
        m = upsert_stm(m, make_item(Kind::UserSpecific, "allergic to penicillin", r), r);
        m = upsert_stm(m, make_item(Kind::CommonSense, "water helps", r), r);
    }
    m = promote(m, Kind::UserSpecific, "allergic to penicillin",
                std::vector<double>{0.0, 1.0, 0.0});
    m.round_cursor = 3;
    return m;
}

}  // namespace

TEST_CASE("empty snapshot round-trips") {
    const auto m = make_snapshot("u");
    CHECK(load_snapshot(save_snapshot(m)) == m);
}

TEST_CASE("populated snapshot round-trips structurally and byte-identically") {
    const auto m = populated();
    const auto bytes = save_snapshot(m);
    const auto back = load_snapshot(bytes);
    CHECK(back == m);
    CHECK(save_snapshot(back) == bytes);
}

TEST_CASE("unknown future versions are rejected") {
    auto bytes = save_snapshot(make_snapshot("u"));
    const auto pos = bytes.find("\"format_version\": 1");
    REQUIRE(pos != std::string::npos);
    bytes.replace(pos, 19, "\"format_version\": 9999");
    CHECK_THROWS_WITH_AS(load_snapshot(bytes), doctest::Contains("UnsupportedVersion"), Error);
}

TEST_CASE("corrupt documents are rejected") {
    CHECK_THROWS_WITH_AS(load_snapshot("{not json"), doctest::Contains("CorruptSnapshot"), Error);
    CHECK_THROWS_WITH_AS(load_snapshot("{\"format_version\": 1}"),
                         doctest::Contains("CorruptSnapshot"), Error);
    CHECK_THROWS_WITH_AS(load_snapshot("[1,2,3]"), doctest::Contains("CorruptSnapshot"), Error);
}

TEST_CASE("snapshot files round-trip through disk") {
    const auto m = populated();
    const auto path = std::filesystem::temp_directory_path() / "tiermem_snapshot_test.json";
    save_snapshot_file(m, path);
    CHECK(load_snapshot_file(path) == m);
    std::filesystem::remove(path);
}
