#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <fstream>
#include <sstream>

#include "flatband/store.hpp"

using namespace flatband;

TEST_CASE("csv format: header, 17 significant digits, byte-stable reruns") {
    auto dir = std::filesystem::temp_directory_path() / "flatband_store_test";
    std::filesystem::remove_all(dir);
    auto emit = [&] {
        ResultStore store(dir);
        store.write_csv("t.csv", {"a", "b", "label"},
                        {{1.0 / 3.0, (long long)7, std::string("x")},
                         {2.123456789012345678, (long long)-1, std::string("y")}});
        store.finalize("test", R"({"b":1,"a":2})");
    };
    emit();
    std::stringstream first;
    first << std::ifstream(dir / "t.csv").rdbuf();
    emit();
    std::stringstream second;
    second << std::ifstream(dir / "t.csv").rdbuf();
    CHECK(first.str() == second.str());
    CHECK(first.str().substr(0, 10) == "a,b,label\n");
    CHECK(first.str().find("0.33333333333333331") != std::string::npos);
}

TEST_CASE("config hash is stable under key reordering") {
    CHECK(ResultStore::config_hash(R"({"a":1,"b":[1,2]})") ==
          ResultStore::config_hash(R"({"b":[1,2],"a":1})"));
    CHECK(ResultStore::config_hash(R"({"a":1})") != ResultStore::config_hash(R"({"a":2})"));
}

TEST_CASE("row width mismatch is rejected") {
    ResultStore store(std::filesystem::temp_directory_path() / "flatband_store_test2");
    CHECK_THROWS(store.write_csv("bad.csv", {"a", "b"}, {{1.0}}));
}
