#include "voganish/cli/cli.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>

using namespace voganish;
using namespace voganish::cli;

TEST_CASE("triangles are read from names, compact ranks, full form and JSON") {
  auto ks = *named_orbit("KS");
  CHECK(read_triangle("KS", ks_mults()) == ks);
  CHECK(read_triangle(" 2222/020/00/0\n", ks_mults()) == ks);
  CHECK(read_triangle(multiseg::format_triangle(ks), ks_mults()) == ks);
  CHECK(read_triangle(multiseg::to_json(ks), ks_mults()) == ks);
  CHECK_THROWS_AS(read_triangle("2222/020", ks_mults()), Error);
  CHECK_THROWS_AS(cover_base("Cx"), Error);
  for (const auto& n : orbit_names()) CHECK(multiseg::is_valid(*named_orbit(n)));
}

TEST_CASE("catalog serialisation round trips and detects corruption") {
  auto cat = catalog_build({1, 2, 2, 1}, 1, 2);
  auto back = catalog_from_json(to_json(cat));
  REQUIRE(back.entries.size() == cat.entries.size());
  for (std::size_t i = 0; i < cat.entries.size(); ++i) {
    CHECK(back.entries[i].triangle == cat.entries[i].triangle);
    CHECK(back.entries[i].dual == cat.entries[i].dual);
    CHECK(cat.entries[cat.entries[i].dual].dual == i);
  }
  std::string text = to_json(cat);
  auto pos = text.find("\"dual\":");
  text.replace(pos, 8, "\"dual\":9");
  CHECK_THROWS_AS(catalog_from_json(text), Error);
  CHECK_THROWS_AS(catalog_from_json("{"), Error);
}

TEST_CASE("catalog cache is reused and rebuilt when corrupt") {
  namespace fs = std::filesystem;
  auto dir = fs::temp_directory_path() / "voganish-cache-test";
  fs::remove_all(dir);
  auto first = catalog_load({1, 2, 1}, dir.string());
  CHECK_FALSE(first.from_cache);
  auto second = catalog_load({1, 2, 1}, dir.string());
  CHECK(second.from_cache);
  CHECK(second.entries.size() == first.entries.size());
  std::ofstream(catalog_path({1, 2, 1}, dir.string())) << "not json";
  auto third = catalog_load({1, 2, 1}, dir.string());
  CHECK_FALSE(third.from_cache);
  fs::remove_all(dir);
}

TEST_CASE("verification reports are deterministic") {
  VerifyOptions opt;
  opt.criteria = {3, 7, 13};
  opt.workers = 3;
  auto a = to_json(ks_verify(opt)), b = to_json(ks_verify(opt));
  CHECK(a == b);
  CHECK(a.find("\"verdict\": \"PASS\"") != std::string::npos);
  CHECK_THROWS_AS(run_criterion(99, 1), Error);
}

TEST_CASE("every criterion carries a name and a source") {
  CHECK(criterion_count() == 14);
  auto c = run_criterion(13, 1);
  CHECK(c.criterion == 13);
  CHECK_FALSE(c.name.empty());
  CHECK_FALSE(c.source.empty());
}
