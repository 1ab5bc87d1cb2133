#include "strata/generators.hpp"
#include "strata/text_format.hpp"
#include "strata/wss.hpp"

#include <doctest.h>
#include <json.hpp>

using namespace strata;
using nlohmann::json;

namespace {

std::vector<std::pair<std::string, IncidenceStructure>> shipped() {
  return {{"chain_p1", chain_p1(1)},         {"chain_p1", chain_p1(2)}, {"chain_p1", chain_p1(4)},
          {"cycle_p1", cycle_p1(3)},         {"cycle_p1", cycle_p1(5)}, {"triple_plane", triple_plane()},
          {"resolved_triple_plane", resolved_triple_plane()}};
}

ParseError parse_error_of(const std::string& text) {
  try {
    parse_structure(text);
  } catch (const ParseError& e) {
    return e;
  }
  FAIL("expected a ParseError");
  return ParseError("", "");
}

bool mentions(const std::vector<std::string>& report, const std::string& needle) {
  for (const auto& s : report)
    if (s.find(needle) != std::string::npos) return true;
  return false;
}

}  // namespace

TEST_CASE("structures survive a round trip") {
  for (const auto& [name, s] : shipped()) {
    const std::string text = write_structure(s);
    const IncidenceStructure back = parse_structure(text);
    CHECK(write_structure(back) == text);
    CHECK(validate(back) == validate(s));
    CHECK(back.strata().size() == s.strata().size());
    for (const auto& [k, e] : s.edges()) {
      CHECK(*back.edges().at(k).pullback == *e.pullback);
      CHECK(*back.edges().at(k).pushforward == *e.pushforward);
    }
  }
}

TEST_CASE("equal presentations are shared after parsing") {
  const auto s = parse_structure(write_structure(resolved_triple_plane()));
  CHECK(s.stratum({1}) == s.stratum({3}));
  CHECK(s.stratum({1, 2}) == s.stratum({2, 3}));
  CHECK(s.stratum({1})->size() == 6);
}

TEST_CASE("families survive a round trip") {
  for (const auto& [name, s] : shipped())
    for (const auto& [gname, g1] : generator_families(name, s)) {
      const auto f = compute_all_levels(s, g1);
      const std::string text = write_family(f);
      const auto back = parse_family(text, s);
      CHECK(write_family(back) == text);
      REQUIRE(back.sheets.size() == f.sheets.size());
      CHECK(back.sheets[0].label == f.sheets[0].label);
      CHECK(back.depth() == f.depth());
      for (int m = 1; m <= f.depth(); ++m) CHECK(back.level(m).size() == f.level(m).size());
    }
}

TEST_CASE("zero levels keep their depth") {
  const auto s = chain_p1(2);
  LevelOneInput zero;
  zero.sheets.push_back(Sheet{"zero", {LevelMap{}}});
  const auto f = compute_all_levels(s, zero);
  const auto back = parse_family(write_family(f), s);
  CHECK(back.depth() == 2);
  CHECK(back.level(2).empty());
}

TEST_CASE("big integers are written as decimal strings") {
  const auto s = chain_p1(2);
  const Integer big("1180591620717411303424");
  auto f = identity_family(s);
  auto& c = f.sheets[0].levels[0].at({{1}, {1}});
  c = big * c;
  const std::string text = write_family(f);
  CHECK(text.find("\"1180591620717411303424\"") != std::string::npos);
  const auto back = parse_family(text, s);
  CHECK(back.sheets[0].levels[0].at({{1}, {1}}) == c);
  CHECK(parse_family(text, s).sheets[0].levels[0].at({{2}, {2}}).coeffs() == std::vector<Integer>{1, 1});
}

TEST_CASE("a bare levels list is one sheet") {
  const auto s = chain_p1(2);
  const std::string text = R"({"format": "strata-family/1", "levels": [
    {"I": [1], "J": [1], "codim": 1, "coeffs": [1, "1"]},
    {"I": [2], "J": [2], "codim": 1, "coeffs": [1, 1]}]})";
  const auto f = parse_family(text, s);
  REQUIRE(f.sheets.size() == 1);
  CHECK(f.sheets[0].label == "family");
  CHECK(compute_all_levels(s, f).level(2).size() == 1);
}

TEST_CASE("parse errors name the field or the line") {
  SUBCASE("malformed integer") {
    json doc = json::parse(write_structure(chain_p1(2)));
    doc["edges"][1]["pushforward"][0][0] = "1.5";
    const auto e = parse_error_of(doc.dump());
    CHECK(e.field() == "edges[1].pushforward[0][0]");
    CHECK(std::string(e.what()).find("malformed integer") != std::string::npos);
  }
  SUBCASE("fractional number") {
    json doc = json::parse(write_structure(chain_p1(2)));
    doc["edges"][0]["pullback"][0][0] = 0.5;
    CHECK(parse_error_of(doc.dump()).field() == "edges[0].pullback[0][0]");
  }
  SUBCASE("syntax error") {
    const auto e = parse_error_of("{\n  \"format\": \"strata-incidence/1\",\n  \"t\": 2,,\n}");
    CHECK(e.line() == 3);
    CHECK(std::string(e.what()).rfind("line 3", 0) == 0);
  }
  SUBCASE("wrong format tag") {
    json doc = json::parse(write_structure(chain_p1(2)));
    doc["format"] = "strata-family/1";
    CHECK(parse_error_of(doc.dump()).field() == "format");
  }
  SUBCASE("missing field") {
    json doc = json::parse(write_structure(chain_p1(2)));
    doc.erase("n");
    CHECK(parse_error_of(doc.dump()).field() == "n");
  }
  SUBCASE("unsorted key") {
    json doc = json::parse(write_structure(chain_p1(2)));
    doc["strata"][1]["key"] = json::array({2, 1});
    CHECK(parse_error_of(doc.dump()).field() == "strata[1].key");
  }
  SUBCASE("wrong number of images") {
    json doc = json::parse(write_structure(chain_p1(2)));
    doc["edges"][0]["pullback"].erase(1);
    CHECK(parse_error_of(doc.dump()).field() == "edges[0].pullback");
  }
  SUBCASE("family with a wrong codim") {
    const auto s = chain_p1(2);
    const std::string text =
        R"({"format": "strata-family/1", "levels": [{"I": [1], "J": [1], "codim": 2, "coeffs": [1]}]})";
    try {
      parse_family(text, s);
      FAIL("expected a ParseError");
    } catch (const ParseError& e) {
      CHECK(e.field() == "levels[0].codim");
    }
  }
  SUBCASE("unreadable file") {
    CHECK_THROWS_AS(read_file("/nonexistent/structure.wss"), ParseError);
  }
}

TEST_CASE("structural problems are left to validate") {
  SUBCASE("edge to an absent stratum") {
    json doc = json::parse(write_structure(chain_p1(2)));
    doc["edges"][0]["to"] = json::array({1, 3});
    const auto s = parse_structure(doc.dump());
    CHECK(mentions(validate(s), "{1} -> {1,3} joins an absent stratum"));
  }
  SUBCASE("missing pushforward") {
    json doc = json::parse(write_structure(chain_p1(2)));
    doc["edges"][0].erase("pushforward");
    const auto s = parse_structure(doc.dump());
    CHECK(mentions(validate(s), "pushforward data missing"));
    CHECK_THROWS_AS(build_e1(s), WssError);
  }
  SUBCASE("missing stratum") {
    json doc = json::parse(write_structure(chain_p1(3)));
    doc["strata"].erase(doc["strata"].begin());  // drops {1}
    json kept = json::array();
    for (const auto& e : doc["edges"])
      if (e["from"] != json::array({1})) kept.push_back(e);
    doc["edges"] = kept;
    const auto s = parse_structure(doc.dump());
    CHECK(mentions(validate(s), "downward closure: {1,2} is present but {1} is absent"));
  }
}

TEST_CASE("write_file creates directories") {
  const auto dir = std::filesystem::temp_directory_path() / "strata_text_format_test" / "nested";
  std::filesystem::remove_all(dir.parent_path());
  write_file(dir / "x.wss", write_structure(chain_p1(2)));
  CHECK(read_file(dir / "x.wss") == write_structure(chain_p1(2)));
  std::filesystem::remove_all(dir.parent_path());
}
