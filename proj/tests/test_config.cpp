#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "folner/config.hpp"
#include "folner/errors.hpp"
#include "folner/families.hpp"

using namespace folner;
using nlohmann::json;

TEST_CASE("config parsing")
{
  auto cfg = parse_config(json::parse(R"({"schema": 1})"), ".");
  CHECK(cfg.group->signature() == "integers:1");
  CHECK(cfg.sched.depth == 2);
  CHECK(cfg.caps.set_size == (std::size_t{1} << 22));

  auto full = parse_config(json::parse(R"({
    "schema": 1,
    "group": {"kind": "heisenberg"},
    "schedule": {"t_base": {"num": "3", "den": "1"}, "n_base": 3, "eps_base": "5/2", "depth": 3},
    "action": {"tolerance": "1/100", "eps": [1, "1/4"]},
    "sweep": {"t_bases": ["2", "3"], "n_bases": [2, 3]}
  })"),
                           ".");
  CHECK(full.group->signature() == "heisenberg");
  CHECK(full.sched.t_base == 3);
  CHECK(full.sched.eps_base == make_rational(5, 2));
  CHECK(full.action.tolerance == make_rational(1, 100));
  CHECK(full.action.eps == std::vector<Rational>{1, make_rational(1, 4)});
  CHECK(full.sweep.n_bases == std::vector<std::uint64_t>{2, 3});

  CHECK_THROWS_AS(parse_config(json::parse(R"({})"), "."), ParseError);
  CHECK_THROWS_AS(parse_config(json::parse(R"({"schema": 2})"), "."), ParseError);
  CHECK_THROWS_AS(parse_config(json::parse(R"({"schema": 1, "caps": {"set_size": 0}})"), "."),
                  InvalidArgument);
  CHECK_THROWS_AS(parse_config(json::parse(R"({"schema": 1, "schedule": {"t_base": "1"}})"), "."),
                  InvalidArgument);
  CHECK_THROWS_AS(parse_config(json::parse(R"({"schema": 1, "schedule": {"depth": "x"}})"), "."),
                  ParseError);
  CHECK_THROWS_AS(
      parse_config(json::parse(R"({"schema": 1, "family": {"type": "lamplighter"}})"), "."),
      InvalidArgument);
  CHECK_THROWS_AS(parse_config(json::parse(R"({"schema": 1, "action": {"eps": ["-1"]}})"), "."),
                  InvalidArgument);
}

TEST_CASE("family members")
{
  auto cfg = parse_config(json::parse(R"({"schema": 1, "family": {"growth": "linear"}})"), ".");
  CHECK(family_member(cfg, 3) == integer_interval(-3, 3));
  auto poly = parse_config(json::parse(R"({"schema": 1})"), ".");
  CHECK(family_member(poly, 2) == integer_interval(-16, 16));
  CHECK_THROWS_AS(family_member(poly, 8), ResourceLimit);
  CHECK_THROWS_AS(family_member(poly, 0), InvalidArgument);

  auto lamp = parse_config(
      json::parse(R"({"schema": 1, "group": "lamplighter", "family": {"type": "lamplighter"}})"),
      ".");
  CHECK(family_member(lamp, 2) == lamplighter_folner(2));

  auto dir = std::filesystem::temp_directory_path() / "folner_config_test";
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "f1.txt") << to_listing(integer_interval(-1, 1));
  std::ofstream(dir / "h.txt") << to_listing(lamplighter_folner(1));
  auto custom = parse_config(
      json::parse(R"({"schema": 1, "family": {"type": "custom", "files": ["f1.txt", "h.txt"]}})"),
      dir.string());
  CHECK(family_member(custom, 1) == integer_interval(-1, 1));
  CHECK_THROWS_AS(family_member(custom, 2), TypeMismatch);
  CHECK_THROWS_AS(family_member(custom, 3), InvalidArgument);
  std::filesystem::remove_all(dir);
}
