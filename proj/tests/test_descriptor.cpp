#include "doctest.h"

#include "qcasim/descriptor.hpp"

using namespace qcasim;

TEST_CASE("key-value text skips comments and blank lines") {
  const auto kv = parse_key_values("# header\n a = 1 \n\nb=two # trailing\n");
  REQUIRE(kv.size() == 2);
  CHECK(kv[0].first == "a");
  CHECK(kv[0].second == "1");
  CHECK(kv[1].first == "b");
  CHECK(kv[1].second == "two");
}

TEST_CASE("malformed key-value text is rejected") {
  CHECK_THROWS_AS(parse_key_values("a=1\na=2\n"), DescriptorError);
  CHECK_THROWS_AS(parse_key_values("no equals sign\n"), DescriptorError);
  CHECK_THROWS_AS(parse_key_values("=3\n"), DescriptorError);
}

TEST_CASE("numbers parse strictly") {
  CHECK(parse_double("x", "0.25") == 0.25);
  CHECK(parse_double("x", "-1e-3") == -1e-3);
  CHECK_THROWS_AS(parse_double("x", "1.0abc"), DescriptorError);
  CHECK_THROWS_AS(parse_double("x", ""), DescriptorError);
  CHECK_THROWS_AS(parse_double("x", "inf"), DescriptorError);
  CHECK(parse_int("n", "-12") == -12);
  CHECK_THROWS_AS(parse_int("n", "1.5"), DescriptorError);
}

TEST_CASE("format_double keeps 17 significant digits") {
  CHECK(format_double(0.0) == "0");
  CHECK(format_double(-0.0) == "0");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(parse_double("x", format_double(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("descriptor lookups and unknown keys") {
  auto d = ExperimentDescriptor::from_text("recipe = zitter\nmu = 0.3\nsteps = 128\n");
  CHECK(d.recipe() == "zitter");
  CHECK(d.get_double("mu", 0.0) == 0.3);
  CHECK(d.get_int("steps", 0) == 128);
  CHECK(d.get_double("width", 8.0) == 8.0);
  CHECK(d.get_string("pattern", "RL") == "RL");
  d.set("mu=0.6");
  CHECK(d.get_double("mu", 0.0) == 0.6);
  CHECK_NOTHROW(d.reject_unknown({"mu", "steps"}));
  CHECK_THROWS_AS(d.reject_unknown({"mu"}), DescriptorError);
  CHECK_THROWS_AS(d.set("novalue"), DescriptorError);
  d.set("steps", "x");
  CHECK_THROWS_AS(d.get_int("steps", 0), DescriptorError);
}
