#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <sys/wait.h>

#include "qcasim/output.hpp"
#include "qcasim/recipes.hpp"

using namespace qcasim;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "qcasim_recipe_tests" / name;
  fs::remove_all(dir);
  return dir;
}

recipes::RunResult run(const std::string& recipe, const fs::path& out,
                       std::vector<std::string> sets = {}) {
  ExperimentDescriptor d(recipe);
  for (const auto& s : sets) d.set(s);
  return recipes::run(d, {out, false});
}

int cli(const std::string& args) {
  const std::string cmd = std::string(QCASIM_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("nine recipes are listed") {
  const auto& list = recipes::list_recipes();
  CHECK(list.size() == 9);
  std::set<std::string> names;
  for (const auto& r : list) {
    names.insert(r.name);
    CHECK_FALSE(r.summary.empty());
  }
  CHECK(names == std::set<std::string>{"fig1", "lorentz_fit", "dispersion", "zitter",
                                       "front_speed", "bound_scan", "gates_verify",
                                       "eff_hamiltonian", "units_table"});
}

TEST_CASE("unknown recipes and keys are rejected") {
  try {
    run("fig2", scratch("unknown"));
    FAIL("expected an exception");
  } catch (const recipes::UnknownRecipe& e) {
    CHECK(std::string(e.what()).find("lorentz_fit") != std::string::npos);
  }
  CHECK_THROWS_AS(run("fig1", scratch("badkey"), {"speed=3"}), DescriptorError);
  CHECK_THROWS_AS(run("zitter", scratch("badval"), {"mu=2"}), std::invalid_argument);
}

TEST_CASE("fig1 reproduces the light-clock tallies") {
  const auto r = run("fig1", scratch("fig1"));
  CHECK(r.passed());
  CHECK(r.summary.at("rest_ticktac") == 8);
  CHECK(r.summary.at("boosted_ticktac") == 16);
  CHECK(r.summary.at("rest_sep") == 2);
  CHECK(r.summary.at("boosted_sep") == 1);
}

TEST_CASE("bound scan with a single mass") {
  const auto out = scratch("bound0");
  const auto r = run("bound_scan", out, {"mu=0"});
  CHECK(r.passed());
  CHECK(slurp(out / "bound_scan.csv") == "mu,zeta_max,n_min\n0,1,1\n");
}

TEST_CASE("lorentz fit recipe") {
  const auto out = scratch("lorentz");
  const auto r = run("lorentz_fit", out, {"observer_a=RL", "observer_b=RRRL"});
  CHECK(r.passed());
  CHECK(std::abs(r.summary.at("beta_hat").get<double>() - 0.5) <= 0.02);
  CHECK(slurp(out / "mapping.csv").rfind("tA,xA,tB,xB\n", 0) == 0);
}

TEST_CASE("failing checks give exit code 1") {
  // Patterns whose tally ratio differs from the lightcone factor.
  const auto out = scratch("fig1fail");
  const auto r = run("fig1", out, {"boosted_pattern=RRLL", "rest_sep=1"});
  CHECK_FALSE(r.passed());
  CHECK(r.exit_code() == 1);
  CHECK(fs::exists(out / "summary.json"));
}

TEST_CASE("outputs are byte-identical across runs") {
  for (const char* recipe : {"lorentz_fit", "zitter", "gates_verify"}) {
    const auto a = scratch(std::string(recipe) + "_a"), b = scratch(std::string(recipe) + "_b");
    const auto ra = run(recipe, a), rb = run(recipe, b);
    REQUIRE(ra.files.size() == rb.files.size());
    for (std::size_t i = 0; i < ra.files.size(); ++i)
      CHECK(slurp(ra.files[i]) == slurp(rb.files[i]));
  }
}

TEST_CASE("golden outputs") {
  const fs::path golden = QCASIM_GOLDEN_DIR;
  const bool update = std::getenv("QCASIM_UPDATE_GOLDEN") != nullptr;
  for (const auto& info : recipes::list_recipes()) {
    CAPTURE(info.name);
    const auto out = scratch("golden_" + info.name);
    const auto r = run(info.name, out);
    CHECK(r.passed());
    for (const auto& file : r.files) {
      const auto expected = golden / info.name / file.filename();
      CAPTURE(expected.string());
      if (update) {
        output::ensure_directory(expected.parent_path());
        output::write_text(expected, slurp(file));
      }
      REQUIRE(fs::exists(expected));
      CHECK(slurp(file) == slurp(expected));
    }
  }
}

TEST_CASE("command line") {
  const auto out = scratch("cli");
  CHECK(cli("list") == 0);
  CHECK(cli("run --recipe units_table --out " + out.string()) == 0);
  CHECK(fs::exists(out / "summary.json"));
  CHECK(cli("run --recipe bound_scan --set mu=0 --set verify=0 --out " + out.string()) == 0);
  CHECK(slurp(out / "bound_scan.csv") == "mu,zeta_max,n_min\n0,1,1\n");
  CHECK(cli("run --recipe fig1 --set boosted_pattern=RRLL --set rest_sep=1 --out " +
            out.string()) == 1);
  CHECK(cli("run --recipe nope --out " + out.string()) == 2);
  CHECK(cli("run --recipe fig1 --set bogus=1 --out " + out.string()) == 2);
  CHECK(cli("run --recipe fig1") == 2);
  CHECK(cli("frobnicate") == 2);
  CHECK(cli("run --recipe fig1 --out /proc/qcasim_cannot_write") == 2);

  const auto desc = out / "experiment.txt";
  output::write_text(desc, "recipe = fig1\nrest_sep = 2\n");
  CHECK(cli("run --descriptor " + desc.string() + " --svg --out " + out.string()) == 0);
  CHECK(fs::exists(out / "fig1_rest.svg"));
}
