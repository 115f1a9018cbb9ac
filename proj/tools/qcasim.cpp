// Command-line runner for the named experiments.
//
//   qcasim list
//   qcasim run --recipe NAME [--set key=value]... --out DIR [--descriptor FILE] [--svg]
//
// Exit status: 0 all checks passed, 1 a check failed, 2 usage or I/O error.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qcasim/output.hpp"
#include "qcasim/recipes.hpp"

namespace {

constexpr int kUsageError = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw qcasim::DescriptorError("cannot read descriptor '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int print_list() {
  std::size_t width = 0;
  for (const auto& r : qcasim::recipes::list_recipes()) width = std::max(width, r.name.size());
  for (const auto& r : qcasim::recipes::list_recipes())
    std::cout << r.name << std::string(width + 2 - r.name.size(), ' ') << r.summary << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Event-counting relativity, zigzag field walk and gate-bound experiments"};
  app.require_subcommand(1);

  auto* list = app.add_subcommand("list", "List the available recipes");

  auto* run = app.add_subcommand("run", "Run one recipe and write its outputs");
  std::string recipe, descriptor_file, out_dir;
  std::vector<std::string> assignments;
  bool svg = false;
  run->add_option("--recipe", recipe, "Recipe name (see `list`)");
  run->add_option("--set", assignments, "Parameter override key=value (repeatable)");
  run->add_option("--descriptor", descriptor_file, "Descriptor file of key = value lines");
  run->add_option("--out", out_dir, "Output directory")->required();
  run->add_flag("--svg", svg, "Also write SVG spacetime diagrams where the recipe has them");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  if (list->parsed()) return print_list();

  qcasim::ExperimentDescriptor descriptor;
  try {
    if (!descriptor_file.empty())
      descriptor = qcasim::ExperimentDescriptor::from_text(read_file(descriptor_file));
    if (!recipe.empty()) descriptor.set_recipe(recipe);
    if (descriptor.recipe().empty())
      throw qcasim::DescriptorError("no recipe given; use --recipe or a descriptor 'recipe' key");
    for (const auto& a : assignments) descriptor.set(a);

    const auto result = qcasim::recipes::run(descriptor, {out_dir, svg});
    for (const auto& [name, ok] : result.summary.at("checks").items())
      std::cout << (ok.get<bool>() ? "PASS " : "FAIL ") << name << '\n';
    std::cout << "summary: " << (std::filesystem::path(out_dir) / "summary.json").string() << '\n';
    return result.exit_code();
  } catch (const qcasim::output::OutputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    // Still leave a summary behind when the output directory is usable.
    try {
      qcasim::output::ensure_directory(out_dir);
      nlohmann::json s = {{"recipe", descriptor.recipe()}, {"error", e.what()}, {"passed", false}};
      qcasim::output::write_json(std::filesystem::path(out_dir) / "summary.json", s);
    } catch (const std::exception&) {
    }
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsageError;
  }
}
