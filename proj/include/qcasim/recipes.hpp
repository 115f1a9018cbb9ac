#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "qcasim/descriptor.hpp"

// Named experiments. Each recipe validates its parameters, writes its data
// files plus summary.json into the output directory and reports the checks it
// ran.
namespace qcasim::recipes {

struct RecipeInfo {
  std::string name;
  std::string summary;
};

const std::vector<RecipeInfo>& list_recipes();

/// Unknown recipe name; the message lists the valid ones.
class UnknownRecipe : public DescriptorError {
public:
  using DescriptorError::DescriptorError;
};

struct RunOptions {
  std::filesystem::path out_dir;
  bool svg = false;
};

struct RunResult {
  nlohmann::json summary;
  std::vector<std::string> failed_checks;
  std::vector<std::filesystem::path> files;

  bool passed() const { return failed_checks.empty(); }
  int exit_code() const { return passed() ? 0 : 1; }
};

/// Throws DescriptorError (or another std::invalid_argument) for bad
/// parameters and output::OutputError when files cannot be written.
RunResult run(const ExperimentDescriptor& descriptor, const RunOptions& options);

}  // namespace qcasim::recipes
