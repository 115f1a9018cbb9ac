#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qcasim {

class DescriptorError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Parses `key = value` lines. Blank lines and `#` comments are skipped;
/// duplicate keys and lines without '=' are errors.
std::vector<std::pair<std::string, std::string>> parse_key_values(const std::string& text);

double parse_double(const std::string& key, const std::string& value);
std::int64_t parse_int(const std::string& key, const std::string& value);

/// 17 significant digits, '.' decimal separator, locale independent.
std::string format_double(double v);

/// A recipe name plus key=value parameters. Every run is a pure function of
/// the descriptor, so lookups record which keys were consumed and
/// `reject_unknown` refuses anything a recipe did not ask for.
class ExperimentDescriptor {
public:
  ExperimentDescriptor() = default;
  explicit ExperimentDescriptor(std::string recipe) : recipe_(std::move(recipe)) {}

  static ExperimentDescriptor from_text(const std::string& text);

  const std::string& recipe() const { return recipe_; }
  void set_recipe(std::string r) { recipe_ = std::move(r); }

  /// Parses and stores "key=value"; later assignments override earlier ones.
  void set(const std::string& assignment);
  void set(const std::string& key, const std::string& value) { params_[key] = value; }
  bool has(const std::string& key) const { return params_.count(key) != 0; }

  double get_double(const std::string& key, double fallback) const;
  std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;

  /// Throws DescriptorError naming the first parameter not in `known`.
  void reject_unknown(const std::set<std::string>& known) const;

  const std::map<std::string, std::string>& params() const { return params_; }

private:
  std::string recipe_;
  std::map<std::string, std::string> params_;
};

}  // namespace qcasim
