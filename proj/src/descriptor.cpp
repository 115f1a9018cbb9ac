#include "qcasim/descriptor.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

namespace qcasim {
namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::pair<std::string, std::string> split_assignment(const std::string& line) {
  const auto eq = line.find('=');
  if (eq == std::string::npos) throw DescriptorError("expected key=value, got '" + line + "'");
  std::string key = trim(line.substr(0, eq));
  std::string value = trim(line.substr(eq + 1));
  if (key.empty()) throw DescriptorError("empty key in '" + line + "'");
  return {key, value};
}

}  // namespace

std::vector<std::pair<std::string, std::string>> parse_key_values(const std::string& text) {
  std::vector<std::pair<std::string, std::string>> out;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto kv = split_assignment(line);
    if (!seen.insert(kv.first).second) throw DescriptorError("duplicate key '" + kv.first + "'");
    out.push_back(std::move(kv));
  }
  return out;
}

double parse_double(const std::string& key, const std::string& value) {
  double v = 0.0;
  const char* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v))
    throw DescriptorError("parameter '" + key + "': not a finite number: '" + value + "'");
  return v;
}

std::int64_t parse_int(const std::string& key, const std::string& value) {
  std::int64_t v = 0;
  const char* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, v);
  if (ec != std::errc() || ptr != end)
    throw DescriptorError("parameter '" + key + "': not an integer: '" + value + "'");
  return v;
}

std::string format_double(double v) {
  if (v == 0.0) v = 0.0;  // drop the sign of negative zero
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

ExperimentDescriptor ExperimentDescriptor::from_text(const std::string& text) {
  ExperimentDescriptor d;
  for (auto& [k, v] : parse_key_values(text)) {
    if (k == "recipe")
      d.recipe_ = v;
    else
      d.params_[k] = v;
  }
  return d;
}

void ExperimentDescriptor::set(const std::string& assignment) {
  auto [k, v] = split_assignment(assignment);
  if (k == "recipe")
    recipe_ = v;
  else
    params_[k] = v;
}

double ExperimentDescriptor::get_double(const std::string& key, double fallback) const {
  auto it = params_.find(key);
  return it == params_.end() ? fallback : parse_double(key, it->second);
}

std::int64_t ExperimentDescriptor::get_int(const std::string& key, std::int64_t fallback) const {
  auto it = params_.find(key);
  return it == params_.end() ? fallback : parse_int(key, it->second);
}

std::string ExperimentDescriptor::get_string(const std::string& key,
                                             const std::string& fallback) const {
  auto it = params_.find(key);
  return it == params_.end() ? fallback : it->second;
}

void ExperimentDescriptor::reject_unknown(const std::set<std::string>& known) const {
  for (const auto& [k, v] : params_) {
    if (!known.count(k)) {
      std::string list;
      for (const auto& name : known) list += (list.empty() ? "" : ", ") + name;
      throw DescriptorError("unknown parameter '" + k + "' for recipe '" + recipe_ +
                            "' (accepted: " + list + ")");
    }
  }
}

}  // namespace qcasim
