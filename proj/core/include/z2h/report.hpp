#pragma once

#include <string>
#include <utility>
#include <vector>

namespace z2h {

// Structured numerical evidence returned by the verification operations.
struct VerificationReport {
  std::string name;
  bool passed = true;
  std::vector<std::pair<std::string, double>> metrics;  // insertion order
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<std::string> notes;

  void set(const std::string& key, double value);
  bool has(const std::string& key) const;
  double get(const std::string& key) const;
  // Marks the report failed and records `note` when `ok` is false.
  void require(bool ok, const std::string& note);
};

}  // namespace z2h
