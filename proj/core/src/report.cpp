#include "z2h/report.hpp"

#include "z2h/errors.hpp"

namespace z2h {

void VerificationReport::set(const std::string& key, double value) {
  for (auto& kv : metrics) {
    if (kv.first == key) {
      kv.second = value;
      return;
    }
  }
  metrics.emplace_back(key, value);
}

bool VerificationReport::has(const std::string& key) const {
  for (const auto& kv : metrics) {
    if (kv.first == key) return true;
  }
  return false;
}

double VerificationReport::get(const std::string& key) const {
  for (const auto& kv : metrics) {
    if (kv.first == key) return kv.second;
  }
  throw PreconditionError("report '" + name + "' has no metric '" + key + "'");
}

void VerificationReport::require(bool ok, const std::string& note) {
  if (!ok) {
    passed = false;
    notes.push_back(note);
  }
}

}  // namespace z2h
