#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace rotgraph {

// Outcome of one verification check. Witnesses are capped; `violations`
// keeps the full count.
struct Report {
  static constexpr std::size_t kMaxWitnesses = 20;

  std::string check;
  std::string instance;
  bool passed = true;
  std::size_t violations = 0;
  std::vector<std::string> witnesses;
  // Observed counts (edge classes, fiber sizes, ...), reported alongside.
  std::map<std::string, std::int64_t> stats;

  Report() = default;
  Report(std::string check_name, std::string instance_name)
      : check(std::move(check_name)), instance(std::move(instance_name)) {}

  void fail(const std::string& witness);
  // Records a failure with the witness only when `ok` is false.
  template <typename F>
  void expect(bool ok, F&& witness) {
    if (!ok) fail(witness());
  }
  void count(const std::string& key, std::int64_t by = 1) { stats[key] += by; }
  // Folds another report's failures and stats into this one.
  void absorb(const Report& other);

  // {"check", "instance", "passed", "violations", "witnesses", "stats"}
  std::string to_json() const;
};

std::string reports_to_json(const std::vector<Report>& reports);

}  // namespace rotgraph
