#include "rotgraph/report.hpp"

#include "json.hpp"

namespace rotgraph {

namespace {

nlohmann::json as_json(const Report& r) {
  nlohmann::json j;
  j["check"] = r.check;
  j["instance"] = r.instance;
  j["passed"] = r.passed;
  j["violations"] = r.violations;
  j["witnesses"] = r.witnesses;
  j["stats"] = r.stats;
  return j;
}

}  // namespace

void Report::fail(const std::string& witness) {
  passed = false;
  ++violations;
  if (witnesses.size() < kMaxWitnesses) witnesses.push_back(witness);
}

void Report::absorb(const Report& other) {
  if (!other.passed) passed = false;
  violations += other.violations;
  for (const auto& w : other.witnesses) {
    if (witnesses.size() >= kMaxWitnesses) break;
    witnesses.push_back(other.instance.empty() ? w : other.instance + ": " + w);
  }
  for (const auto& [k, v] : other.stats) stats[k] += v;
}

std::string Report::to_json() const { return as_json(*this).dump(); }

std::string reports_to_json(const std::vector<Report>& reports) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : reports) arr.push_back(as_json(r));
  return arr.dump();
}

}  // namespace rotgraph
