#include "diracwb/report.hpp"

#include <json.hpp>

#include <sstream>

namespace diracwb {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "PASS";
    case Verdict::Fail: return "FAIL";
    case Verdict::Vacuous: return "VACUOUS";
  }
  return "?";
}

std::string to_string(Regime r) {
  return r == Regime::ExactBasis ? "exact-basis" : "sampled-polynomial";
}

CheckReport& CheckReport::absorb(const CheckReport& sub) {
  if (sub.verdict == Verdict::Fail) verdict = Verdict::Fail;
  if (sub.regime == Regime::SampledPolynomial) regime = Regime::SampledPolynomial;
  witnesses.insert(witnesses.end(), sub.witnesses.begin(), sub.witnesses.end());
  warnings.insert(warnings.end(), sub.warnings.begin(), sub.warnings.end());
  for (const auto& n : sub.notes) notes.push_back(sub.check.empty() ? n : sub.check + ": " + n);
  return *this;
}

std::string CheckReport::json_line() const {
  nlohmann::ordered_json j;
  j["check"] = check;
  nlohmann::ordered_json p = nlohmann::ordered_json::object();
  for (const auto& [k, v] : params) p[k] = v;
  j["params"] = p;
  j["verdict"] = to_string(verdict);
  j["regime"] = to_string(regime);
  j["witnesses"] = witnesses;
  j["warnings"] = warnings;
  j["notes"] = notes;
  if (timing_ms >= 0) j["timing_ms"] = timing_ms;
  return j.dump();
}

std::string CheckReport::pretty_line() const {
  std::ostringstream os;
  os << (verdict == Verdict::Pass ? "[PASS]   " : verdict == Verdict::Fail ? "[FAIL]   " : "[VACUOUS]")
     << " " << check;
  for (const auto& [k, v] : params) os << " " << k << "=" << v;
  os << "  (" << to_string(regime) << ")";
  if (!witnesses.empty()) os << "  witness: " << witnesses.front();
  if (!warnings.empty()) os << "  warnings: " << warnings.size();
  return os.str();
}

CheckReport make_report(const std::string& check) {
  CheckReport r;
  r.check = check;
  return r;
}

}  // namespace diracwb
