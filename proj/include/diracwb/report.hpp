#pragma once

#include <string>
#include <utility>
#include <vector>

namespace diracwb {

enum class Verdict { Pass, Fail, Vacuous };
enum class Regime { ExactBasis, SampledPolynomial };

std::string to_string(Verdict v);
std::string to_string(Regime r);

// Structured verdict of one verification run. FAIL always carries at least
// one witness; reports are deterministic given inputs and seed (timing is
// emitted only when explicitly requested).
struct CheckReport {
  std::string check;
  std::vector<std::pair<std::string, std::string>> params;
  Verdict verdict = Verdict::Pass;
  Regime regime = Regime::ExactBasis;
  std::vector<std::string> witnesses;
  std::vector<std::string> warnings;  // e.g. rank-drop loci
  std::vector<std::string> notes;     // counts, scope statements
  double timing_ms = -1.0;            // < 0: not measured / not emitted

  bool passed() const { return verdict != Verdict::Fail; }

  CheckReport& param(const std::string& k, const std::string& v) {
    params.emplace_back(k, v);
    return *this;
  }
  CheckReport& fail(const std::string& witness) {
    verdict = Verdict::Fail;
    witnesses.push_back(witness);
    return *this;
  }
  CheckReport& note(const std::string& n) {
    notes.push_back(n);
    return *this;
  }
  CheckReport& warn(const std::string& w) {
    warnings.push_back(w);
    return *this;
  }
  // Merges a sub-check: conjunction of verdicts, union of diagnostics.
  CheckReport& absorb(const CheckReport& sub);

  std::string json_line() const;
  std::string pretty_line() const;
};

CheckReport make_report(const std::string& check);

}  // namespace diracwb
