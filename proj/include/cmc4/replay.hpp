#pragma once
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cmc4/exprio.hpp"
#include "cmc4/poly.hpp"

namespace cmc4 {

enum class Verdict { Certified, Failed, BestEffort };
enum class MatchKind { Exact, UpToScalar, Mismatch, NoFixture };

const char* to_string(Verdict v);
const char* to_string(MatchKind m);

// One derived object, possibly checked against a fixture. `derived` is the
// primitive part; when the fixture matched, derived-as-computed equals
// (ratio_num / ratio_den) * fixture (content bookkeeping, cleared
// denominators excluded when noted in `method`).
struct StepRecord {
  std::string id;
  std::string paper_eq;  // fixture id, empty for internal steps
  Poly derived;
  MatchKind match = MatchKind::NoFixture;
  Int ratio_num = 0, ratio_den = 0;
  std::string method;
  std::vector<std::pair<std::string, int>> removed_factors;
  std::optional<long long> weight;
  double elapsed_ms = 0.0;
  bool ok = true;  // internal consistency steps report failure here
};

struct StageReport {
  std::string stage;
  Verdict verdict = Verdict::Failed;
  std::vector<StepRecord> steps;
  std::string note;
};

// Mechanical replay of the derivation: each stage recomputes its displayed
// relations from first principles and certifies them against the fixture
// corpus. Stages cache their results; prerequisite stages (lemma33 before
// lemma34 before caseiii) run automatically and gate on certification.
class Replay {
 public:
  Replay(FixtureFile sec3, FixtureFile sec4);
  static Replay from_dir(const std::string& dir);

  // identities, lemma33, lemma34, caseA, caseB, frame, caseiii.
  static const std::vector<std::string>& stage_names();

  const StageReport& run(const std::string& stage);
  std::vector<StageReport> run_all();

  const FixtureFile& sec3() const { return sec3_; }
  const FixtureFile& sec4() const { return sec4_; }

  // Terminal-size guard for the case (iii) ladder (term count; 0 disables).
  void set_term_cap(long long cap) { term_cap_ = cap; }

 private:
  StageReport run_identities();
  StageReport run_lemma33();
  StageReport run_lemma34();
  StageReport run_caseA();
  StageReport run_caseB();
  StageReport run_frame();
  StageReport run_caseiii();

  const Poly& fx3(const std::string& id) const { return sec3_.at(id).expr; }
  const Poly& fx4(const std::string& id) const { return sec4_.at(id).expr; }

  FixtureFile sec3_, sec4_;
  long long term_cap_ = 2000000;
  std::map<std::string, StageReport> cache_;

  // Products carried between stages.
  std::map<std::string, FracPoly> closed_;   // lemma33: f2..f5 recursion
  std::map<std::string, Poly> blocks_;       // lemma34: aligned b1, b2
};

}  // namespace cmc4
