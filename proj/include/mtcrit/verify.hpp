#pragma once
// The invariant suite behind `mtcrit verify`: identities and oracle comparisons that
// hold at desk scale, one row per check.

#include <map>
#include <string>
#include <vector>

namespace mtc {

struct CheckRow {
  std::string name;
  bool pass = false;
  double value = 0.0;
  double threshold = 0.0;
  std::string note;
};

struct VerifyOptions {
  unsigned seed = 1;
  double tolerance_scale = 1.0;
  // Override reference constants, keyed "A_0", "A_1", "A_2", "B_0" (fault injection).
  std::map<std::string, double> reference_override;
};

std::vector<CheckRow> run_verification(const VerifyOptions& opt = {});

}  // namespace mtc
