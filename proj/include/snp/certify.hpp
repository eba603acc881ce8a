#ifndef SNP_CERTIFY_HPP
#define SNP_CERTIFY_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "snp/checker.hpp"
#include "snp/generators.hpp"

namespace snp {

enum class Reduction {
  GmmsnpEnrich,
  GmmsnpToMmsnp,
  GmsnpPrune,
  GmsnpEnrich,
  GmsnpConcat,
  MatrixAgree,
  NpRoundtrip,
  PhiOracleAgree,
};

std::string to_string(Reduction r);
Reduction parse_reduction(const std::string& name);

struct TrialConfig {
  std::uint64_t seed = 1;
  int trials = 100;
  int max_domain = 5;
  int max_conjuncts = 4;
  int max_arity = 3;
  Budget budget;
};

enum class TrialOutcome { Agree, Disagree, BudgetExceeded };

struct TrialLine {
  int index = 0;
  std::string digest;
  std::string lhs, rhs;
  TrialOutcome outcome = TrialOutcome::Agree;
};

struct TrialReport {
  Reduction reduction = Reduction::GmmsnpEnrich;
  std::uint64_t seed = 0;
  std::vector<TrialLine> lines;
  int agree = 0, disagree = 0, budget_exceeded = 0;
  std::string first_counterexample;  // fully rendered inputs, replayable

  bool passed() const { return disagree == 0; }
  std::string render() const;
};

// Runs both sides of the named reduction's equivalence with the model checker
// (or the machine simulator) as the oracle. Identical configs reproduce
// byte-identical reports.
TrialReport certify(Reduction reduction, const TrialConfig& config);

std::string digest_of(const std::string& rendered_inputs);

}  // namespace snp

#endif
