#ifndef SNP_GENERATORS_HPP
#define SNP_GENERATORS_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "snp/logic.hpp"
#include "snp/structures.hpp"

namespace snp {

// Counter-based deterministic generator; the value at counter i depends only
// on (seed, stream, i). Algorithm id is embedded in reports.
inline constexpr const char* kRngAlgorithm = "splitmix64-ctr/1";

std::uint64_t splitmix64(std::uint64_t x);

class CtrRng {
 public:
  CtrRng(std::uint64_t seed, std::uint64_t stream = 0)
      : key_(splitmix64(seed ^ splitmix64(stream ^ 0x5851F42D4C957F2DULL))) {}

  std::uint64_t next() { return splitmix64(key_ + 0x9E3779B97F4A7C15ULL * ++counter_); }
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  int below(int n) { return n <= 1 ? 0 : static_cast<int>(next() % static_cast<unsigned>(n)); }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

// Each potential tuple is included independently with probability `density`.
Structure random_structure(const Signature& sig, int size, double density,
                           std::uint64_t seed);

enum class Fragment { MMSNP, GMMSNPIneq, GMSNP, MPART, GMPARTIneq };

std::string to_string(Fragment f);

struct SentenceParams {
  Signature input_sig;          // empty: generate one symbol R of arity 1..max_arity
  int max_arity = 3;            // for the generated symbol
  int max_conjuncts = 3;
  int max_tau_atoms = 2;
  int max_sigma_literals = 3;
  int n_existential = 2;
  int existential_arity = 1;    // >1 only meaningful for GMSNP
  int max_vars = 4;
  bool require_connected = false;
  int rejection_cap = 500;
};

// Rejection-samples until the classifier confirms the fragment flag.
SnpSentence random_sentence(Fragment fragment, const SentenceParams& params,
                            std::uint64_t seed);

// All structures with the exact domain size over sig (every subset of every
// possible tuple set). Callback returns false to stop. Throws if the tuple
// universe exceeds `max_universe` (the enumeration would be astronomical).
void enumerate_structures(const Signature& sig, int size,
                          const std::function<bool(const Structure&)>& cb,
                          int max_universe = 24);

// Sizes 0..max_size, ascending; same guard.
void enumerate_structures_up_to(const Signature& sig, int max_size,
                                const std::function<bool(const Structure&)>& cb,
                                int max_universe = 24);

// Bounded witness search: smallest structures first (exhaustive while the
// tuple universe is small, seeded random samples above), first structure with
// the requested satisfiability verdict. Used for fixed YES / fixed NO
// instances whose existence the constructions assume.
struct WitnessSearchOptions {
  int max_size = 4;
  int exhaustive_universe = 16;
  int random_samples_per_size = 200;
  std::uint64_t seed = 1;
  long long check_nodes = 2'000'000;
};

std::optional<Structure> find_instance_with_verdict(const SnpSentence& phi, bool satisfied,
                                                    const WitnessSearchOptions& opts = {});

}  // namespace snp

#endif
