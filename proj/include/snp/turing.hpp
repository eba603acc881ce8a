#ifndef SNP_TURING_HPP
#define SNP_TURING_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

namespace snp {

// One-way infinite tape NTM. The first-symbol marker is spelled ">" and the
// blank "_" in machine sources and input strings.
inline constexpr const char* kFirstSym = ">";
inline constexpr const char* kBlankSym = "_";

struct TuringMachine {
  std::vector<std::string> states;
  std::vector<std::string> alphabet;  // includes ">" and "_"
  int start = 0;
  std::set<int> accepts, rejects;
  // (state, symbol) -> nondeterministic options (state', symbol', dir R/L)
  std::map<std::pair<int, int>, std::vector<std::tuple<int, int, char>>> delta;

  int state_id(const std::string& name) const;
  int symbol_id(const std::string& name) const;
  bool halting(int q) const { return accepts.count(q) || rejects.count(q); }
};

TuringMachine parse_machine(const std::string& text);
std::string render_machine(const TuringMachine& m);

struct StepPolynomial {
  std::vector<long long> coeffs;  // c0 + c1 n + c2 n^2 + ...

  long long eval(long long n) const;
  static StepPolynomial parse(const std::string& csv);  // "c0,c1,..."
  std::string render() const;
};

// Clocked semantics: acceptance = some branch reaches an accepting state
// within f(n) base steps, n the raw input length.
struct ClockedMachine {
  TuringMachine base;
  StepPolynomial bound;
};

struct GMoves {
  long long moves = 0;
  long long round_trips = 0;  // f(n)+1
};

// g(n) = (f(n)+1)(2n-2+f(n))/2, the total head movements of a family-O run.
GMoves g_moves(long long n, const StepPolynomial& f);

// Compiled (or hand-built) machine of family O. Runs are driven by the
// ordinary symbol-keyed table but truncated at exactly g(n) steps; the
// trajectory bounces between the first cell and the frontier blank.
struct ObliviousMachine {
  std::vector<std::string> states;
  std::vector<std::string> alphabet;  // Sigma_o
  int q_start = 0;
  StepPolynomial bound;
  std::map<std::pair<int, int>, std::vector<std::tuple<int, int, char>>> table;
  std::vector<int> verdict;     // per state: 0 none, 1 accept, 2 reject
  std::vector<char> is_error;   // per state: error copies answer YES at the end
  std::map<std::string, std::string> provenance;  // state -> origin note

  int state_id(const std::string& name) const;
  int symbol_id(const std::string& name) const;
};

// Input strings are over Sigma minus the blank; compact spelling: ">", plain
// letters, "'" for the visited-blank prime, "^h" for the head mark
// (e.g. ">a^hb" or "_'" ).
std::vector<std::string> parse_input_string(const std::vector<std::string>& alphabet,
                                            const std::string& text);
std::string render_input_string(const std::vector<std::string>& symbols);

struct Trace {
  std::vector<int> positions;             // head position at each time, 1-based
  std::vector<std::string> states;        // machine state at each time
  std::vector<std::uint64_t> tape_hashes; // tape snapshot hash per time
  long long moves = 0;
  long long round_trips = 0;
};

struct SimResult {
  bool accepted = false;
  bool capped = false;          // step cap hit before every branch resolved
  bool position_divergence = false;  // oblivious runs: branches disagreed
  std::string divergence_note;
  Trace trace;                  // deterministic representative branch
  long long explored = 0;       // configurations expanded
};

struct SimOptions {
  long long step_cap = 200'000;
  long long config_cap = 200'000;
  bool exhaustive = true;       // otherwise follow one seeded branch
  std::uint64_t seed = 0;
};

SimResult simulate(const TuringMachine& m, const std::vector<std::string>& input,
                   const SimOptions& opts = {});
SimResult simulate(const ClockedMachine& m, const std::vector<std::string>& input,
                   const SimOptions& opts = {});
SimResult simulate(const ObliviousMachine& m, const std::vector<std::string>& input,
                   const SimOptions& opts = {});

// Family-O compiler. Validates the base machine disciplines it relies on:
// transitions on ">" rewrite ">" and move right, ">" is never written
// elsewhere, nothing writes "_", no transitions read "_", halting states have
// no outgoing transitions, and every non-halting state has a ">"-transition.
ObliviousMachine make_oblivious(const ClockedMachine& m);

// Expected state count of the compiled table (asserted in tests):
// 1 + 4 + 4|Q| + 8|P| with P the transition-connected state pairs.
long long expected_state_count(const TuringMachine& base);

struct ObliviousnessReport {
  bool ok = true;
  std::string first_divergence;
  long long moves = 0;
  long long expected_moves = 0;
  long long round_trips = 0;
};

ObliviousnessReport verify_obliviousness(const ObliviousMachine& mo, int n,
                                         const std::vector<std::vector<std::string>>& sample,
                                         const SimOptions& opts = {});

}  // namespace snp

#endif
