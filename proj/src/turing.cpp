#include "snp/turing.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "snp/generators.hpp"
#include "snp/logic.hpp"

namespace snp {

namespace {

std::uint64_t fnv1a(const std::vector<int>& v) {
  std::uint64_t h = 1469598103934665603ULL;
  for (int x : v) {
    h ^= static_cast<std::uint64_t>(x) + 0x9E37;
    h *= 1099511628211ULL;
  }
  return h;
}

int find_name(const std::vector<std::string>& names, const std::string& n) {
  for (size_t i = 0; i < names.size(); ++i)
    if (names[i] == n) return static_cast<int>(i);
  return -1;
}

}  // namespace

int TuringMachine::state_id(const std::string& name) const { return find_name(states, name); }
int TuringMachine::symbol_id(const std::string& name) const { return find_name(alphabet, name); }
int ObliviousMachine::state_id(const std::string& name) const { return find_name(states, name); }
int ObliviousMachine::symbol_id(const std::string& name) const { return find_name(alphabet, name); }

// ---------------------------------------------------------------------------
// Parsing

namespace {

struct MTok {
  std::vector<std::string> toks;
  size_t i = 0;

  explicit MTok(const std::string& text) {
    std::string cur;
    bool comment = false;
    auto flush = [&]() {
      if (!cur.empty()) {
        toks.push_back(cur);
        cur.clear();
      }
    };
    for (char c : text) {
      if (c == '#') comment = true;
      if (c == '\n') comment = false;
      if (comment) continue;
      if (std::isspace(static_cast<unsigned char>(c)) || c == ',') {
        flush();
      } else if (c == ';') {
        flush();
        toks.push_back(";");
      } else {
        cur += c;
      }
    }
    flush();
  }

  bool eof() const { return i >= toks.size(); }
  const std::string& peek() const {
    static const std::string empty;
    return eof() ? empty : toks[i];
  }
  std::string next() {
    if (eof()) throw std::runtime_error("machine parse: unexpected end of input");
    return toks[i++];
  }
  void expect(const std::string& t) {
    std::string got = next();
    if (got != t)
      throw std::runtime_error("machine parse: expected '" + t + "', got '" + got + "'");
  }
  std::vector<std::string> until_semicolon() {
    std::vector<std::string> out;
    while (peek() != ";") out.push_back(next());
    expect(";");
    return out;
  }
};

}  // namespace

TuringMachine parse_machine(const std::string& text) {
  MTok tk(text);
  TuringMachine m;
  tk.expect("states");
  m.states = tk.until_semicolon();
  if (m.states.empty()) throw std::runtime_error("machine parse: no states");
  tk.expect("start");
  std::string start = tk.next();
  tk.expect(";");
  tk.expect("accept");
  auto acc = tk.until_semicolon();
  tk.expect("reject");
  auto rej = tk.until_semicolon();
  tk.expect("alphabet");
  auto alpha = tk.until_semicolon();

  m.alphabet = {kFirstSym, kBlankSym};
  for (const auto& a : alpha)
    if (a != kFirstSym && a != kBlankSym) m.alphabet.push_back(a);

  auto state_of = [&](const std::string& n) {
    int q = m.state_id(n);
    if (q < 0) throw std::runtime_error("machine parse: unknown state " + n);
    return q;
  };
  auto sym_of = [&](const std::string& n) {
    int s = m.symbol_id(n);
    if (s < 0) throw std::runtime_error("machine parse: unknown symbol " + n);
    return s;
  };

  m.start = state_of(start);
  for (const auto& a : acc) m.accepts.insert(state_of(a));
  for (const auto& r : rej) m.rejects.insert(state_of(r));

  while (!tk.eof()) {
    tk.expect("delta");
    int q = state_of(tk.next());
    int s = sym_of(tk.next());
    tk.expect("->");
    int q2 = state_of(tk.next());
    int s2 = sym_of(tk.next());
    std::string d = tk.next();
    if (d != "L" && d != "R") throw std::runtime_error("machine parse: direction must be L or R");
    tk.expect(";");
    if (m.halting(q))
      throw std::runtime_error("machine parse: transition from halting state " + m.states[q]);
    m.delta[{q, s}].push_back({q2, s2, d[0]});
  }
  return m;
}

std::string render_machine(const TuringMachine& m) {
  std::ostringstream os;
  os << "states";
  for (const auto& s : m.states) os << " " << s;
  os << ";\nstart " << m.states[m.start] << ";\naccept";
  for (int q : m.accepts) os << " " << m.states[q];
  os << ";\nreject";
  for (int q : m.rejects) os << " " << m.states[q];
  os << ";\nalphabet";
  for (const auto& a : m.alphabet)
    if (a != kFirstSym && a != kBlankSym) os << " " << a;
  os << ";\n";
  for (const auto& [key, opts] : m.delta)
    for (const auto& [q2, s2, d] : opts)
      os << "delta " << m.states[key.first] << " " << m.alphabet[key.second] << " -> "
         << m.states[q2] << " " << m.alphabet[s2] << " " << d << ";\n";
  return os.str();
}

long long StepPolynomial::eval(long long n) const {
  long long v = 0, p = 1;
  for (long long c : coeffs) {
    v += c * p;
    p *= n;
  }
  return v;
}

StepPolynomial StepPolynomial::parse(const std::string& csv) {
  StepPolynomial f;
  std::istringstream in(csv);
  std::string part;
  while (std::getline(in, part, ',')) {
    if (part.empty()) continue;
    f.coeffs.push_back(std::stoll(part));
  }
  if (f.coeffs.empty()) throw std::runtime_error("step polynomial: no coefficients");
  return f;
}

std::string StepPolynomial::render() const {
  std::string out;
  for (size_t i = 0; i < coeffs.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(coeffs[i]);
  }
  return out;
}

GMoves g_moves(long long n, const StepPolynomial& f) {
  long long fn = f.eval(n);
  long long prod = (fn + 1) * (2 * n - 2 + fn);
  return {prod / 2, fn + 1};
}

// ---------------------------------------------------------------------------
// Input strings

std::vector<std::string> parse_input_string(const std::vector<std::string>& alphabet,
                                            const std::string& text) {
  // Compact form: each symbol is BASE ["'"] ["^h"], BASE a single character
  // (letter, '>' or '_'). Whitespace separates multi-character base symbols.
  std::vector<std::string> out;
  size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    std::string sym;
    // longest-match against multi-char alphabet entries first
    size_t best = 0;
    for (const auto& a : alphabet)
      if (text.compare(i, a.size(), a) == 0 && a.size() > best) {
        sym = a;
        best = a.size();
      }
    if (best == 0)
      throw std::runtime_error("input string: unknown symbol at '" + text.substr(i) + "'");
    i += best;
    out.push_back(sym);
  }
  return out;
}

std::string render_input_string(const std::vector<std::string>& symbols) {
  std::string out;
  for (const auto& s : symbols) out += s;
  return out;
}

// ---------------------------------------------------------------------------
// Simulation

namespace {

struct Config {
  int state;
  int pos;  // 1-based
  std::vector<int> tape;

  auto operator<=>(const Config&) const = default;
};

int tape_read(const Config& c, int blank) {
  return c.pos <= static_cast<int>(c.tape.size()) ? c.tape[c.pos - 1] : blank;
}

void tape_write(Config& c, int blank, int sym) {
  while (static_cast<int>(c.tape.size()) < c.pos) c.tape.push_back(blank);
  c.tape[c.pos - 1] = sym;
}

std::vector<int> seed_tape(const TuringMachine& m, const std::vector<std::string>& input) {
  std::vector<int> t;
  for (const auto& s : input) {
    int id = m.symbol_id(s);
    if (id < 0) throw std::runtime_error("simulate: input symbol " + s + " not in alphabet");
    t.push_back(id);
  }
  return t;
}

}  // namespace

// Breadth-first exhaustive exploration with per-layer deduplication; the trace
// follows the first-option branch (or a seeded branch in one-branch mode).
static SimResult simulate_base(const TuringMachine& m, const std::vector<std::string>& input,
                               const SimOptions& opts, long long fixed_steps) {
  SimResult res;
  int blank = m.symbol_id(kBlankSym);
  Config init{m.start, 1, seed_tape(m, input)};

  long long horizon = fixed_steps >= 0 ? fixed_steps : opts.step_cap;
  CtrRng rng(opts.seed, 0x7A9E);

  std::set<Config> frontier{init};
  bool accept = false;

  // representative trace
  Config rep = init;
  bool rep_alive = true;
  auto log_rep = [&]() {
    res.trace.positions.push_back(rep.pos);
    res.trace.states.push_back(m.states[rep.state]);
    res.trace.tape_hashes.push_back(fnv1a(rep.tape));
  };
  log_rep();
  if (m.accepts.count(init.state)) accept = true;

  if (!opts.exhaustive) {
    // follow one seeded branch
    for (long long t = 0; t < horizon && rep_alive && !m.halting(rep.state); ++t) {
      auto it = m.delta.find({rep.state, tape_read(rep, blank)});
      if (it == m.delta.end()) break;
      auto [q2, s2, d] = it->second[rng.below(static_cast<int>(it->second.size()))];
      int np = rep.pos + (d == 'R' ? 1 : -1);
      if (np < 1) break;
      tape_write(rep, blank, s2);
      rep.state = q2;
      rep.pos = np;
      ++res.trace.moves;
      ++res.explored;
      log_rep();
      if (m.accepts.count(q2)) accept = true;
    }
    res.accepted = accept;
    return res;
  }

  for (long long t = 0; t < horizon && !frontier.empty(); ++t) {
    std::set<Config> next;
    for (const auto& c : frontier) {
      if (m.halting(c.state)) continue;  // resolved
      ++res.explored;
      if (res.explored > opts.config_cap) {
        res.capped = true;
        break;
      }
      auto it = m.delta.find({c.state, tape_read(c, blank)});
      if (it == m.delta.end()) continue;  // stuck branch
      for (const auto& [q2, s2, d] : it->second) {
        int np = c.pos + (d == 'R' ? 1 : -1);
        if (np < 1) continue;  // moving left from cell 1 is invalid
        Config nc = c;
        tape_write(nc, blank, s2);
        nc.state = q2;
        nc.pos = np;
        if (m.accepts.count(q2)) accept = true;
        next.insert(std::move(nc));
      }
    }
    if (res.capped) break;
    // advance the first-option representative
    if (rep_alive && !m.halting(rep.state)) {
      auto it = m.delta.find({rep.state, tape_read(rep, blank)});
      if (it == m.delta.end()) {
        rep_alive = false;
      } else {
        auto [q2, s2, d] = it->second[0];
        int np = rep.pos + (d == 'R' ? 1 : -1);
        if (np < 1) {
          rep_alive = false;
        } else {
          tape_write(rep, blank, s2);
          rep.state = q2;
          rep.pos = np;
          ++res.trace.moves;
          log_rep();
        }
      }
    }
    frontier = std::move(next);
    if (accept) break;
  }
  if (!accept && !frontier.empty()) {
    bool undecided = std::any_of(frontier.begin(), frontier.end(),
                                 [&](const Config& c) { return !m.halting(c.state); });
    if (undecided && fixed_steps < 0) res.capped = true;
  }
  res.accepted = accept;
  return res;
}

SimResult simulate(const TuringMachine& m, const std::vector<std::string>& input,
                   const SimOptions& opts) {
  return simulate_base(m, input, opts, -1);
}

SimResult simulate(const ClockedMachine& m, const std::vector<std::string>& input,
                   const SimOptions& opts) {
  long long fn = m.bound.eval(static_cast<long long>(input.size()));
  if (fn < 1) throw std::invalid_argument("clocked simulate: f(n) must be >= 1");
  if (fn > opts.step_cap) {
    SimResult r;
    r.capped = true;
    return r;
  }
  return simulate_base(m.base, input, opts, fn);
}

SimResult simulate(const ObliviousMachine& mo, const std::vector<std::string>& input,
                   const SimOptions& opts) {
  SimResult res;
  long long n = static_cast<long long>(input.size());
  if (n < 1) throw std::invalid_argument("oblivious simulate: input must be nonempty");
  long long fn = mo.bound.eval(n);
  if (fn < 1)
    throw std::invalid_argument("oblivious simulate: f(n) must be >= 1 (flagged; see docs)");
  GMoves g = g_moves(n, mo.bound);
  if (g.moves > opts.step_cap) {
    res.capped = true;
    return res;
  }
  int blank = find_name(mo.alphabet, kBlankSym);

  std::vector<int> tape;
  for (const auto& s : input) {
    int id = find_name(mo.alphabet, s);
    if (id < 0) throw std::runtime_error("oblivious simulate: symbol " + s + " not in Sigma_o");
    tape.push_back(id);
  }

  struct OConfig {
    int state;
    std::vector<int> tape;
    auto operator<=>(const OConfig&) const = default;
  };

  auto branch_accepts = [&](int state) {
    return mo.is_error[state] || mo.verdict[state] == 1;
  };

  std::set<OConfig> frontier{{mo.q_start, tape}};
  int pos = 1;
  bool accept = false;

  res.trace.positions.push_back(pos);
  res.trace.states.push_back(mo.states[mo.q_start]);
  res.trace.tape_hashes.push_back(fnv1a(tape));

  for (long long t = 0; t < g.moves && !frontier.empty(); ++t) {
    std::set<OConfig> next;
    std::set<int> positions;
    for (const auto& c : frontier) {
      ++res.explored;
      if (res.explored > opts.config_cap) {
        res.capped = true;
        break;
      }
      int sym = pos <= static_cast<int>(c.tape.size()) ? c.tape[pos - 1] : blank;
      auto it = mo.table.find({c.state, sym});
      bool advanced = false;
      if (it != mo.table.end()) {
        for (const auto& [q2, s2, d] : it->second) {
          int np = pos + (d == 'R' ? 1 : -1);
          if (np < 1) continue;
          advanced = true;
          positions.insert(np);
          OConfig nc = c;
          while (static_cast<int>(nc.tape.size()) < pos) nc.tape.push_back(blank);
          nc.tape[pos - 1] = s2;
          nc.state = q2;
          next.insert(std::move(nc));
        }
      }
      if (!advanced) {
        // stalled branch: judged by its current state
        if (branch_accepts(c.state)) accept = true;
        continue;
      }
    }
    if (res.capped) break;
    if (positions.size() > 1) {
      res.position_divergence = true;
      res.divergence_note = "branches moved to different positions at step " +
                            std::to_string(t + 1);
      break;
    }
    if (positions.empty()) {
      frontier.clear();
      break;
    }
    pos = *positions.begin();
    frontier = std::move(next);
    res.trace.positions.push_back(pos);
    const auto& rep = *frontier.begin();
    res.trace.states.push_back(mo.states[rep.state]);
    res.trace.tape_hashes.push_back(fnv1a(rep.tape));
    ++res.trace.moves;
  }
  for (const auto& c : frontier)
    if (branch_accepts(c.state)) accept = true;
  res.accepted = accept;
  res.trace.round_trips = g.round_trips;
  return res;
}

// ---------------------------------------------------------------------------
// The family-O compiler

namespace {

struct SigmaO {
  std::vector<std::string> symbols;  // spelled
  int bot, blank, bp, bph;
  std::vector<int> letters;               // ids of plain letters
  std::map<int, int> mark_of;             // letter/bp -> mark id
  std::map<int, int> base_sym_of_mark;    // mark id -> base-machine symbol id
  std::map<int, int> base_to_oblivious;   // base symbol id -> Sigma_o id
};

SigmaO build_sigma_o(const TuringMachine& base) {
  SigmaO s;
  s.symbols = {kFirstSym, kBlankSym};
  s.bot = 0;
  s.blank = 1;
  std::vector<std::string> letters;
  for (const auto& a : base.alphabet)
    if (a != kFirstSym && a != kBlankSym) letters.push_back(a);
  for (const auto& l : letters) s.symbols.push_back(l);
  for (const auto& l : letters) s.symbols.push_back(l + "^h");
  s.symbols.push_back("_'");
  s.symbols.push_back("_'^h");
  int nl = static_cast<int>(letters.size());
  for (int i = 0; i < nl; ++i) {
    s.letters.push_back(2 + i);
    s.mark_of[2 + i] = 2 + nl + i;
  }
  s.bp = 2 + 2 * nl;
  s.bph = s.bp + 1;
  s.mark_of[s.bp] = s.bph;
  // base symbol id -> Sigma_o id
  for (size_t i = 0; i < base.alphabet.size(); ++i) {
    const auto& a = base.alphabet[i];
    int id = find_name(s.symbols, a);
    s.base_to_oblivious[static_cast<int>(i)] = id;
  }
  // mark -> base symbol (blank mark reads as the base blank)
  for (int i = 0; i < nl; ++i) {
    int base_id = base.symbol_id(letters[i]);
    s.base_sym_of_mark[2 + nl + i] = base_id;
  }
  s.base_sym_of_mark[s.bph] = base.symbol_id(kBlankSym);
  return s;
}

void validate_base(const TuringMachine& m) {
  int bot = m.symbol_id(kFirstSym);
  int blank = m.symbol_id(kBlankSym);
  for (const auto& [key, opts] : m.delta) {
    const auto& [q, s] = key;
    if (m.halting(q)) throw std::invalid_argument("make_oblivious: halting state has moves");
    if (s == blank)
      throw std::invalid_argument(
          "make_oblivious: base reads the blank; family-O compilation requires "
          "blank-free operation");
    for (const auto& [q2, s2, d] : opts) {
      if (s == bot && (s2 != bot || d != 'R'))
        throw std::invalid_argument(
            "make_oblivious: transitions on '>' must rewrite '>' and move right");
      if (s != bot && s2 == bot)
        throw std::invalid_argument("make_oblivious: '>' written over another symbol");
      if (s2 == blank)
        throw std::invalid_argument("make_oblivious: the blank is never written");
    }
  }
  for (size_t q = 0; q < m.states.size(); ++q) {
    if (m.halting(static_cast<int>(q))) continue;
    if (!m.delta.count({static_cast<int>(q), bot}))
      throw std::invalid_argument("make_oblivious: non-halting state " + m.states[q] +
                                  " lacks a '>'-transition");
  }
}

}  // namespace

long long expected_state_count(const TuringMachine& base) {
  std::set<std::pair<int, int>> pairs;
  for (const auto& [key, opts] : base.delta)
    for (const auto& [q2, s2, d] : opts) pairs.insert({key.first, q2});
  return 1 + 4 + 4 * static_cast<long long>(base.states.size()) +
         8 * static_cast<long long>(pairs.size());
}

ObliviousMachine make_oblivious(const ClockedMachine& cm) {
  const TuringMachine& base = cm.base;
  validate_base(base);
  SigmaO so = build_sigma_o(base);

  ObliviousMachine mo;
  mo.alphabet = so.symbols;
  mo.bound = cm.bound;

  // transition-connected pairs, in deterministic order
  std::set<std::pair<int, int>> pset;
  for (const auto& [key, opts] : base.delta)
    for (const auto& [q2, s2, d] : opts) pset.insert({key.first, q2});
  std::vector<std::pair<int, int>> pairs(pset.begin(), pset.end());

  auto add_state = [&](const std::string& name, int verdict, bool err,
                       const std::string& note) {
    mo.states.push_back(name);
    mo.verdict.push_back(verdict);
    mo.is_error.push_back(err);
    mo.provenance[name] = note;
    return static_cast<int>(mo.states.size()) - 1;
  };
  auto base_verdict = [&](int j) {
    if (base.accepts.count(j)) return 1;
    if (base.rejects.count(j)) return 2;
    return 0;
  };

  const char* E[2] = {"", "_e"};
  int qst = add_state("qst", 0, false, "initial state");
  std::map<std::string, int> id;
  id["qst"] = qst;
  for (int e = 0; e < 2; ++e) {
    id["qse" + std::string(E[e])] =
        add_state("qse" + std::string(E[e]), 0, e, "input-checking sweep");
    id["qre" + std::string(E[e])] =
        add_state("qre" + std::string(E[e]), 0, e, "return to the left end");
  }
  for (size_t q = 0; q < base.states.size(); ++q) {
    for (const char* d : {"R", "L"}) {
      for (int e = 0; e < 2; ++e) {
        std::string n = "qp_" + base.states[q] + "_" + d + E[e];
        id[n] = add_state(n, base_verdict(static_cast<int>(q)), e,
                          "sweep in base state " + base.states[q]);
      }
    }
  }
  for (const auto& [i, j] : pairs) {
    for (const char* kind : {"qt", "qw"}) {
      for (const char* d : {"R", "L"}) {
        for (int e = 0; e < 2; ++e) {
          std::string n = std::string(kind) + "_" + base.states[i] + "_" + base.states[j] +
                          "_" + d + E[e];
          id[n] = add_state(n, base_verdict(j), e,
                            std::string(kind == std::string("qw") ? "head transfer (mark "
                                                                    "write) "
                                                                  : "move done ") +
                                base.states[i] + "->" + base.states[j]);
        }
      }
    }
  }
  mo.q_start = qst;

  auto add = [&](int q, int s, int q2, int s2, char d) {
    auto& v = mo.table[{q, s}];
    auto t = std::make_tuple(q2, s2, d);
    if (std::find(v.begin(), v.end(), t) == v.end()) v.push_back(t);
  };
  auto sid = [&](const std::string& n) { return id.at(n); };
  auto S = [&](const std::string& base_name, int q, const char* dir, int e) {
    return sid(base_name + "_" + base.states[q] + "_" + dir + E[e]);
  };
  auto T2 = [&](const std::string& kind, int i, int j, const char* dir, int e) {
    return sid(kind + "_" + base.states[i] + "_" + base.states[j] + "_" + dir + E[e]);
  };

  int repair = so.letters.empty() ? so.bp : so.letters[0];
  int nstates_base = static_cast<int>(base.states.size());
  std::vector<int> turnclass{so.blank, so.bp, so.bph};

  // q_start
  add(qst, so.bot, sid("qse"), so.bot, 'R');
  for (int a : base.accepts)
    if (base.delta.count({base.start, base.symbol_id(kFirstSym)}))
      for (const auto& [q2, s2, d] : base.delta.at({base.start, base.symbol_id(kFirstSym)}))
        if (q2 == a) add(qst, so.bot, S("qp", a, "R", 0), so.bot, 'R');
  for (int s = 0; s < static_cast<int>(so.symbols.size()); ++s)
    if (s != so.bot && s != so.blank) add(qst, s, sid("qse_e"), so.bot, 'R');

  for (int e = 0; e < 2; ++e) {
    int qse = sid("qse" + std::string(E[e]));
    int qre = sid("qre" + std::string(E[e]));
    int qse_err = sid("qse_e");
    // checking sweep
    for (int l : so.letters) add(qse, l, qse, l, 'R');
    for (int s : {so.bot, so.bph})
      add(qse, s, qse_err, repair, 'R');
    for (const auto& [l, mk] : so.mark_of)
      if (mk != so.bph) add(qse, mk, qse_err, repair, 'R');
    add(qse, so.blank, qre, so.bp, 'L');
    add(qse, so.bp, qre, so.bp, 'L');
    // return sweep
    for (int s = 0; s < static_cast<int>(so.symbols.size()); ++s)
      if (s != so.bot) add(qre, s, qre, s, 'L');
    // first-move fusion at the left end
    auto it = base.delta.find({base.start, base.symbol_id(kFirstSym)});
    if (it != base.delta.end())
      for (const auto& [j, s2, d] : it->second)
        add(qre, so.bot, T2("qw", base.start, j, "R", e), so.bot, 'R');
  }

  // per base state sweeps and mark handling
  for (int q = 0; q < nstates_base; ++q) {
    bool halt = base.halting(q);
    for (int e = 0; e < 2; ++e) {
      int pr = S("qp", q, "R", e), pl = S("qp", q, "L", e);
      for (int l : so.letters) {
        add(pr, l, pr, l, 'R');
        add(pl, l, pl, l, 'L');
      }
      for (int tc : turnclass) {
        add(pr, tc, pl, tc == so.blank ? so.bp : tc, 'L');  // turn at the frontier
        add(pl, tc, pl, tc, 'L');                           // pass on the way down
      }
      add(pl, so.bot, pr, so.bot, 'R');  // bounce at the left end
      // marks: act or pass (the marked frontier blank stays in the turn class)
      for (const auto& [cell, mk] : so.mark_of) {
        if (mk != so.bph) add(pr, mk, pr, mk, 'R');  // defer on the rightward pass
        if (halt) {
          add(pl, mk, pl, mk, 'L');
          continue;
        }
        int base_read = so.base_sym_of_mark.at(mk);
        auto it = base.delta.find({q, base_read});
        bool has_left = false;
        if (it != base.delta.end()) {
          for (const auto& [j, w, d] : it->second) {
            int wob = so.base_to_oblivious.at(w);
            if (d == 'R')
              add(pr, mk, T2("qw", q, j, "R", e), wob, 'R');
            else {
              add(pl, mk, T2("qw", q, j, "L", e), wob, 'L');
              has_left = true;
            }
          }
        }
        if (!has_left) add(pl, mk, pl, mk, 'L');  // nothing to act leftward: pass
      }
    }
  }

  // transfer / write states
  for (const auto& [i, j] : pairs) {
    bool jh = base.halting(j);
    for (int e = 0; e < 2; ++e) {
      int wr = T2("qw", i, j, "R", e), wl = T2("qw", i, j, "L", e);
      int tr = T2("qt", i, j, "R", e), tl = T2("qt", i, j, "L", e);
      for (const auto& [cell, mk] : so.mark_of) {
        add(wr, cell, tr, mk, 'R');  // place the h-mark and keep going
        add(wl, cell, tl, mk, 'L');
      }
      // left-end arrival of the write state: the base head sits on '>' now
      if (jh) {
        add(wl, so.bot, S("qp", j, "R", e), so.bot, 'R');
      } else {
        auto it = base.delta.find({j, base.symbol_id(kFirstSym)});
        if (it != base.delta.end())
          for (const auto& [k, w, d] : it->second)
            add(wl, so.bot, T2("qw", j, k, "R", e), so.bot, 'R');
      }
      // done-move sweeps with hand-off at both ends
      for (int l : so.letters) {
        add(tr, l, tr, l, 'R');
        add(tl, l, tl, l, 'L');
      }
      for (const auto& [cell, mk] : so.mark_of) {
        if (mk != so.bph) add(tr, mk, tr, mk, 'R');
        add(tl, mk, tl, mk, 'L');
      }
      for (int tc : turnclass)
        add(tr, tc, S("qp", j, "L", e), tc == so.blank ? so.bp : tc, 'L');
      add(tl, so.bot, S("qp", j, "R", e), so.bot, 'R');
    }
  }

  // Error-convention completion: a sweep that reads a symbol its family has
  // no rule for (possible only on malformed content the checking sweep never
  // reached) flips to the error copy and keeps moving; error runs answer YES.
  auto err_of = [&](const std::string& name) -> int {
    if (name == "qst") return -1;
    if (name.size() > 2 && name.compare(name.size() - 2, 2, "_e") == 0) return id.at(name);
    auto it = id.find(name + "_e");
    return it == id.end() ? -1 : it->second;
  };
  auto dir_of = [&](const std::string& name) -> char {
    std::string core = name;
    if (core.size() > 2 && core.compare(core.size() - 2, 2, "_e") == 0)
      core = core.substr(0, core.size() - 2);
    if (core == "qse" || core == "qst") return 'R';
    if (core == "qre") return 'L';
    return core.compare(core.size() - 2, 2, "_R") == 0 ? 'R' : 'L';
  };
  for (size_t q = 0; q < mo.states.size(); ++q) {
    int err = err_of(mo.states[q]);
    if (err < 0) continue;
    char d = dir_of(mo.states[q]);
    for (int s = 0; s < static_cast<int>(mo.alphabet.size()); ++s)
      if (!mo.table.count({static_cast<int>(q), s}))
        add(static_cast<int>(q), s, err, s, d);
  }

  return mo;
}

ObliviousnessReport verify_obliviousness(const ObliviousMachine& mo, int n,
                                         const std::vector<std::vector<std::string>>& sample,
                                         const SimOptions& opts) {
  ObliviousnessReport rep;
  GMoves g = g_moves(n, mo.bound);
  rep.expected_moves = g.moves;
  rep.round_trips = g.round_trips;
  std::optional<std::vector<int>> reference;
  for (const auto& input : sample) {
    if (static_cast<int>(input.size()) != n) {
      rep.ok = false;
      rep.first_divergence = "sample input has wrong length";
      return rep;
    }
    SimResult r = simulate(mo, input, opts);
    if (r.position_divergence) {
      rep.ok = false;
      rep.first_divergence = "branch divergence on " + render_input_string(input) + ": " +
                             r.divergence_note;
      return rep;
    }
    rep.moves = r.trace.moves;
    if (r.trace.moves != g.moves) {
      rep.ok = false;
      rep.first_divergence = "move count " + std::to_string(r.trace.moves) + " != g(n) = " +
                             std::to_string(g.moves) + " on " + render_input_string(input);
      return rep;
    }
    // positions change by one, stay >= 1, frontier nondecreasing
    int frontier = 1;
    for (size_t t = 0; t < r.trace.positions.size(); ++t) {
      int p = r.trace.positions[t];
      if (p < 1 || (t > 0 && std::abs(p - r.trace.positions[t - 1]) != 1)) {
        rep.ok = false;
        rep.first_divergence = "illegal head movement on " + render_input_string(input);
        return rep;
      }
      frontier = std::max(frontier, p);
    }
    if (!reference) {
      reference = r.trace.positions;
    } else if (*reference != r.trace.positions) {
      rep.ok = false;
      rep.first_divergence = "trajectory differs on " + render_input_string(input);
      return rep;
    }
  }
  return rep;
}

}  // namespace snp
