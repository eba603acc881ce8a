#include "snp/embed.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace snp {

namespace {

std::string mangle(const std::string& sym) {
  std::string out;
  for (size_t i = 0; i < sym.size(); ++i) {
    char c = sym[i];
    if (c == '>') {
      out += "first";
    } else if (c == '_') {
      out += "blank";
    } else if (c == '\'') {
      out += "p";
    } else if (c == '^') {
      // "^h" suffix
      out += "h";
      ++i;
    } else {
      out += c;
    }
  }
  return out;
}

}  // namespace

std::string grid_symbol_name(const std::string& s) { return "sym_" + mangle(s); }
std::string grid_sigma_name(const std::string& s) { return "S_" + mangle(s); }

Signature grid_signature(const ObliviousMachine& mo) {
  Signature sig;
  for (const auto& s : mo.alphabet)
    if (s != kBlankSym) sig.add({grid_symbol_name(s), 1, SymbolKind::Input});
  sig.add({"start", 1, SymbolKind::Input});
  sig.add({"succ", 2, SymbolKind::Input});
  sig.add({"next", 2, SymbolKind::Input});
  sig.add({"row", 3, SymbolKind::Input});
  return sig;
}

Structure build_grid(const std::vector<std::string>& x, const ObliviousMachine& mo,
                     long long element_cap) {
  long long n = static_cast<long long>(x.size());
  if (n < 1) throw std::invalid_argument("build_grid: input must be nonempty");
  if (mo.bound.eval(n) < 1) throw std::invalid_argument("build_grid: f(n) must be >= 1");
  GMoves g = g_moves(n, mo.bound);
  long long width = n + 2;           // input cells + the head's turning range
  long long rows = g.moves + 1;
  long long elements = rows * (width + 1) + 1;
  if (elements > element_cap)
    throw std::runtime_error("build_grid: " + std::to_string(elements) +
                             " elements exceed the cap");

  Structure b(grid_signature(mo), static_cast<int>(elements));
  auto id = [&](long long j, long long i) { return static_cast<int>(j * (width + 1) + i); };
  int trailing_leader = static_cast<int>(rows * (width + 1));

  b.add_tuple("start", {id(0, 0)});
  for (long long j = 0; j < rows; ++j) {
    int next_leader = (j + 1 < rows) ? id(j + 1, 0) : trailing_leader;
    for (long long i = 0; i < width; ++i) b.add_tuple("succ", {id(j, i), id(j, i + 1)});
    b.add_tuple("succ", {id(j, width), next_leader});
    for (long long i = 1; i <= width; ++i)
      b.add_tuple("row", {id(j, 0), id(j, i), next_leader});
    if (j + 1 < rows)
      for (long long i = 0; i <= width; ++i) b.add_tuple("next", {id(j, i), id(j + 1, i)});
    else
      b.add_tuple("next", {id(j, 0), trailing_leader});
  }
  for (long long i = 1; i <= n; ++i)
    b.add_tuple(grid_symbol_name(x[i - 1]), {id(0, i)});
  b.add_tuple(grid_symbol_name("_'"), {id(0, n + 1)});
  b.add_tuple(grid_symbol_name("_'"), {id(0, n + 2)});
  return b;
}

// ---------------------------------------------------------------------------
// First-order constraints

std::optional<FoViolationInfo> check_fo_constraints(const Structure& b) {
  const auto& start = b.tuples("start");
  if (start.size() >= 2) {
    auto it = start.begin();
    int a = (*it)[0];
    int c = (*++it)[0];
    return FoViolationInfo{"duplicate start", {a, c}};
  }
  for (const char* rel : {"succ", "next"}) {
    std::map<int, int> out, in;
    for (const auto& t : b.tuples(rel)) {
      if (t[0] == t[1]) return FoViolationInfo{std::string(rel) + " loop", {t[0]}};
      if (out.count(t[0])) return FoViolationInfo{std::string(rel) + " out-degree 2", {t[0]}};
      if (in.count(t[1])) return FoViolationInfo{std::string(rel) + " in-degree 2", {t[1]}};
      out[t[0]] = t[1];
      in[t[1]] = t[0];
    }
  }
  std::map<int, std::pair<int, int>> membership;
  std::set<int> anchors;
  for (const auto& t : b.tuples("row")) {
    if (t[0] == t[2]) return FoViolationInfo{"row loop", {t[0], t[1]}};
    auto it = membership.find(t[1]);
    if (it != membership.end() && it->second != std::make_pair(t[0], t[2]))
      return FoViolationInfo{"conflicting row membership", {t[1]}};
    membership[t[1]] = {t[0], t[2]};
    anchors.insert(t[0]);
    anchors.insert(t[2]);
  }
  for (int a : anchors)
    if (membership.count(a))
      return FoViolationInfo{"row anchor is also a row member", {a}};
  std::map<int, std::string> sym_of;
  for (const auto& sym : b.signature.symbols) {
    if (sym.name.rfind("sym_", 0) != 0) continue;
    for (const auto& t : b.tuples(sym.name)) {
      auto it = sym_of.find(t[0]);
      if (it != sym_of.end() && it->second != sym.name)
        return FoViolationInfo{"two symbol relations on one element", {t[0]}};
      sym_of[t[0]] = sym.name;
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// The sentence

namespace {

Literal pos_atom(const std::string& sym, std::vector<std::string> args) {
  return {{sym, std::move(args)}, false};
}
Literal neg_atom(const std::string& sym, std::vector<std::string> args) {
  return {{sym, std::move(args)}, true};
}

// antecedent & ~conclusion, i.e. the negated conjunct of one implication
NegatedConjunct rule(std::vector<Literal> tau, std::vector<Literal> sigma,
                     const Literal& conclusion) {
  NegatedConjunct c;
  c.tau_literals = std::move(tau);
  c.sigma_literals = std::move(sigma);
  c.sigma_literals.push_back({conclusion.atom, !conclusion.negated});
  return c;
}

struct PatternVars {
  std::vector<Literal> tuples;     // grid tuples of the head neighbourhood
  std::string write_cell;          // the head cell one row down
  std::string target;              // the forced next head cell
};

// Head at y moving right: needs the right neighbour z in this row and the
// aligned cells of the next row.
PatternVars pattern_right() {
  PatternVars p;
  p.tuples = {
      pos_atom("next", {"a", "ap"}),  pos_atom("next", {"ap", "app"}),
      pos_atom("row", {"a", "y", "ap"}),   pos_atom("row", {"a", "z", "ap"}),
      pos_atom("row", {"ap", "yp", "app"}), pos_atom("row", {"ap", "zp", "app"}),
      pos_atom("succ", {"y", "z"}),   pos_atom("succ", {"yp", "zp"}),
      pos_atom("next", {"y", "yp"}),  pos_atom("next", {"z", "zp"}),
  };
  p.write_cell = "yp";
  p.target = "zp";
  return p;
}

PatternVars pattern_left() {
  PatternVars p;
  p.tuples = {
      pos_atom("next", {"a", "ap"}),  pos_atom("next", {"ap", "app"}),
      pos_atom("row", {"a", "x", "ap"}),   pos_atom("row", {"a", "y", "ap"}),
      pos_atom("row", {"ap", "xp", "app"}), pos_atom("row", {"ap", "yp", "app"}),
      pos_atom("succ", {"x", "y"}),   pos_atom("succ", {"xp", "yp"}),
      pos_atom("next", {"x", "xp"}),  pos_atom("next", {"y", "yp"}),
  };
  p.write_cell = "yp";
  p.target = "xp";
  return p;
}

void add_pairwise_neq(NegatedConjunct& c) {
  auto vars = c.variables();
  for (size_t i = 0; i < vars.size(); ++i)
    for (size_t j = i + 1; j < vars.size(); ++j)
      c.inequalities.push_back({vars[i], vars[j]});
}

}  // namespace

SnpSentence build_sentence(const ObliviousMachine& mo) {
  SnpSentence phi;
  phi.input_sig = grid_signature(mo);
  for (const auto& s : mo.alphabet)
    phi.existential_sig.add({grid_sigma_name(s), 1, SymbolKind::Existential});
  phi.existential_sig.add({"Mark", 1, SymbolKind::Existential});
  phi.existential_sig.add({"Init", 1, SymbolKind::Existential});
  phi.existential_sig.add({"H", 1, SymbolKind::Existential});
  for (const auto& q : mo.states)
    phi.existential_sig.add({"Q_" + q, 1, SymbolKind::Existential});

  auto& cs = phi.conjuncts;
  std::string qstart = "Q_" + mo.states[mo.q_start];

  // Init base and spread, one family member per input symbol relation
  for (const auto& s : mo.alphabet) {
    if (s == kBlankSym) continue;
    std::vector<Literal> base_tau = {
        pos_atom("start", {"a"}), pos_atom("succ", {"a", "x"}),
        pos_atom("next", {"a", "ap"}), pos_atom("row", {"a", "x", "ap"}),
        pos_atom(grid_symbol_name(s), {"x"})};
    cs.push_back(rule(base_tau, {}, pos_atom("Init", {"x"})));
    cs.push_back(rule(base_tau, {}, pos_atom(grid_sigma_name(s), {"x"})));
    cs.push_back(rule(base_tau, {}, pos_atom("H", {"x"})));
    cs.push_back(rule(base_tau, {}, pos_atom(qstart, {"x"})));

    std::vector<Literal> spread_tau = {
        pos_atom("start", {"a"}), pos_atom("next", {"a", "ap"}),
        pos_atom("succ", {"x", "y"}), pos_atom("row", {"a", "y", "ap"}),
        pos_atom(grid_symbol_name(s), {"y"})};
    cs.push_back(rule(spread_tau, {pos_atom("Init", {"x"})}, pos_atom("Init", {"y"})));
    cs.push_back(rule(spread_tau, {pos_atom("Init", {"x"})},
                      pos_atom(grid_sigma_name(s), {"y"})));
  }

  // Init seeds Mark
  cs.push_back(rule({}, {pos_atom("Init", {"x"})}, pos_atom("Mark", {"x"})));

  // The four Mark-spread patterns (pairwise-distinct elements)
  {
    // (a) y is the first cell of its row
    NegatedConjunct c = rule(
        {pos_atom("succ", {"a", "y"}), pos_atom("succ", {"y", "z"}),
         pos_atom("succ", {"ap", "yp"}), pos_atom("succ", {"yp", "zp"}),
         pos_atom("next", {"a", "ap"}), pos_atom("next", {"y", "yp"}),
         pos_atom("next", {"z", "zp"}), pos_atom("next", {"ap", "app"}),
         pos_atom("row", {"a", "y", "ap"}), pos_atom("row", {"a", "z", "ap"}),
         pos_atom("row", {"ap", "yp", "app"}), pos_atom("row", {"ap", "zp", "app"})},
        {pos_atom("Mark", {"y"}), pos_atom("Mark", {"z"})}, pos_atom("Mark", {"yp"}));
    add_pairwise_neq(c);
    cs.push_back(c);
    // (b) y in the middle
    NegatedConjunct m = rule(
        {pos_atom("succ", {"x", "y"}), pos_atom("succ", {"y", "z"}),
         pos_atom("succ", {"xp", "yp"}), pos_atom("succ", {"yp", "zp"}),
         pos_atom("next", {"x", "xp"}), pos_atom("next", {"y", "yp"}),
         pos_atom("next", {"z", "zp"}), pos_atom("next", {"a", "ap"}),
         pos_atom("next", {"ap", "app"}), pos_atom("row", {"a", "x", "ap"}),
         pos_atom("row", {"a", "y", "ap"}), pos_atom("row", {"a", "z", "ap"}),
         pos_atom("row", {"ap", "xp", "app"}), pos_atom("row", {"ap", "yp", "app"}),
         pos_atom("row", {"ap", "zp", "app"})},
        {pos_atom("Mark", {"x"}), pos_atom("Mark", {"y"}), pos_atom("Mark", {"z"})},
        pos_atom("Mark", {"yp"}));
    add_pairwise_neq(m);
    cs.push_back(m);
    // (c)/(d) y at the row end, without and with the head
    for (bool with_head : {false, true}) {
      NegatedConjunct e = rule(
          {pos_atom("succ", {"x", "y"}), pos_atom("succ", {"y", "ap"}),
           pos_atom("succ", {"xp", "yp"}), pos_atom("succ", {"yp", "app"}),
           pos_atom("next", {"x", "xp"}), pos_atom("next", {"y", "yp"}),
           pos_atom("next", {"a", "ap"}), pos_atom("next", {"ap", "app"}),
           pos_atom("row", {"a", "x", "ap"}), pos_atom("row", {"a", "y", "ap"}),
           pos_atom("row", {"ap", "xp", "app"}), pos_atom("row", {"ap", "yp", "app"})},
          {pos_atom("Mark", {"x"}), pos_atom("Mark", {"y"}),
           with_head ? pos_atom("H", {"y"}) : neg_atom("H", {"y"})},
          pos_atom("Mark", {"yp"}));
      add_pairwise_neq(e);
      cs.push_back(e);
    }
  }

  // state partition over every element, and one state per row
  {
    NegatedConjunct cover;
    for (const auto& q : mo.states) cover.sigma_literals.push_back(neg_atom("Q_" + q, {"x"}));
    cs.push_back(cover);
    for (size_t i = 0; i < mo.states.size(); ++i) {
      for (size_t j = i + 1; j < mo.states.size(); ++j) {
        NegatedConjunct c;
        c.sigma_literals.push_back(pos_atom("Q_" + mo.states[i], {"x"}));
        c.sigma_literals.push_back(pos_atom("Q_" + mo.states[j], {"x"}));
        cs.push_back(c);
        NegatedConjunct r;
        r.tau_literals = {pos_atom("row", {"a", "x", "ap"}),
                          pos_atom("row", {"a", "y", "ap"}),
                          pos_atom("next", {"a", "ap"})};
        r.sigma_literals.push_back(pos_atom("Q_" + mo.states[i], {"x"}));
        r.sigma_literals.push_back(pos_atom("Q_" + mo.states[j], {"y"}));
        cs.push_back(r);
      }
    }
  }

  // symbol partition
  {
    NegatedConjunct cover;
    for (const auto& s : mo.alphabet)
      cover.sigma_literals.push_back(neg_atom(grid_sigma_name(s), {"x"}));
    cs.push_back(cover);
    for (size_t i = 0; i < mo.alphabet.size(); ++i) {
      for (size_t j = i + 1; j < mo.alphabet.size(); ++j) {
        NegatedConjunct c;
        c.sigma_literals.push_back(pos_atom(grid_sigma_name(mo.alphabet[i]), {"x"}));
        c.sigma_literals.push_back(pos_atom(grid_sigma_name(mo.alphabet[j]), {"x"}));
        cs.push_back(c);
      }
    }
  }

  // symbol propagation away from the head
  for (const auto& s : mo.alphabet) {
    if (s == kBlankSym) continue;
    cs.push_back(rule({pos_atom("next", {"x", "xp"})},
                      {pos_atom("Mark", {"x"}), neg_atom("H", {"x"}),
                       pos_atom(grid_sigma_name(s), {"x"})},
                      pos_atom(grid_sigma_name(s), {"xp"})));
  }

  // head uniqueness within a row (the "-> x = y" constraint)
  {
    NegatedConjunct c;
    c.tau_literals = {pos_atom("row", {"a", "x", "ap"}), pos_atom("row", {"a", "y", "ap"}),
                      pos_atom("next", {"a", "ap"})};
    c.sigma_literals = {pos_atom("H", {"x"}), pos_atom("H", {"y"})};
    c.inequalities.push_back({"x", "y"});
    cs.push_back(c);
  }
  // start uniqueness
  {
    NegatedConjunct c;
    c.tau_literals = {pos_atom("start", {"x"}), pos_atom("start", {"y"})};
    c.inequalities.push_back({"x", "y"});
    cs.push_back(c);
  }
  // degree and loop constraints
  for (const char* rel : {"succ", "next"}) {
    NegatedConjunct out;
    out.tau_literals = {pos_atom(rel, {"x", "y"}), pos_atom(rel, {"x", "z"})};
    out.inequalities.push_back({"y", "z"});
    cs.push_back(out);
    NegatedConjunct in;
    in.tau_literals = {pos_atom(rel, {"x", "z"}), pos_atom(rel, {"y", "z"})};
    in.inequalities.push_back({"x", "y"});
    cs.push_back(in);
    NegatedConjunct loop;
    loop.tau_literals = {pos_atom(rel, {"x", "x"})};
    cs.push_back(loop);
  }
  {
    NegatedConjunct r1;
    r1.tau_literals = {pos_atom("row", {"a", "y", "b"}), pos_atom("row", {"c", "y", "d"})};
    r1.inequalities.push_back({"a", "c"});
    cs.push_back(r1);
    NegatedConjunct r2;
    r2.tau_literals = {pos_atom("row", {"a", "y", "b"}), pos_atom("row", {"c", "y", "d"})};
    r2.inequalities.push_back({"b", "d"});
    cs.push_back(r2);
    NegatedConjunct r3;
    r3.tau_literals = {pos_atom("row", {"a", "x", "b"}), pos_atom("row", {"c", "a", "d"})};
    cs.push_back(r3);
    NegatedConjunct r4;
    r4.tau_literals = {pos_atom("row", {"a", "x", "b"}), pos_atom("row", {"c", "b", "d"})};
    cs.push_back(r4);
    NegatedConjunct r5;
    r5.tau_literals = {pos_atom("row", {"a", "x", "a"})};
    cs.push_back(r5);
  }
  for (size_t i = 0; i < mo.alphabet.size(); ++i) {
    if (mo.alphabet[i] == kBlankSym) continue;
    for (size_t j = i + 1; j < mo.alphabet.size(); ++j) {
      if (mo.alphabet[j] == kBlankSym) continue;
      NegatedConjunct c;
      c.tau_literals = {pos_atom(grid_symbol_name(mo.alphabet[i]), {"x"}),
                        pos_atom(grid_symbol_name(mo.alphabet[j]), {"x"})};
      cs.push_back(c);
    }
  }

  // transition rules, one family per table entry
  for (const auto& [key, opts] : mo.table) {
    const auto& [q, s] = key;
    char d = std::get<2>(opts[0]);
    for (const auto& o : opts)
      if (std::get<2>(o) != d)
        throw std::logic_error("build_sentence: mixed directions at one table key");
    PatternVars p = d == 'R' ? pattern_right() : pattern_left();
    std::vector<Literal> ant_tau = p.tuples;
    std::vector<Literal> ant_sigma = {pos_atom("Mark", {"y"}), pos_atom("H", {"y"}),
                                      pos_atom(grid_sigma_name(mo.alphabet[s]), {"y"}),
                                      pos_atom("Q_" + mo.states[q], {"y"})};
    // the head moves
    cs.push_back(rule(ant_tau, ant_sigma, pos_atom("H", {p.target})));
    // the next state: a disjunction over the nondeterministic options
    std::vector<int> nexts;
    for (const auto& [q2, s2, dd] : opts)
      if (std::find(nexts.begin(), nexts.end(), q2) == nexts.end()) nexts.push_back(q2);
    {
      NegatedConjunct c;
      c.tau_literals = ant_tau;
      c.sigma_literals = ant_sigma;
      for (int q2 : nexts)
        c.sigma_literals.push_back(neg_atom("Q_" + mo.states[q2], {p.target}));
      cs.push_back(c);
    }
    // the written symbol, conditioned on the chosen state when ambiguous
    for (int q2 : nexts) {
      std::vector<int> writes;
      for (const auto& [oq, os, od] : opts)
        if (oq == q2 && std::find(writes.begin(), writes.end(), os) == writes.end())
          writes.push_back(os);
      NegatedConjunct c;
      c.tau_literals = ant_tau;
      c.sigma_literals = ant_sigma;
      if (nexts.size() > 1)
        c.sigma_literals.push_back(pos_atom("Q_" + mo.states[q2], {p.target}));
      for (int w : writes)
        c.sigma_literals.push_back(neg_atom(grid_sigma_name(mo.alphabet[w]), {p.write_cell}));
      cs.push_back(c);
    }
  }

  // rejection
  for (size_t q = 0; q < mo.states.size(); ++q) {
    if (mo.verdict[q] == 2 && !mo.is_error[q]) {
      NegatedConjunct c;
      c.sigma_literals = {pos_atom("Mark", {"x"}), pos_atom("H", {"x"}),
                          pos_atom("Q_" + mo.states[q], {"x"})};
      cs.push_back(c);
    }
  }

  return canonicalize(std::move(phi));
}

// ---------------------------------------------------------------------------
// Forced marking and the reverse reduction

namespace {

struct GridMaps {
  std::map<int, int> succ_out, succ_in, next_out, next_in;
  std::map<int, std::pair<int, int>> row_of;  // member -> (anchor, next anchor)
  std::map<int, int> symbol_of;               // element -> machine symbol id
  std::vector<int> starts;
};

GridMaps build_maps(const Structure& b, const ObliviousMachine& mo) {
  GridMaps g;
  for (const auto& t : b.tuples("succ")) {
    g.succ_out[t[0]] = t[1];
    g.succ_in[t[1]] = t[0];
  }
  for (const auto& t : b.tuples("next")) {
    g.next_out[t[0]] = t[1];
    g.next_in[t[1]] = t[0];
  }
  for (const auto& t : b.tuples("row")) g.row_of[t[1]] = {t[0], t[2]};
  for (size_t i = 0; i < mo.alphabet.size(); ++i) {
    if (mo.alphabet[i] == kBlankSym) continue;
    for (const auto& t : b.tuples(grid_symbol_name(mo.alphabet[i])))
      g.symbol_of[t[0]] = static_cast<int>(i);
  }
  for (const auto& t : b.tuples("start")) g.starts.push_back(t[0]);
  return g;
}

int get_or(const std::map<int, int>& m, int k) {
  auto it = m.find(k);
  return it == m.end() ? -1 : it->second;
}

bool all_distinct(std::initializer_list<int> xs) {
  std::vector<int> v(xs);
  std::sort(v.begin(), v.end());
  return std::adjacent_find(v.begin(), v.end()) == v.end();
}

}  // namespace

MarkingState forced_marking(const Structure& b, const ObliviousMachine& mo) {
  MarkingState ms;
  GridMaps g = build_maps(b, mo);
  if (g.starts.size() != 1) return ms;
  int a0 = g.starts[0];

  // Init chain: spreads along the first row while symbols are present
  int ap = get_or(g.next_out, a0);
  if (ap < 0) return ms;
  int x = get_or(g.succ_out, a0);
  int col = 1;
  while (x >= 0 && col <= b.domain_size && g.row_of.count(x) &&
         g.row_of[x] == std::make_pair(a0, ap) && g.symbol_of.count(x) &&
         !ms.init.count(x)) {
    ms.init.insert(x);
    ms.coords[x] = {col, 0};
    x = get_or(g.succ_out, x);
    ++col;
  }
  ms.width = col - 1;
  ms.cm = ms.init;
  if (ms.init.empty()) return ms;

  // Mark fixpoint via the four spread patterns (the end patterns combine to
  // an H-independent rule)
  bool changed = true;
  while (changed) {
    changed = false;
    for (int y : std::vector<int>(ms.cm.begin(), ms.cm.end())) {
      int yp = get_or(g.next_out, y);
      if (yp < 0 || ms.cm.count(yp)) continue;
      if (!g.row_of.count(y) || !g.row_of.count(yp)) continue;
      auto [a, arow] = g.row_of[y];
      auto [ap2, app] = g.row_of[yp];
      if (arow != ap2) continue;
      if (get_or(g.next_out, a) != arow || get_or(g.next_out, arow) != app) continue;

      bool force = false;
      int z = get_or(g.succ_out, y);
      int xl = get_or(g.succ_in, y);
      // (a): y first in its row (its succ-predecessor is the anchor)
      if (xl == a && z >= 0 && g.row_of.count(z) && g.row_of[z] == std::make_pair(a, arow)) {
        int zp = get_or(g.next_out, z);
        if (ms.cm.count(z) && zp >= 0 && g.row_of.count(zp) &&
            g.row_of[zp] == std::make_pair(arow, app) && get_or(g.succ_out, arow) == yp &&
            get_or(g.succ_out, yp) == zp &&
            all_distinct({a, arow, app, y, z, yp, zp}))
          force = true;
      }
      // (b): middle cell
      if (!force && xl >= 0 && z >= 0 && g.row_of.count(xl) &&
          g.row_of[xl] == std::make_pair(a, arow) && g.row_of.count(z) &&
          g.row_of[z] == std::make_pair(a, arow)) {
        int xp = get_or(g.next_out, xl);
        int zp = get_or(g.next_out, z);
        if (ms.cm.count(xl) && ms.cm.count(z) && xp >= 0 && zp >= 0 &&
            g.row_of.count(xp) && g.row_of[xp] == std::make_pair(arow, app) &&
            g.row_of.count(zp) && g.row_of[zp] == std::make_pair(arow, app) &&
            get_or(g.succ_out, xp) == yp && get_or(g.succ_out, yp) == zp &&
            all_distinct({a, arow, app, xl, y, z, xp, yp, zp}))
          force = true;
      }
      // (c)+(d): y at the row end (its successor is the next anchor)
      if (!force && z == arow && xl >= 0 && g.row_of.count(xl) &&
          g.row_of[xl] == std::make_pair(a, arow)) {
        int xp = get_or(g.next_out, xl);
        if (ms.cm.count(xl) && xp >= 0 && g.row_of.count(xp) &&
            g.row_of[xp] == std::make_pair(arow, app) && get_or(g.succ_out, xp) == yp &&
            get_or(g.succ_out, yp) == app &&
            all_distinct({a, arow, app, xl, y, xp, yp}))
          force = true;
      }
      if (force) {
        ms.cm.insert(yp);
        auto c = ms.coords[y];
        ms.coords[yp] = {c.first, c.second + 1};
        changed = true;
      }
    }
  }

  // Head walk: deterministic positions; symbols tracked per column
  std::map<int, int> tape;  // column -> machine symbol id
  for (const auto& [e, c] : ms.coords)
    if (c.second == 0 && g.symbol_of.count(e)) tape[c.first] = g.symbol_of[e];

  int head = get_or(g.succ_out, a0);
  if (head < 0 || !ms.init.count(head)) return ms;
  int state = mo.q_start;
  ms.ch.insert(head);
  ms.last_head_row = 0;
  long long guard = static_cast<long long>(b.domain_size) + 4;

  for (long long steps = 0; steps < guard; ++steps) {
    if (!ms.cm.count(head)) break;  // at most one head cell beyond Mark
    auto cit = ms.coords.find(head);
    if (cit == ms.coords.end()) break;
    auto [ci, cj] = cit->second;
    auto sit = tape.find(ci);
    if (sit == tape.end()) break;
    int sym = sit->second;
    auto opt = mo.table.find({state, sym});
    if (opt == mo.table.end() || opt->second.empty()) break;
    auto [q2, s2, d] = opt->second[0];

    // the grid pattern must be present for the rule to force anything
    int yp = get_or(g.next_out, head);
    if (yp < 0 || !g.row_of.count(head) || !g.row_of.count(yp)) break;
    auto [a, arow] = g.row_of[head];
    auto [ap2, app] = g.row_of[yp];
    if (arow != ap2 || get_or(g.next_out, a) != arow || get_or(g.next_out, arow) != app)
      break;
    int side = d == 'R' ? get_or(g.succ_out, head) : get_or(g.succ_in, head);
    if (side < 0 || !g.row_of.count(side) || g.row_of[side] != std::make_pair(a, arow))
      break;
    int sidep = get_or(g.next_out, side);
    if (sidep < 0 || !g.row_of.count(sidep) || g.row_of[sidep] != std::make_pair(arow, app))
      break;
    bool adjacent = d == 'R' ? (get_or(g.succ_out, yp) == sidep)
                             : (get_or(g.succ_out, sidep) == yp);
    if (!adjacent) break;

    tape[ci] = s2;
    state = q2;
    head = sidep;
    ms.ch.insert(head);
    ms.last_head_row = cj + 1;
  }
  return ms;
}

ReductionOutcome reverse_reduce(const Structure& b, const ObliviousMachine& mo) {
  if (auto v = check_fo_constraints(b))
    return {ReductionCase::FixedNo1, {}, v->rule};
  MarkingState ms = forced_marking(b, mo);
  if (ms.width == 0)
    return {ReductionCase::FixedYes2, {}, "no forced Init elements"};

  GridMaps g = build_maps(b, mo);
  std::vector<std::string> raw;
  for (const auto& [e, c] : ms.coords) {
    if (c.second != 0) continue;
    raw.resize(std::max<size_t>(raw.size(), c.first));
    raw[c.first - 1] = mo.alphabet[g.symbol_of.at(e)];
  }
  // strip the two appended visited-blank cells
  if (raw.size() >= 2 && raw[raw.size() - 1] == "_'" && raw[raw.size() - 2] == "_'") {
    raw.pop_back();
    raw.pop_back();
  }
  if (raw.empty())
    return {ReductionCase::FixedYes2, {}, "first row holds only padding"};
  long long n = static_cast<long long>(raw.size());
  if (mo.bound.eval(n) < 1)
    return {ReductionCase::FixedYes2, {}, "step bound below one"};
  long long need = g_moves(n, mo.bound).moves;
  if (ms.last_head_row >= need) return {ReductionCase::Machine3, raw, ""};
  return {ReductionCase::FixedYes2, {},
          "forced head stops at row " + std::to_string(ms.last_head_row) + " of " +
              std::to_string(need)};
}

bool decide_sat_phi(const Structure& b, const ObliviousMachine& mo, const SimOptions& opts) {
  ReductionOutcome out = reverse_reduce(b, mo);
  switch (out.kase) {
    case ReductionCase::FixedNo1: return false;
    case ReductionCase::FixedYes2: return true;
    case ReductionCase::Machine3: break;
  }
  SimResult r = simulate(mo, out.input, opts);
  if (r.capped) throw std::runtime_error("decide_sat_phi: simulation cap exceeded");
  return r.accepted;
}

// ---------------------------------------------------------------------------
// Bundles

EmbeddingBundle parse_bundle(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::string machine_text;
  std::string steps, yes, no;
  bool in_machine = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] == '#') continue;
    if (line.rfind("snpforge-format", 0) == 0) continue;
    if (line == "machine") {
      in_machine = true;
      continue;
    }
    if (line == "end") {
      in_machine = false;
      continue;
    }
    if (in_machine) {
      machine_text += line + "\n";
    } else if (line.rfind("steps ", 0) == 0) {
      steps = line.substr(6);
    } else if (line.rfind("yes ", 0) == 0) {
      yes = line.substr(4);
    } else if (line.rfind("no ", 0) == 0) {
      no = line.substr(3);
    }
  }
  if (machine_text.empty() || steps.empty() || yes.empty() || no.empty())
    throw std::runtime_error("bundle parse: need machine, steps, yes and no sections");
  EmbeddingBundle b;
  b.clocked = {parse_machine(machine_text), StepPolynomial::parse(steps)};
  b.machine = make_oblivious(b.clocked);
  b.yes_input = parse_input_string(b.machine.alphabet, yes);
  b.no_input = parse_input_string(b.machine.alphabet, no);
  if (!simulate(b.machine, b.yes_input).accepted)
    throw std::runtime_error("bundle parse: 'yes' input is not accepted");
  if (simulate(b.machine, b.no_input).accepted)
    throw std::runtime_error("bundle parse: 'no' input is not rejected");
  return b;
}

std::string render_bundle(const EmbeddingBundle& b) {
  std::ostringstream os;
  os << "snpforge-format 1\nmachine\n"
     << render_machine(b.clocked.base) << "end\nsteps " << b.clocked.bound.render()
     << "\nyes " << render_input_string(b.yes_input) << "\nno "
     << render_input_string(b.no_input) << "\n";
  return os.str();
}

ObliviousMachine micro_machine() {
  ObliviousMachine mo;
  mo.alphabet = {">", "_", "_'", "_'^h"};
  mo.states = {"qst", "acc", "rej"};
  mo.q_start = 0;
  mo.bound = StepPolynomial{{1}};
  mo.verdict = {0, 1, 2};
  mo.is_error = {false, false, false};
  int bot = 0, blank = 1, bp = 2, bph = 3;
  // first symbol decides; both halting families sweep right forever
  mo.table[{0, bot}] = {{2, bot, 'R'}};
  mo.table[{0, bp}] = {{1, bp, 'R'}};
  mo.table[{0, bph}] = {{1, bph, 'R'}};
  for (int q : {1, 2}) {
    mo.table[{q, bot}] = {{q, bot, 'R'}};
    mo.table[{q, blank}] = {{q, bp, 'R'}};
    mo.table[{q, bp}] = {{q, bp, 'R'}};
    mo.table[{q, bph}] = {{q, bph, 'R'}};
  }
  mo.provenance["qst"] = "micro machine: first symbol decides";
  return mo;
}

}  // namespace snp
