#include "snp/logic.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

namespace snp {

const RelationSymbol* Signature::find(const std::string& name) const {
  for (const auto& s : symbols)
    if (s.name == name) return &s;
  return nullptr;
}

int Signature::index_of(const std::string& name) const {
  for (size_t i = 0; i < symbols.size(); ++i)
    if (symbols[i].name == name) return static_cast<int>(i);
  return -1;
}

void Signature::add(RelationSymbol s) {
  if (contains(s.name)) throw std::invalid_argument("duplicate symbol " + s.name);
  symbols.push_back(std::move(s));
}

std::vector<std::string> NegatedConjunct::variables() const {
  std::vector<std::string> out;
  auto visit = [&](const std::string& v) {
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
  };
  for (const auto& l : tau_literals)
    for (const auto& v : l.atom.args) visit(v);
  for (const auto& l : sigma_literals)
    for (const auto& v : l.atom.args) visit(v);
  for (const auto& q : inequalities) {
    visit(q.lhs);
    visit(q.rhs);
  }
  return out;
}

bool is_identifier(const std::string& s) {
  if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

// ---------------------------------------------------------------------------
// Canonicalization

namespace {

// Group rank used for the canonical literal order inside a conjunct.
int group_rank(const SnpSentence& s, const Literal& l) {
  bool tau = s.input_sig.contains(l.atom.symbol);
  if (tau) return l.negated ? 1 : 0;
  return l.negated ? 3 : 2;
}

struct PendingLit {
  int rank;        // 0..3 literals, 4 inequality
  int symbol_idx;  // within its signature (or 0 for inequalities)
  std::vector<std::string> args;
  Literal lit;           // valid for rank <= 3
  Inequality ineq;       // valid for rank == 4
};

// Key used to pick the next literal greedily under a partial renaming:
// already-renamed variables map to their index, fresh ones to a large
// sentinel so that literals anchored in known variables come first.
std::vector<int> arg_key(const PendingLit& p, const std::map<std::string, int>& ren) {
  std::vector<int> k;
  k.reserve(p.args.size());
  for (const auto& a : p.args) {
    auto it = ren.find(a);
    k.push_back(it == ren.end() ? 1 << 20 : it->second);
  }
  return k;
}

}  // namespace

NegatedConjunct canonical_conjunct(const SnpSentence& s, const NegatedConjunct& c,
                                   bool* vacuous) {
  if (vacuous) *vacuous = false;
  std::vector<PendingLit> pend;
  for (const auto& l : c.tau_literals)
    pend.push_back({group_rank(s, l),
                    std::max(s.input_sig.index_of(l.atom.symbol), 0), l.atom.args, l, {}});
  for (const auto& l : c.sigma_literals)
    pend.push_back({group_rank(s, l),
                    std::max(s.existential_sig.index_of(l.atom.symbol), 0), l.atom.args, l, {}});
  for (const auto& q : c.inequalities) {
    if (q.lhs == q.rhs) {
      // x != x can never hold, the whole conjunction is false and the
      // negated conjunct is vacuously true.
      if (vacuous) *vacuous = true;
      return {};
    }
    std::string a = q.lhs, b = q.rhs;
    pend.push_back({4, 0, {a, b}, {}, {a, b}});
  }

  std::map<std::string, int> ren;
  NegatedConjunct out;
  std::vector<bool> used(pend.size(), false);
  for (size_t step = 0; step < pend.size(); ++step) {
    int best = -1;
    std::tuple<int, int, std::vector<int>> best_key;
    for (size_t i = 0; i < pend.size(); ++i) {
      if (used[i]) continue;
      std::tuple<int, int, std::vector<int>> key{pend[i].rank, pend[i].symbol_idx,
                                                 arg_key(pend[i], ren)};
      if (best < 0 || key < best_key) {
        best = static_cast<int>(i);
        best_key = key;
      }
    }
    used[best] = true;
    for (const auto& a : pend[best].args)
      if (!ren.count(a)) ren[a] = static_cast<int>(ren.size());
    auto rename = [&](const std::string& v) { return "v" + std::to_string(ren.at(v)); };
    PendingLit& p = pend[best];
    if (p.rank == 4) {
      std::string a = rename(p.ineq.lhs), b = rename(p.ineq.rhs);
      if (b < a) std::swap(a, b);
      Inequality q{a, b};
      if (std::find(out.inequalities.begin(), out.inequalities.end(), q) ==
          out.inequalities.end())
        out.inequalities.push_back(q);
    } else {
      Literal l = p.lit;
      for (auto& a : l.atom.args) a = rename(a);
      auto& dst = (p.rank <= 1) ? out.tau_literals : out.sigma_literals;
      if (std::find(dst.begin(), dst.end(), l) == dst.end()) dst.push_back(l);
    }
  }
  return out;
}

SnpSentence canonicalize(SnpSentence s) {
  std::vector<NegatedConjunct> out;
  for (const auto& c : s.conjuncts) {
    bool vac = false;
    NegatedConjunct cc = canonical_conjunct(s, c, &vac);
    if (vac) continue;
    if (cc.tau_literals.empty() && cc.sigma_literals.empty() && cc.inequalities.empty())
      continue;
    if (std::find(out.begin(), out.end(), cc) == out.end()) out.push_back(cc);
  }
  s.conjuncts = std::move(out);
  return s;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

struct Lexer {
  const std::string& text;
  size_t pos = 0;
  int line = 1, col = 1;

  explicit Lexer(const std::string& t) : text(t) { skip(); }

  void advance() {
    if (pos < text.size()) {
      if (text[pos] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++pos;
    }
  }

  void skip() {
    while (pos < text.size()) {
      char c = text[pos];
      if (c == '#') {
        while (pos < text.size() && text[pos] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  bool eof() {
    skip();
    return pos >= text.size();
  }

  char peek() {
    skip();
    return pos < text.size() ? text[pos] : '\0';
  }

  [[noreturn]] void fail(const std::string& msg) { throw parse_error(msg, line, col); }

  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    advance();
  }

  bool accept(char c) {
    if (peek() == c) {
      advance();
      return true;
    }
    return false;
  }

  std::string name() {
    skip();
    if (pos >= text.size() || !std::isalpha(static_cast<unsigned char>(text[pos])))
      fail("expected identifier");
    std::string out;
    while (pos < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_')) {
      out += text[pos];
      advance();
    }
    return out;
  }

  long long integer() {
    skip();
    if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos])))
      fail("expected integer");
    long long v = 0;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      v = v * 10 + (text[pos] - '0');
      advance();
    }
    return v;
  }

  bool accept_keyword(const std::string& kw) {
    skip();
    size_t save_pos = pos;
    int save_line = line, save_col = col;
    if (pos < text.size() && std::isalpha(static_cast<unsigned char>(text[pos]))) {
      std::string n = name();
      if (n == kw) return true;
    }
    pos = save_pos;
    line = save_line;
    col = save_col;
    return false;
  }
};

void parse_decls(Lexer& lx, Signature& sig, SymbolKind kind, const Signature& other) {
  if (lx.peek() == ';') return;  // empty declaration list
  while (true) {
    int l = lx.line, c = lx.col;
    std::string n = lx.name();
    lx.expect('/');
    long long a = lx.integer();
    if (a < 1) throw parse_error("arity must be >= 1 for " + n, l, c);
    if (sig.contains(n) || other.contains(n))
      throw parse_error("duplicate symbol " + n, l, c);
    sig.add({n, static_cast<int>(a), kind});
    if (!lx.accept(',')) break;
  }
}

}  // namespace

SnpSentence parse_sentence(const std::string& text) {
  Lexer lx(text);
  SnpSentence s;
  if (!lx.accept_keyword("input")) lx.fail("expected 'input'");
  parse_decls(lx, s.input_sig, SymbolKind::Input, s.existential_sig);
  lx.expect(';');
  if (!lx.accept_keyword("exists")) lx.fail("expected 'exists'");
  parse_decls(lx, s.existential_sig, SymbolKind::Existential, s.input_sig);
  lx.expect(';');

  while (!lx.eof()) {
    if (!lx.accept_keyword("forbid")) lx.fail("expected 'forbid'");
    NegatedConjunct c;
    while (true) {
      int l = lx.line, col = lx.col;
      bool neg = lx.accept('!');
      std::string n = lx.name();
      if (!neg && lx.peek() == '!') {
        // inequality VAR != VAR
        lx.expect('!');
        lx.expect('=');
        std::string rhs = lx.name();
        if (n == rhs)
          throw parse_error("inequality between identical names: " + n, l, col);
        c.inequalities.push_back({n, rhs});
      } else {
        lx.expect('(');
        Atom at;
        at.symbol = n;
        at.args.push_back(lx.name());
        while (lx.accept(',')) at.args.push_back(lx.name());
        lx.expect(')');
        const RelationSymbol* sym = s.input_sig.find(n);
        const RelationSymbol* esym = s.existential_sig.find(n);
        if (!sym && !esym) throw parse_error("undeclared symbol " + n, l, col);
        int arity = sym ? sym->arity : esym->arity;
        if (static_cast<int>(at.args.size()) != arity)
          throw parse_error("arity mismatch for " + n + ": expected " +
                                std::to_string(arity) + ", got " +
                                std::to_string(at.args.size()),
                            l, col);
        (sym ? c.tau_literals : c.sigma_literals).push_back({at, neg});
      }
      if (!lx.accept(',')) break;
    }
    lx.expect(';');
    if (c.tau_literals.empty() && c.sigma_literals.empty() && c.inequalities.empty())
      lx.fail("empty conjunct");
    s.conjuncts.push_back(std::move(c));
  }
  return canonicalize(std::move(s));
}

std::string render_sentence(const SnpSentence& sen) {
  SnpSentence s = canonicalize(sen);
  std::ostringstream os;
  auto decls = [&](const Signature& sig) {
    for (size_t i = 0; i < sig.symbols.size(); ++i) {
      if (i) os << ", ";
      os << sig.symbols[i].name << "/" << sig.symbols[i].arity;
    }
  };
  os << "input ";
  decls(s.input_sig);
  os << ";\nexists ";
  decls(s.existential_sig);
  os << ";\n";
  for (const auto& c : s.conjuncts) {
    os << "forbid ";
    bool first = true;
    auto emit_lit = [&](const Literal& l) {
      if (!first) os << ", ";
      first = false;
      if (l.negated) os << "!";
      os << l.atom.symbol << "(";
      for (size_t i = 0; i < l.atom.args.size(); ++i) {
        if (i) os << ",";
        os << l.atom.args[i];
      }
      os << ")";
    };
    for (const auto& l : c.tau_literals) emit_lit(l);
    for (const auto& l : c.sigma_literals) emit_lit(l);
    for (const auto& q : c.inequalities) {
      if (!first) os << ", ";
      first = false;
      os << q.lhs << " != " << q.rhs;
    }
    os << ";\n";
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Classification

namespace {

bool subset_of(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  return std::all_of(a.begin(), a.end(), [&](const std::string& v) {
    return std::find(b.begin(), b.end(), v) != b.end();
  });
}

}  // namespace

FragmentReport classify(const SnpSentence& s) {
  FragmentReport r;
  auto fall = [&](bool& flag, const std::string& name, int ci, const std::string& why) {
    if (flag) {
      flag = false;
      r.witnesses[name] = {false, ci, why};
    }
  };

  for (const auto& sym : s.existential_sig.symbols)
    if (sym.arity != 1)
      fall(r.is_monadic, "is_monadic", -1, "existential symbol " + sym.name + " has arity " +
                                               std::to_string(sym.arity));

  for (size_t ci = 0; ci < s.conjuncts.size(); ++ci) {
    const auto& c = s.conjuncts[ci];
    int i = static_cast<int>(ci);

    for (const auto& l : c.tau_literals)
      if (l.negated)
        fall(r.is_monotone_syntactic, "is_monotone_syntactic", i,
             "negated input atom " + l.atom.symbol);

    if (!c.inequalities.empty())
      fall(r.has_no_inequality, "has_no_inequality", i, "conjunct carries an inequality");

    // Guarded inequalities: both variables inside
    // one input atom of the same conjunct (negated atoms count for GMPART).
    for (const auto& q : c.inequalities) {
      bool guarded = false;
      for (const auto& l : c.tau_literals) {
        const auto& a = l.atom.args;
        if (std::find(a.begin(), a.end(), q.lhs) != a.end() &&
            std::find(a.begin(), a.end(), q.rhs) != a.end()) {
          guarded = true;
          break;
        }
      }
      if (!guarded) {
        fall(r.is_gmmsnp_ineq, "is_gmmsnp_ineq", i,
             "inequality " + q.lhs + " != " + q.rhs + " not guarded by an input atom");
        fall(r.is_gmpart_ineq, "is_gmpart_ineq", i,
             "inequality " + q.lhs + " != " + q.rhs + " not guarded by an input atom");
      }
    }

    // GMSNP guard rule: every negated sigma-atom covered by a positive atom.
    for (const auto& l : c.sigma_literals) {
      if (!l.negated) continue;
      bool guarded = false;
      for (const auto& g : c.tau_literals)
        if (!g.negated && subset_of(l.atom.args, g.atom.args)) guarded = true;
      for (const auto& g : c.sigma_literals)
        if (!g.negated && subset_of(l.atom.args, g.atom.args)) guarded = true;
      if (!guarded)
        fall(r.is_gmsnp, "is_gmsnp", i, "negated atom " + l.atom.symbol + " unguarded");
    }

    // GMPART shape: the input part is homogeneous in sign.
    bool has_pos = false, has_neg = false;
    for (const auto& l : c.tau_literals) (l.negated ? has_neg : has_pos) = true;
    if (has_pos && has_neg) {
      fall(r.is_gmpart_ineq, "is_gmpart_ineq", i, "mixed-sign input part");
    }

    // Connectedness: literals sharing a variable are linked.
    size_t nlits = c.tau_literals.size() + c.sigma_literals.size() + c.inequalities.size();
    if (nlits > 1) {
      std::vector<std::vector<std::string>> vars_of;
      for (const auto& l : c.tau_literals) vars_of.push_back(l.atom.args);
      for (const auto& l : c.sigma_literals) vars_of.push_back(l.atom.args);
      for (const auto& q : c.inequalities) vars_of.push_back({q.lhs, q.rhs});
      std::vector<int> comp(nlits, -1);
      comp[0] = 0;
      bool changed = true;
      while (changed) {
        changed = false;
        for (size_t a = 0; a < nlits; ++a) {
          if (comp[a] != 0) continue;
          for (size_t b = 0; b < nlits; ++b) {
            if (comp[b] == 0) continue;
            bool share = std::any_of(vars_of[a].begin(), vars_of[a].end(),
                                     [&](const std::string& v) {
                                       return std::find(vars_of[b].begin(), vars_of[b].end(),
                                                        v) != vars_of[b].end();
                                     });
            if (share) {
              comp[b] = 0;
              changed = true;
            }
          }
        }
      }
      bool connected = std::all_of(comp.begin(), comp.end(), [](int x) { return x == 0; });
      if (!connected) {
        fall(r.is_connected, "is_connected", i, "conjunct splits into variable-disjoint parts");
        if (r.split_conjunct < 0) {
          r.split_conjunct = i;
          for (size_t k = 0; k < nlits; ++k)
            (comp[k] == 0 ? r.split_group_a : r.split_group_b).push_back(static_cast<int>(k));
        }
      }
    }

    // Enriched: at least one atom of every input symbol in every conjunct.
    for (const auto& sym : s.input_sig.symbols) {
      bool present = std::any_of(c.tau_literals.begin(), c.tau_literals.end(),
                                 [&](const Literal& l) { return l.atom.symbol == sym.name; });
      if (!present)
        fall(r.is_enriched, "is_enriched", i, "conjunct lacks a " + sym.name + "-atom");
    }
  }
  if (s.conjuncts.empty() && !s.input_sig.symbols.empty())
    fall(r.is_enriched, "is_enriched", -1, "no conjuncts");

  r.is_mmsnp = r.is_monadic && r.is_monotone_syntactic && r.has_no_inequality;
  r.is_gmmsnp_ineq = r.is_gmmsnp_ineq && r.is_monadic && r.is_monotone_syntactic;
  r.is_gmsnp = r.is_gmsnp && r.is_monotone_syntactic && r.has_no_inequality;
  r.is_gmpart_ineq = r.is_gmpart_ineq && r.is_monadic;
  r.is_mpart = r.is_gmpart_ineq && r.has_no_inequality;
  if (!r.is_mpart && !r.witnesses.count("is_mpart"))
    r.witnesses["is_mpart"] = {false, -1, "fails GMPART or carries inequalities"};
  return r;
}

std::vector<std::string> validate(const SnpSentence& s) {
  std::vector<std::string> diags;
  std::set<std::string> names;
  auto check_sig = [&](const Signature& sig, const char* which) {
    for (const auto& sym : sig.symbols) {
      if (sym.arity < 1)
        diags.push_back(std::string(which) + " symbol " + sym.name + " has arity < 1");
      if (!is_identifier(sym.name))
        diags.push_back(std::string(which) + " symbol name '" + sym.name + "' is not an identifier");
      if (!names.insert(sym.name).second)
        diags.push_back("duplicate symbol name " + sym.name);
    }
  };
  check_sig(s.input_sig, "input");
  check_sig(s.existential_sig, "existential");

  for (size_t ci = 0; ci < s.conjuncts.size(); ++ci) {
    const auto& c = s.conjuncts[ci];
    std::string where = "conjunct " + std::to_string(ci) + ": ";
    if (c.tau_literals.empty() && c.sigma_literals.empty() && c.inequalities.empty())
      diags.push_back(where + "empty conjunct");
    for (const auto& l : c.tau_literals) {
      const RelationSymbol* sym = s.input_sig.find(l.atom.symbol);
      if (!sym)
        diags.push_back(where + "undeclared input symbol " + l.atom.symbol);
      else if (static_cast<int>(l.atom.args.size()) != sym->arity)
        diags.push_back(where + "arity mismatch for " + l.atom.symbol);
    }
    for (const auto& l : c.sigma_literals) {
      const RelationSymbol* sym = s.existential_sig.find(l.atom.symbol);
      if (!sym)
        diags.push_back(where + "undeclared existential symbol " + l.atom.symbol);
      else if (static_cast<int>(l.atom.args.size()) != sym->arity)
        diags.push_back(where + "arity mismatch for " + l.atom.symbol);
    }
    for (const auto& q : c.inequalities)
      if (q.lhs == q.rhs)
        diags.push_back(where + "inequality between identical names: " + q.lhs);
  }
  return diags;
}

}  // namespace snp
