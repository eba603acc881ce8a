#include "snp/structures.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace snp {

Structure::Structure(Signature sig, int n) : signature(std::move(sig)), domain_size(n) {
  for (const auto& s : signature.symbols) relations[s.name];
}

const std::set<std::vector<int>>& Structure::tuples(const std::string& symbol) const {
  static const std::set<std::vector<int>> empty;
  auto it = relations.find(symbol);
  return it == relations.end() ? empty : it->second;
}

void Structure::add_tuple(const std::string& symbol, std::vector<int> t) {
  const RelationSymbol* sym = signature.find(symbol);
  if (!sym) throw std::invalid_argument("unknown symbol " + symbol);
  if (static_cast<int>(t.size()) != sym->arity)
    throw std::invalid_argument("arity mismatch for " + symbol);
  for (int e : t)
    if (e < 0 || e >= domain_size)
      throw std::out_of_range("element " + std::to_string(e) + " out of range for domain " +
                              std::to_string(domain_size));
  relations[symbol].insert(std::move(t));
}

bool Structure::has_tuple(const std::string& symbol, const std::vector<int>& t) const {
  return tuples(symbol).count(t) > 0;
}

std::size_t Structure::total_tuples() const {
  std::size_t n = 0;
  for (const auto& [k, v] : relations) n += v.size();
  return n;
}

Structure parse_structure(const std::string& text, const Signature& sig) {
  std::istringstream is(text);
  std::string token;
  // strip comments manually: read char stream
  std::string clean;
  bool comment = false;
  for (char c : text) {
    if (c == '#') comment = true;
    if (c == '\n') comment = false;
    if (!comment) clean += c;
  }
  std::istringstream in(clean);
  auto fail = [](const std::string& m) { throw std::runtime_error("structure parse: " + m); };
  in >> token;
  if (token != "domain") fail("expected 'domain'");
  long long n;
  if (!(in >> n) || n < 0) fail("expected nonnegative domain size");
  char semi;
  in >> semi;
  if (semi != ';') fail("expected ';' after domain");
  Structure a(sig, static_cast<int>(n));
  while (in >> std::ws, !in.eof()) {
    std::string name;
    char c;
    name.clear();
    while (in.get(c)) {
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
        name += c;
      } else {
        in.unget();
        break;
      }
    }
    if (name.empty()) {
      if (!(in >> c)) break;
      fail(std::string("unexpected character '") + c + "'");
    }
    in >> c;
    if (c != '(') fail("expected '(' after " + name);
    std::vector<int> t;
    while (true) {
      long long e;
      if (!(in >> e)) fail("expected element");
      t.push_back(static_cast<int>(e));
      in >> c;
      if (c == ')') break;
      if (c != ',') fail("expected ',' or ')'");
    }
    in >> c;
    if (c != ';') fail("expected ';' after tuple");
    if (!sig.contains(name)) fail("unknown symbol " + name);
    a.add_tuple(name, t);
    in >> std::ws;
    if (in.eof()) break;
  }
  return a;
}

std::string render_structure(const Structure& a) {
  std::ostringstream os;
  os << "domain " << a.domain_size << ";";
  for (const auto& sym : a.signature.symbols) {
    for (const auto& t : a.tuples(sym.name)) {
      os << " " << sym.name << "(";
      for (size_t i = 0; i < t.size(); ++i) {
        if (i) os << ",";
        os << t[i];
      }
      os << ");";
    }
  }
  os << "\n";
  return os.str();
}

namespace {

bool partial_ok(const Structure& a, const Structure& b, const std::vector<int>& map,
                int assigned) {
  for (const auto& sym : a.signature.symbols) {
    for (const auto& t : a.tuples(sym.name)) {
      bool full = true;
      std::vector<int> img(t.size());
      for (size_t i = 0; i < t.size(); ++i) {
        if (t[i] >= assigned) {
          full = false;
          break;
        }
        img[i] = map[t[i]];
      }
      if (full && !b.has_tuple(sym.name, img)) return false;
    }
  }
  return true;
}

}  // namespace

HomResult homomorphism_exists(const Structure& a, const Structure& b, bool injective,
                              long long node_cap) {
  HomResult res;
  if (a.domain_size == 0) {
    res.status = HomResult::Status::Found;
    return res;
  }
  if (injective && a.domain_size > b.domain_size) {
    res.status = HomResult::Status::None;
    return res;
  }
  std::vector<int> map(a.domain_size, -1);
  // Depth-first over source elements 0.. with target values ascending; the
  // first witness in this order is the deterministic one.
  long long nodes = 0;
  bool capped = false;
  auto rec = [&](auto&& self, int e) -> bool {
    if (e == a.domain_size) return true;
    for (int v = 0; v < b.domain_size; ++v) {
      if (injective &&
          std::find(map.begin(), map.begin() + e, v) != map.begin() + e)
        continue;
      if (++nodes > node_cap) {
        capped = true;
        return false;
      }
      map[e] = v;
      if (partial_ok(a, b, map, e + 1) && self(self, e + 1)) return true;
      if (capped) return false;
      map[e] = -1;
    }
    return false;
  };
  bool found = rec(rec, 0);
  res.nodes = nodes;
  if (found) {
    res.status = HomResult::Status::Found;
    res.mapping = map;
  } else {
    res.status = capped ? HomResult::Status::Budget : HomResult::Status::None;
  }
  return res;
}

Structure disjoint_union(const std::vector<Structure>& parts) {
  if (parts.empty()) return Structure{};
  for (const auto& p : parts)
    if (!(p.signature == parts[0].signature))
      throw std::invalid_argument("disjoint_union: signature mismatch");
  Structure out(parts[0].signature, 0);
  int offset = 0;
  for (const auto& p : parts) {
    out.domain_size += p.domain_size;
    for (const auto& sym : p.signature.symbols) {
      for (auto t : p.tuples(sym.name)) {
        for (int& e : t) e += offset;
        out.relations[sym.name].insert(std::move(t));
      }
    }
    offset += p.domain_size;
  }
  return out;
}

Structure reduct(const Structure& a, const Signature& keep) {
  for (const auto& sym : keep.symbols)
    if (!a.signature.contains(sym.name))
      throw std::invalid_argument("reduct: unknown symbol " + sym.name);
  Structure out(keep, a.domain_size);
  for (const auto& sym : keep.symbols) out.relations[sym.name] = a.tuples(sym.name);
  return out;
}

Structure induced_substructure(const Structure& a, const std::vector<int>& subset) {
  std::vector<int> renum(a.domain_size, -1);
  int next = 0;
  for (int e : subset) {
    if (e < 0 || e >= a.domain_size) throw std::out_of_range("induced: element out of range");
    if (renum[e] < 0) renum[e] = next++;
  }
  Structure out(a.signature, next);
  for (const auto& sym : a.signature.symbols) {
    for (const auto& t : a.tuples(sym.name)) {
      bool keep = std::all_of(t.begin(), t.end(), [&](int e) { return renum[e] >= 0; });
      if (!keep) continue;
      std::vector<int> img(t.size());
      for (size_t i = 0; i < t.size(); ++i) img[i] = renum[t[i]];
      out.relations[sym.name].insert(std::move(img));
    }
  }
  return out;
}

Structure singleton_structure(const Signature& sig, const RelationSymbol& r) {
  if (!sig.contains(r.name)) throw std::invalid_argument("singleton: unknown symbol " + r.name);
  Structure out(sig, r.arity);
  std::vector<int> t(r.arity);
  for (int i = 0; i < r.arity; ++i) t[i] = i;
  out.relations[r.name].insert(t);
  return out;
}

}  // namespace snp
