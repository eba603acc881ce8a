// snpforge: one entry point for the sentence transforms, the model checker,
// the machine pipeline and the certification harness.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "snp/certify.hpp"
#include "snp/checker.hpp"
#include "snp/embed.hpp"
#include "snp/gmmsnp.hpp"
#include "snp/gmsnp.hpp"
#include "snp/matrix.hpp"
#include "snp/turing.hpp"

using namespace snp;

namespace {

constexpr const char* kFormatHeader = "snpforge-format 1";

enum Exit { kOk = 0, kViolated = 1, kUsage = 2, kBudget = 3 };

std::string read_input(const std::string& path) {
  std::ostringstream os;
  if (path == "-") {
    os << std::cin.rdbuf();
  } else {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    os << in.rdbuf();
  }
  std::string text = os.str();
  if (text.rfind(kFormatHeader, 0) == 0) {
    size_t nl = text.find('\n');
    text = nl == std::string::npos ? "" : text.substr(nl + 1);
  }
  return text;
}

void write_output(const std::string& path, const std::string& body) {
  std::string full = std::string(kFormatHeader) + "\n" + body;
  if (path == "-" || path.empty()) {
    std::cout << full;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << full;
}

int verdict_exit(Verdict v) {
  switch (v) {
    case Verdict::Satisfied: return kOk;
    case Verdict::Unsatisfied: return kViolated;
    case Verdict::BudgetExceeded: return kBudget;
  }
  return kUsage;
}

std::string flags_line(const FragmentReport& r) {
  std::string out;
  auto put = [&](bool b, const char* name) {
    if (b) {
      if (!out.empty()) out += " ";
      out += name;
    }
  };
  put(r.is_mmsnp, "MMSNP");
  put(r.is_gmmsnp_ineq, "GMMSNP≠");
  put(r.is_gmsnp, "GMSNP");
  put(r.is_mpart, "MPART");
  put(r.is_gmpart_ineq, "GMPART≠");
  put(r.is_monadic, "monadic");
  put(r.is_monotone_syntactic, "monotone");
  put(r.has_no_inequality, "no-inequality");
  put(r.is_connected, "connected");
  put(r.is_enriched, "enriched");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"snpforge: SNP fragment transforms and finite-model certification"};
  app.require_subcommand(1);

  // ---- classify
  std::string cls_file;
  auto* cls = app.add_subcommand("classify", "print the fragment flags of a sentence");
  cls->add_option("file", cls_file, "sentence file ('-' for stdin)")->required();

  // ---- check
  std::string chk_sentence, chk_structure;
  long long chk_budget = 10000000;
  auto* chk = app.add_subcommand("check", "decide Sat(Phi) on a finite structure");
  chk->add_option("--sentence", chk_sentence)->required();
  chk->add_option("--structure", chk_structure)->required();
  chk->add_option("--budget", chk_budget, "node budget");

  // ---- transform
  std::string tr_kind, tr_in, tr_out = "-", tr_trace;
  auto* tr = app.add_subcommand("transform", "sentence-to-sentence compilers");
  tr->add_option("kind", tr_kind, "gmmsnp2mmsnp|gmsnp-prune|gmsnp-enrich|gmsnp-concat")
      ->required();
  tr->add_option("input", tr_in)->required();
  tr->add_option("-o,--output", tr_out);
  tr->add_option("--trace", tr_trace, "write the stage trace / signature map here");

  // ---- reduce
  std::string rd_dir, rd_stage, rd_sentence, rd_structure, rd_out = "-", rd_symbol;
  auto* rd = app.add_subcommand("reduce", "instance maps of the reductions");
  rd->add_option("direction", rd_dir, "fwd|bwd")->required();
  rd->add_option("--stage", rd_stage, "gmmsnp|gmsnp-prune|gmsnp-enrich|gmsnp-concat")
      ->required();
  rd->add_option("--sentence", rd_sentence)->required();
  rd->add_option("--structure", rd_structure)->required();
  rd->add_option("--symbol", rd_symbol, "relation symbol (gmsnp-prune)");
  rd->add_option("-o,--output", rd_out);

  // ---- matrix
  auto* mx = app.add_subcommand("matrix", "matrix partition problems");
  mx->require_subcommand(1);
  std::string mx_matrix, mx_structure, mx_out = "-";
  auto* mxc = mx->add_subcommand("check", "decide M-partition of a loopless digraph");
  mxc->add_option("--matrix", mx_matrix)->required();
  mxc->add_option("--structure", mx_structure)->required();
  auto* mxk = mx->add_subcommand("compile", "emit the GMPART sentence of a matrix");
  mxk->add_option("--matrix", mx_matrix)->required();
  mxk->add_option("-o,--output", mx_out);

  // ---- tm
  auto* tm = app.add_subcommand("tm", "Turing machine pipeline");
  tm->require_subcommand(1);
  std::string tm_machine, tm_steps, tm_input, tm_out = "-";
  long long tm_cap = 200000;
  int tm_len = 2;
  std::uint64_t tm_seed = 0;
  bool tm_one_branch = false;
  auto* tms = tm->add_subcommand("simulate", "run a machine on an input string");
  tms->add_option("--machine", tm_machine)->required();
  tms->add_option("--input", tm_input)->required();
  tms->add_option("--steps", tm_steps, "clock polynomial c0,c1,...");
  tms->add_option("--cap", tm_cap);
  tms->add_flag("--one-branch", tm_one_branch, "follow one seeded branch");
  tms->add_option("--seed", tm_seed);
  auto* tmo = tm->add_subcommand("oblivious", "compile the family-O machine");
  tmo->add_option("--machine", tm_machine)->required();
  tmo->add_option("--steps", tm_steps)->required();
  tmo->add_option("-o,--output", tm_out);
  auto* tmv = tm->add_subcommand("verify", "check obliviousness at one input length");
  tmv->add_option("--machine", tm_machine)->required();
  tmv->add_option("--steps", tm_steps)->required();
  tmv->add_option("--length", tm_len)->required();

  // ---- embed
  auto* em = app.add_subcommand("embed", "space-time grid embedding");
  em->require_subcommand(1);
  std::string em_bundle, em_input, em_structure, em_out = "-";
  auto* emg = em->add_subcommand("grid", "build the grid of an input string");
  emg->add_option("--bundle", em_bundle)->required();
  emg->add_option("--input", em_input)->required();
  emg->add_option("-o,--output", em_out);
  auto* ems = em->add_subcommand("sentence", "emit the embedding sentence");
  ems->add_option("--bundle", em_bundle)->required();
  ems->add_option("-o,--output", em_out);
  auto* emr = em->add_subcommand("reverse", "classify a structure (cases 1-3)");
  emr->add_option("--bundle", em_bundle)->required();
  emr->add_option("--structure", em_structure)->required();
  auto* emd = em->add_subcommand("decide", "decide Sat(Phi) through the reduction");
  emd->add_option("--bundle", em_bundle)->required();
  emd->add_option("--structure", em_structure)->required();

  // ---- fuzz
  auto* fz = app.add_subcommand("fuzz", "batch certification");
  fz->require_subcommand(1);
  std::string fz_reduction;
  int fz_trials = 100;
  std::uint64_t fz_seed = 0;
  long long fz_budget = 10000000;
  auto* fzc = fz->add_subcommand("certify", "run a reduction's equivalence trials");
  fzc->add_option("--reduction", fz_reduction)->required();
  fzc->add_option("--trials", fz_trials);
  fzc->add_option("--seed", fz_seed, "explicit seed (no wall-clock seeding)")->required();
  fzc->add_option("--budget", fz_budget);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*cls) {
      auto s = parse_sentence(read_input(cls_file));
      std::cout << flags_line(classify(s)) << "\n";
      return kOk;
    }
    if (*chk) {
      auto phi = parse_sentence(read_input(chk_sentence));
      auto a = parse_structure(read_input(chk_structure), phi.input_sig);
      Budget b;
      b.max_nodes = chk_budget;
      auto res = check_sat(phi, a, b);
      std::cout << to_string(res.verdict) << " nodes " << res.nodes << "\n";
      if (res.witness) std::cout << render_structure(*res.witness);
      return verdict_exit(res.verdict);
    }
    if (*tr) {
      auto phi = parse_sentence(read_input(tr_in));
      if (tr_kind == "gmmsnp2mmsnp") {
        auto comp = to_mmsnp(phi);
        write_output(tr_out, render_sentence(comp.sentence));
        if (!tr_trace.empty()) write_output(tr_trace, comp.map.render());
      } else if (tr_kind == "gmsnp-prune") {
        SnpSentence cur = phi;
        std::vector<std::string> removed;
        bool changed = true;
        while (changed) {
          changed = false;
          for (const auto& sym : cur.input_sig.symbols)
            if (!singleton_check(cur, sym)) {
              removed.push_back(sym.name);
              cur = prune_relation(cur, sym);
              changed = true;
              break;
            }
        }
        write_output(tr_out, render_sentence(cur));
        if (!tr_trace.empty()) {
          std::string t = "removed:";
          for (size_t i = 0; i < removed.size(); ++i) t += (i ? "," : " ") + removed[i];
          write_output(tr_trace, t + ";\n");
        }
      } else if (tr_kind == "gmsnp-enrich") {
        write_output(tr_out, render_sentence(enrich_conjuncts(phi)));
      } else if (tr_kind == "gmsnp-concat") {
        auto psi = concatenate(phi);
        write_output(tr_out, render_sentence(psi));
        if (!tr_trace.empty()) {
          std::vector<ConcatBlock> layout;
          concatenated_signature(phi.input_sig, &layout);
          std::string t = "layout:";
          for (size_t i = 0; i < layout.size(); ++i)
            t += (i ? "," : " ") + layout[i].source + "@" + std::to_string(layout[i].offset) +
                 ".." + std::to_string(layout[i].offset + layout[i].width);
          write_output(tr_trace, t + ";\n");
        }
      } else {
        std::cerr << "unknown transform " << tr_kind << "\n";
        return kUsage;
      }
      return kOk;
    }
    if (*rd) {
      auto phi = parse_sentence(read_input(rd_sentence));
      bool fwd = rd_dir == "fwd";
      if (!fwd && rd_dir != "bwd") {
        std::cerr << "direction must be fwd or bwd\n";
        return kUsage;
      }
      if (rd_stage == "gmmsnp") {
        auto map = derive_signature(phi.input_sig);
        if (fwd) {
          auto a = parse_structure(read_input(rd_structure), phi.input_sig);
          write_output(rd_out, render_structure(structure_forward(a, map)));
        } else {
          auto a1 = parse_structure(read_input(rd_structure), map.derived_sig);
          auto res = structure_backward(a1, phi.input_sig, map);
          if (std::holds_alternative<FixedNo>(res)) {
            write_output(rd_out, "FIXEDNO\n" + render_structure(fixed_no_instance(phi)));
          } else {
            write_output(rd_out, render_structure(std::get<Structure>(res)));
          }
        }
      } else if (rd_stage == "gmsnp-prune") {
        if (!fwd) {
          std::cerr << "gmsnp-prune has a forward map only\n";
          return kUsage;
        }
        const RelationSymbol* sym = phi.input_sig.find(rd_symbol);
        if (!sym) {
          std::cerr << "--symbol must name an input relation\n";
          return kUsage;
        }
        auto pruned = prune_relation(phi, *sym);
        auto no_inst = find_instance_with_verdict(pruned, false, {});
        if (!no_inst) throw std::runtime_error("pruned sentence has no NO instance in bound");
        auto a = parse_structure(read_input(rd_structure), phi.input_sig);
        write_output(rd_out, render_structure(reduce_instance_stage1(a, *sym, *no_inst)));
      } else if (rd_stage == "gmsnp-enrich") {
        if (!fwd) {
          std::cerr << "gmsnp-enrich has a forward map only\n";
          return kUsage;
        }
        auto a = parse_structure(read_input(rd_structure), phi.input_sig);
        write_output(rd_out, render_structure(reduce_instance_stage2(a)));
      } else if (rd_stage == "gmsnp-concat") {
        std::vector<ConcatBlock> layout;
        Signature tau1 = concatenated_signature(phi.input_sig, &layout);
        if (fwd) {
          auto a = parse_structure(read_input(rd_structure), phi.input_sig);
          write_output(rd_out, render_structure(structure_to_single(a)));
        } else {
          auto b1 = parse_structure(read_input(rd_structure), tau1);
          write_output(rd_out,
                       render_structure(structure_from_single(b1, phi.input_sig, layout)));
        }
      } else {
        std::cerr << "unknown stage " << rd_stage << "\n";
        return kUsage;
      }
      return kOk;
    }
    if (*mx) {
      auto m = parse_matrix(read_input(mx_matrix));
      if (*mxc) {
        auto g = parse_structure(read_input(mx_structure), digraph_signature());
        bool ok = m_partition_check(g, m);
        std::cout << (ok ? "yes" : "no") << "\n";
        return ok ? kOk : kViolated;
      }
      write_output(mx_out, render_sentence(matrix_to_sentence(m)));
      return kOk;
    }
    if (*tm) {
      auto base = parse_machine(read_input(tm_machine));
      if (*tms) {
        SimOptions opts;
        opts.step_cap = tm_cap;
        opts.exhaustive = !tm_one_branch;
        opts.seed = tm_seed;
        SimResult r;
        std::vector<std::string> input = parse_input_string(base.alphabet, tm_input);
        if (tm_steps.empty()) {
          r = simulate(base, input, opts);
        } else {
          r = simulate(ClockedMachine{base, StepPolynomial::parse(tm_steps)}, input, opts);
        }
        std::cout << (r.accepted ? "accept" : "reject") << " moves " << r.trace.moves
                  << (r.capped ? " capped" : "") << "\n";
        return r.capped ? kBudget : (r.accepted ? kOk : kViolated);
      }
      ClockedMachine cm{base, StepPolynomial::parse(tm_steps)};
      auto mo = make_oblivious(cm);
      if (*tmo) {
        std::ostringstream os;
        os << "oblivious machine: " << mo.states.size() << " states, "
           << mo.alphabet.size() << " symbols, steps " << mo.bound.render() << "\n";
        os << "alphabet:";
        for (const auto& s : mo.alphabet) os << " " << s;
        os << "\n";
        for (const auto& [key, opts] : mo.table)
          for (const auto& [q2, s2, d] : opts)
            os << "delta " << mo.states[key.first] << " " << mo.alphabet[key.second]
               << " -> " << mo.states[q2] << " " << mo.alphabet[s2] << " " << d << ";\n";
        write_output(tm_out, os.str());
        return kOk;
      }
      std::vector<std::string> letters;
      for (const auto& s : base.alphabet)
        if (s != kFirstSym && s != kBlankSym) letters.push_back(s);
      std::vector<std::vector<std::string>> sample;
      std::vector<std::string> cur(tm_len, letters.empty() ? ">" : letters[0]);
      long long total = 1;
      for (int i = 0; i < tm_len; ++i) total *= std::max<size_t>(letters.size(), 1);
      total = std::min(total, 256LL);
      for (long long w = 0; w < total; ++w) {
        long long v = w;
        for (int i = 0; i < tm_len; ++i) {
          if (!letters.empty()) cur[i] = letters[v % letters.size()];
          v /= std::max<size_t>(letters.size(), 1);
        }
        sample.push_back(cur);
      }
      auto rep = verify_obliviousness(mo, tm_len, sample);
      std::cout << (rep.ok ? "oblivious" : ("DIVERGENT: " + rep.first_divergence))
                << " moves " << rep.moves << " expected " << rep.expected_moves
                << " round-trips " << rep.round_trips << "\n";
      return rep.ok ? kOk : kViolated;
    }
    if (*em) {
      auto bundle = parse_bundle(read_input(em_bundle));
      if (*emg) {
        auto x = parse_input_string(bundle.machine.alphabet, em_input);
        write_output(em_out, render_structure(build_grid(x, bundle.machine)));
        return kOk;
      }
      if (*ems) {
        write_output(em_out, render_sentence(build_sentence(bundle.machine)));
        return kOk;
      }
      auto b = parse_structure(read_input(em_structure), grid_signature(bundle.machine));
      if (*emr) {
        auto out = reverse_reduce(b, bundle.machine);
        switch (out.kase) {
          case ReductionCase::FixedNo1:
            std::cout << "case1 FixedNo " << render_input_string(bundle.no_input) << "\n";
            break;
          case ReductionCase::FixedYes2:
            std::cout << "case2 FixedYes " << render_input_string(bundle.yes_input) << "\n";
            break;
          case ReductionCase::Machine3:
            std::cout << "case3 MachineInput " << render_input_string(out.input) << "\n";
            break;
        }
        return kOk;
      }
      bool sat = decide_sat_phi(b, bundle.machine);
      std::cout << (sat ? "satisfied" : "unsatisfied") << "\n";
      return sat ? kOk : kViolated;
    }
    if (*fz) {
      TrialConfig cfg;
      cfg.seed = fz_seed;
      cfg.trials = fz_trials;
      cfg.budget.max_nodes = fz_budget;
      auto rep = certify(parse_reduction(fz_reduction), cfg);
      std::cout << rep.render();
      if (rep.disagree > 0) return kViolated;
      if (rep.budget_exceeded > 0) return kBudget;
      return kOk;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
