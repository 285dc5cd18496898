// Batch front end: every subcommand reads JSON (files or "-" for stdin),
// writes one deterministic payload to --out (default stdout), and exits 0 on
// success, 1 on a domain error (one-line {"error":...} on stderr), or 2 on a
// usage error. Formulas are passed as text via --formula or --formula-file;
// presentation verbs use the quantifier grammar, cell verbs the
// order-arithmetic grammar.

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "astra/astra.hpp"

namespace {

using astra::Json;

bool g_verbose = false;

void note(const std::string& s) {
  if (g_verbose) std::cerr << s << "\n";
}

std::string slurp(std::istream& in) {
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string read_text(const std::string& path) {
  if (path == "-") return slurp(std::cin);
  std::ifstream f(path);
  if (!f) throw astra::error("cannot open '" + path + "'");
  return slurp(f);
}

Json read_json(const std::string& path) {
  try {
    return Json::parse(read_text(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw astra::error("malformed JSON in '" + path + "': " + std::string(e.what()));
  }
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw astra::error("cannot write '" + path + "'");
  f << text;
}

void emit(const std::string& path, const Json& j) { write_text(path, j.dump(2) + "\n"); }

void emit_line(const std::string& path, const std::string& s) { write_text(path, s + "\n"); }

// --formula / --formula-file, exactly one of which must be present.
struct FormulaOpt {
  std::string text;
  std::string file;

  void attach(CLI::App* cmd) {
    auto* a = cmd->add_option("--formula", text, "formula text");
    auto* b = cmd->add_option("--formula-file", file, "file containing the formula text");
    a->excludes(b);
    b->excludes(a);
  }

  std::string get() const {
    if (!text.empty()) return text;
    if (!file.empty()) return read_text(file);
    throw CLI::ValidationError("pass --formula or --formula-file");
  }
};

std::vector<mpz_class> parse_point(const std::string& text) {
  std::vector<mpz_class> out;
  size_t i = 0;
  while (i <= text.size()) {
    size_t j = text.find(',', i);
    if (j == std::string::npos) j = text.size();
    std::string tok = text.substr(i, j - i);
    if (tok.empty()) throw astra::error("bad point entry in '" + text + "'");
    try {
      out.emplace_back(tok, 10);
    } catch (const std::invalid_argument&) {
      throw astra::error("bad point entry '" + tok + "'");
    }
    i = j + 1;
    if (j == text.size()) break;
  }
  return out;
}

CLI::App* sub(CLI::App& parent, const std::string& name, const std::string& desc) {
  CLI::App* cmd = parent.add_subcommand(name, desc);
  cmd->fallthrough();
  return cmd;
}

// One bounded pattern from a file holding either a single pattern, an array
// of patterns, or a {"patterns":[...]} report.
astra::BoundedPattern pattern_at(const astra::Alphabet& sigma, const Json& j, int index) {
  const Json* arr = nullptr;
  if (j.is_array())
    arr = &j;
  else if (j.is_object() && j.contains("patterns"))
    arr = &j["patterns"];
  if (!arr) return astra::pattern_from_json(sigma, j);
  if (index < 0 || index >= static_cast<int>(arr->size()))
    throw astra::error("pattern index " + std::to_string(index) + " out of range");
  return astra::pattern_from_json(sigma, (*arr)[index]);
}

struct GrowthCmd {
  std::string automaton, out;
};

struct CountCmd {
  std::string automaton, out;
  int bound = 0;
};

struct ExponentsCmd {
  std::string automaton, pattern, out;
  int index = 0;
};

struct EvalCmd {
  std::string presentation, out;
  FormulaOpt formula;
};

struct InterpCmd {
  std::string presentation, interpretation, out;
};

struct BuildCmd {
  std::string out, poly, gvpf;
  int base = 2;
};

struct CellsDecomposeCmd {
  std::string out;
  int vars = 1;
  FormulaOpt formula;
};

struct CellsFiberCmd {
  std::string cell, out;
  int split = 0;
};

struct SemilinearCmd {
  std::string set, point, out;
  int bound = 8, split = 1;
};

struct EqClassifyCmd {
  std::string fiber, out;
};

struct EqBuildCmd {
  std::string gvpf, chambers, polys, out;
};

struct EqCheckCmd {
  std::string presentation, descriptor, out;
  int bound = 8;
};

struct EqCountCmd {
  std::string descriptor, out;
  long size = 1;
};

struct ReachCmd {
  std::string presentation, out, input = "x", output_var = "y";
  FormulaOpt formula;
  std::vector<std::string> seeds;
  int steps = 0;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"automatic structures toolbox"};
  app.require_subcommand(1);
  app.add_flag("--verbose", g_verbose, "human-readable notes on stderr");

  using namespace astra;

  // growth / count / decompose / normalize / exponents ----------------------
  auto growth_state = std::make_shared<GrowthCmd>();
  {
    CLI::App* cmd = sub(app, "growth", "classify the growth of a regular language");
    cmd->add_option("--automaton", growth_state->automaton, "automaton JSON")->required();
    cmd->add_option("--out", growth_state->out, "output path");
    cmd->callback([growth_state] {
      Automaton a = automaton_from_json(read_json(growth_state->automaton));
      GrowthReport r = classify_growth(a);
      note(r.polynomial ? "polynomial, degree " + std::to_string(r.degree) : "exponential");
      emit(growth_state->out, growth_report_to_json(a.alphabet(), r));
    });
  }

  auto count_state = std::make_shared<CountCmd>();
  {
    CLI::App* cmd = sub(app, "count", "cumulative word counts per length");
    cmd->add_option("--automaton", count_state->automaton, "automaton JSON")->required();
    cmd->add_option("--bound", count_state->bound, "maximum length")->required();
    cmd->add_option("--out", count_state->out, "output path");
    cmd->callback([count_state] {
      Automaton a = automaton_from_json(read_json(count_state->automaton));
      emit(count_state->out, json_of_mpz_vector(count_words_upto(a, count_state->bound)));
    });
  }

  auto decompose_state = std::make_shared<GrowthCmd>();
  {
    CLI::App* cmd = sub(app, "decompose", "bounded-pattern decomposition of a polynomial-growth language");
    cmd->add_option("--automaton", decompose_state->automaton, "automaton JSON")->required();
    cmd->add_option("--out", decompose_state->out, "output path");
    cmd->callback([decompose_state] {
      Automaton a = automaton_from_json(read_json(decompose_state->automaton));
      Json pats = Json::array();
      for (const BoundedPattern& p : bounded_decomposition(a)) pats.push_back(pattern_to_json(a.alphabet(), p));
      Json j;
      j["patterns"] = std::move(pats);
      emit(decompose_state->out, j);
    });
  }

  auto normalize_state = std::make_shared<ExponentsCmd>();
  {
    CLI::App* cmd = sub(app, "normalize", "recode patterns over fresh per-pattern letters");
    cmd->add_option("--automaton", normalize_state->automaton, "automaton JSON")->required();
    cmd->add_option("--patterns", normalize_state->pattern, "pattern list JSON (defaults to a fresh decomposition)");
    cmd->add_option("--out", normalize_state->out, "output path");
    cmd->callback([normalize_state] {
      Automaton a = automaton_from_json(read_json(normalize_state->automaton));
      std::vector<BoundedPattern> pats;
      if (!normalize_state->pattern.empty()) {
        Json j = read_json(normalize_state->pattern);
        const Json& arr = j.is_object() && j.contains("patterns") ? j["patterns"] : j;
        if (!arr.is_array()) throw error("expected a pattern array");
        for (const Json& e : arr) pats.push_back(pattern_from_json(a.alphabet(), e));
      } else {
        pats = bounded_decomposition(a);
      }
      emit(normalize_state->out, normalized_to_json(normalize_letters(a.alphabet(), pats)));
    });
  }

  auto exponents_state = std::make_shared<ExponentsCmd>();
  {
    CLI::App* cmd = sub(app, "exponents", "semilinear set of loop exponents landing in the language");
    cmd->add_option("--automaton", exponents_state->automaton, "automaton JSON")->required();
    cmd->add_option("--pattern", exponents_state->pattern, "pattern JSON (single, array, or report)")->required();
    cmd->add_option("--index", exponents_state->index, "pattern index when the file holds several");
    cmd->add_option("--out", exponents_state->out, "output path");
    cmd->callback([exponents_state] {
      Automaton a = automaton_from_json(read_json(exponents_state->automaton));
      BoundedPattern p = pattern_at(a.alphabet(), read_json(exponents_state->pattern), exponents_state->index);
      emit(exponents_state->out, semilinear_to_json(pattern_exponents(a, p)));
    });
  }

  // eval / decide / interp apply --------------------------------------------
  auto eval_state = std::make_shared<EvalCmd>();
  {
    CLI::App* cmd = sub(app, "eval", "evaluate a formula over a presentation");
    cmd->add_option("--presentation", eval_state->presentation, "presentation JSON")->required();
    eval_state->formula.attach(cmd);
    cmd->add_option("--out", eval_state->out, "output path");
    cmd->callback([eval_state] {
      Presentation p = presentation_from_json(read_json(eval_state->presentation));
      Evaluated e = eval(p, parse_formula(eval_state->formula.get()));
      Json j;
      j["vars"] = e.vars;
      if (e.rel)
        j["relation"] = relation_to_json(*e.rel);
      else
        j["truth"] = e.truth;
      emit(eval_state->out, j);
    });
  }

  auto decide_state = std::make_shared<EvalCmd>();
  {
    CLI::App* cmd = sub(app, "decide", "decide a sentence over a presentation");
    cmd->add_option("--presentation", decide_state->presentation, "presentation JSON")->required();
    decide_state->formula.attach(cmd);
    cmd->add_option("--out", decide_state->out, "output path");
    cmd->callback([decide_state] {
      Presentation p = presentation_from_json(read_json(decide_state->presentation));
      emit_line(decide_state->out, decide(p, parse_formula(decide_state->formula.get())) ? "true" : "false");
    });
  }

  auto interp_state = std::make_shared<InterpCmd>();
  {
    CLI::App* interp = sub(app, "interp", "first-order interpretations");
    interp->require_subcommand(1);
    CLI::App* cmd = sub(*interp, "apply", "interpret a new presentation inside an existing one");
    cmd->add_option("--presentation", interp_state->presentation, "presentation JSON")->required();
    cmd->add_option("--interpretation", interp_state->interpretation, "interpretation JSON")->required();
    cmd->add_option("--out", interp_state->out, "output path");
    cmd->callback([interp_state] {
      Presentation p = presentation_from_json(read_json(interp_state->presentation));
      Interpretation tau = interpretation_from_json(read_json(interp_state->interpretation));
      emit(interp_state->out, presentation_to_json(apply_interpretation(p, tau)));
    });
  }

  // build --------------------------------------------------------------------
  {
    CLI::App* build = sub(app, "build", "stock presentations");
    build->require_subcommand(1);

    auto simple = [&](const std::string& name, const std::string& desc, auto maker, bool takes_base) {
      auto st = std::make_shared<BuildCmd>();
      CLI::App* cmd = sub(*build, name, desc);
      if (takes_base) cmd->add_option("--base", st->base, "numeral base / branching degree");
      cmd->add_option("--out", st->out, "output path");
      cmd->callback([st, maker, takes_base] {
        Presentation p = takes_base ? maker(st->base) : maker(0);
        emit(st->out, presentation_to_json(p));
      });
    };
    simple("omega", "the ordered naturals over unary words", [](int) { return omega_le(); }, false);
    simple("presburger", "base-p addition", [](int b) { return presburger(b); }, true);
    simple("divp", "base-p order with divisibility-by-powers", [](int b) { return presburger_div(b); }, true);
    simple("tree", "the p-ary tree orders", [](int b) { return pary_tree(b); }, true);
    simple("grid", "the infinite grid with step relations", [](int) { return grid_example(); }, false);
    simple("triangular", "ordered naturals with the triangular-position predicate",
           [](int) { return triangular_example(); }, false);

    auto ep_state = std::make_shared<BuildCmd>();
    CLI::App* ep = sub(*build, "ep", "equivalence structure with one class of size p(x) per index point");
    ep->add_option("--poly", ep_state->poly, "polynomial JSON")->required();
    ep->add_option("--out", ep_state->out, "output path");
    ep->callback([ep_state] {
      Polynomial p = poly_from_json(read_json(ep_state->poly));
      emit(ep_state->out, presentation_to_json(build_Ep(p)));
    });

    auto eg_state = std::make_shared<BuildCmd>();
    CLI::App* eg = sub(*build, "eg", "equivalence structure with one class of size g(x) per index point");
    eg->add_option("--gvpf", eg_state->gvpf, "generalized vector partition function JSON")->required();
    eg->add_option("--base", eg_state->base, "numeral base of the carrier presentation");
    eg->add_option("--out", eg_state->out, "output path");
    eg->callback([eg_state] {
      GeneralizedVpf g = gvpf_from_json(read_json(eg_state->gvpf));
      Interpretation tau = build_Eg_presburger(g);
      emit(eg_state->out, presentation_to_json(apply_interpretation(presburger(eg_state->base), tau)));
    });
  }

  // cells ---------------------------------------------------------------------
  {
    CLI::App* cells = sub(app, "cells", "cell calculus over the ordered naturals");
    cells->require_subcommand(1);

    auto dec_state = std::make_shared<CellsDecomposeCmd>();
    CLI::App* dec = sub(*cells, "decompose", "disjoint cells of a quantifier-free definable set");
    dec->add_option("--vars", dec_state->vars, "number of coordinates x0..x{n-1}")->required();
    dec_state->formula.attach(dec);
    dec->add_option("--out", dec_state->out, "output path");
    dec->callback([dec_state] {
      OmegaPtr psi = parse_omega(dec_state->formula.get());
      emit(dec_state->out, cell_union_to_json(qf_to_cells(psi, dec_state->vars)));
    });

    auto fiber_state = std::make_shared<CellsFiberCmd>();
    CLI::App* fib = sub(*cells, "fiber", "guarded fiber counts of a cell over its last coordinates");
    fib->add_option("--cell", fiber_state->cell, "cell JSON")->required();
    fib->add_option("--split", fiber_state->split, "number of leading fiber coordinates")->required();
    fib->add_option("--out", fiber_state->out, "output path");
    fib->callback([fiber_state] {
      SCell c = cell_from_json(read_json(fiber_state->cell));
      emit(fiber_state->out, fiber_to_json(fiber_data(c, fiber_state->split)));
    });

    auto param_state = std::make_shared<CellsFiberCmd>();
    CLI::App* par = sub(*cells, "param", "affine parametrization of a cell");
    par->add_option("--cell", param_state->cell, "cell JSON")->required();
    par->add_option("--out", param_state->out, "output path");
    par->callback([param_state] {
      SCell c = cell_from_json(read_json(param_state->cell));
      emit(param_state->out, affine_to_json(cell_param(c)));
    });
  }

  // semilinear -----------------------------------------------------------------
  {
    CLI::App* semi = sub(app, "semilinear", "semilinear sets and their counting functions");
    semi->require_subcommand(1);

    auto member_state = std::make_shared<SemilinearCmd>();
    CLI::App* mem = sub(*semi, "member", "membership of one point");
    mem->add_option("--set", member_state->set, "semilinear set JSON")->required();
    mem->add_option("--point", member_state->point, "comma-separated coordinates")->required();
    mem->add_option("--out", member_state->out, "output path");
    mem->callback([member_state] {
      SemilinearSet s = semilinear_from_json(read_json(member_state->set));
      std::vector<mpz_class> x = parse_point(member_state->point);
      if (static_cast<int>(x.size()) != s.dim()) throw error("point dimension mismatch");
      emit_line(member_state->out, member(s, x) ? "true" : "false");
    });

    auto series_state = std::make_shared<SemilinearCmd>();
    CLI::App* ser = sub(*semi, "series", "per-point multiplicities of the pieces on a box");
    ser->add_option("--set", series_state->set, "semilinear set JSON")->required();
    ser->add_option("--bound", series_state->bound, "box bound per coordinate");
    ser->add_option("--out", series_state->out, "output path");
    ser->callback([series_state] {
      SemilinearSet s = semilinear_from_json(read_json(series_state->set));
      Json coeffs = Json::array();
      for (const auto& [point, count] : series_coeffs(s, series_state->bound)) {
        Json e;
        e["point"] = point;
        e["count"] = json_of_mpz(count);
        coeffs.push_back(std::move(e));
      }
      Json j;
      j["bound"] = series_state->bound;
      j["coeffs"] = std::move(coeffs);
      emit(series_state->out, j);
    });

    auto out_state = std::make_shared<SemilinearCmd>();
    CLI::App* od = sub(*semi, "outdegree", "out-degree counting function of a relation's semilinear graph");
    od->add_option("--set", out_state->set, "semilinear set JSON")->required();
    od->add_option("--split", out_state->split, "arity of the source tuple")->required();
    od->add_option("--out", out_state->out, "output path");
    od->callback([out_state] {
      SemilinearSet s = semilinear_from_json(read_json(out_state->set));
      emit(out_state->out, gvpf_to_json(outdegree_gvpf(s, out_state->split)));
    });

    auto form_state = std::make_shared<SemilinearCmd>();
    CLI::App* tf = sub(*semi, "toformula", "defining formula over addition");
    tf->add_option("--set", form_state->set, "semilinear set JSON")->required();
    tf->add_option("--out", form_state->out, "output path");
    tf->callback([form_state] {
      SemilinearSet s = semilinear_from_json(read_json(form_state->set));
      emit_line(form_state->out, format_formula(to_formula(s)));
    });
  }

  // eq ---------------------------------------------------------------------------
  {
    CLI::App* eq = sub(app, "eq", "equivalence-structure classification and auditing");
    eq->require_subcommand(1);

    auto classify_state = std::make_shared<EqClassifyCmd>();
    CLI::App* cl = sub(*eq, "classify", "descriptor of the kernel of a definable function");
    cl->add_option("--fiber", classify_state->fiber, "function-graph JSON")->required();
    cl->add_option("--out", classify_state->out, "output path");
    cl->callback([classify_state] {
      FiberSpec spec = fiber_spec_from_json(read_json(classify_state->fiber));
      emit(classify_state->out, descriptor_to_json(classify(spec)));
    });

    auto build_state = std::make_shared<EqBuildCmd>();
    CLI::App* bd = sub(*eq, "build", "descriptor from a counting function over simple chambers");
    bd->add_option("--gvpf", build_state->gvpf, "generalized vector partition function JSON")->required();
    bd->add_option("--chambers", build_state->chambers, "semilinear chamber decomposition JSON")->required();
    bd->add_option("--polys", build_state->polys, "array of polynomial JSON, one per chamber")->required();
    bd->add_option("--out", build_state->out, "output path");
    bd->callback([build_state] {
      GeneralizedVpf g = gvpf_from_json(read_json(build_state->gvpf));
      SemilinearSet chambers = semilinear_from_json(read_json(build_state->chambers));
      Json jp = read_json(build_state->polys);
      if (!jp.is_array()) throw error("expected an array of polynomials");
      std::vector<Polynomial> polys;
      for (const Json& e : jp) polys.push_back(poly_from_json(e));
      emit(build_state->out, descriptor_to_json(gvpf_to_descriptor(g, chambers, polys)));
    });

    auto check_state = std::make_shared<EqCheckCmd>();
    CLI::App* ck = sub(*eq, "check", "audit a presentation against a descriptor");
    ck->add_option("--presentation", check_state->presentation, "presentation JSON with relation \"~\"")->required();
    ck->add_option("--descriptor", check_state->descriptor, "descriptor JSON")->required();
    ck->add_option("--bound", check_state->bound, "word-length bound of the survey");
    ck->add_option("--out", check_state->out, "output path");
    ck->callback([check_state] {
      Presentation p = presentation_from_json(read_json(check_state->presentation));
      EqDescriptor d = descriptor_from_json(read_json(check_state->descriptor));
      emit(check_state->out, check_report_to_json(check(p, d, check_state->bound)));
    });

    auto multi_state = std::make_shared<EqCheckCmd>();
    CLI::App* ms = sub(*eq, "multiset", "survey class sizes among bounded-length words");
    ms->add_option("--presentation", multi_state->presentation, "presentation JSON with relation \"~\"")->required();
    ms->add_option("--bound", multi_state->bound, "word-length bound of the survey");
    ms->add_option("--out", multi_state->out, "output path");
    ms->callback([multi_state] {
      Presentation p = presentation_from_json(read_json(multi_state->presentation));
      emit(multi_state->out, multiset_to_json(empirical_multiset(p, multi_state->bound)));
    });

    auto count_state2 = std::make_shared<EqCountCmd>();
    CLI::App* ct = sub(*eq, "count", "number of classes of one size under a descriptor");
    ct->add_option("--descriptor", count_state2->descriptor, "descriptor JSON")->required();
    ct->add_option("--size", count_state2->size, "class size")->required();
    ct->add_option("--out", count_state2->out, "output path");
    ct->callback([count_state2] {
      EqDescriptor d = descriptor_from_json(read_json(count_state2->descriptor));
      std::optional<mpz_class> c = class_count(d, count_state2->size);
      emit(count_state2->out, c ? json_of_mpz(*c) : Json("omega"));
    });
  }

  // reach -------------------------------------------------------------------------
  auto reach_state = std::make_shared<ReachCmd>();
  {
    CLI::App* cmd = sub(app, "reach", "iterated images of seed elements under a step formula");
    cmd->add_option("--presentation", reach_state->presentation, "presentation JSON")->required();
    reach_state->formula.attach(cmd);
    cmd->add_option("--input", reach_state->input, "source variable of the step formula");
    cmd->add_option("--output", reach_state->output_var, "target variable of the step formula");
    cmd->add_option("--seed", reach_state->seeds, "seed word (repeatable; empty word by default)");
    cmd->add_option("--steps", reach_state->steps, "number of steps")->required();
    cmd->add_option("--out", reach_state->out, "output path");
    cmd->callback([reach_state] {
      Presentation p = presentation_from_json(read_json(reach_state->presentation));
      std::vector<Word> seeds;
      if (reach_state->seeds.empty()) seeds.push_back(Word{});
      for (const std::string& s : reach_state->seeds) seeds.push_back(word_from_text(p.base(), s));
      FormulaPtr phi = parse_formula(reach_state->formula.get());
      ReachSet r = reach(p, phi, {reach_state->input}, reach_state->output_var, seeds, reach_state->steps);
      note("final size " + (r.sizes.back() ? r.sizes.back()->get_str() : std::string("inf")));
      emit(reach_state->out, reach_to_json(r));
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const std::exception& e) {
    Json err;
    err["error"] = std::string(e.what());
    std::cerr << err.dump() << "\n";
    return 1;
  }
  return 0;
}
