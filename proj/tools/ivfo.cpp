// ivfo: command-line front end.
//
//   ivfo kernelize rep.txt --d 2 [--k-work 16] [--paranoid] [--out kernel.txt]
//   ivfo modelcheck rep.txt sentence.txt [--no-kernel]
//   ivfo cw build rep.txt | ivfo cw eval expr.txt
//   ivfo gadget fo graph.txt [--eps 1/2] | ivfo gadget mso graph.txt [--out prefix]
//   ivfo hardfamily --q 1.41421356237309 --n 5
//   ivfo ef equiv a.txt b.txt --d 2 | ivfo ef tree a.txt --d 2
//   ivfo validate rep.txt
//
// Exit codes: 0 success, 1 error, 2 kernel finished without its guarantee.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ivfo/cliquewidth.hpp"
#include "ivfo/ef_games.hpp"
#include "ivfo/interpret.hpp"
#include "ivfo/io.hpp"
#include "ivfo/kernel.hpp"
#include "ivfo/logic/parser.hpp"

namespace {

using namespace ivfo;

struct RunConfig {
  std::string tol = to_string(default_tolerance());
  std::size_t k_work = 16;
  std::size_t k_ceiling = 256;
  double type_work = 5e7;
  std::size_t set_domain_cap = logic::kDefaultSetDomainCap;
  bool paranoid = false;
  std::uint64_t seed = 1;
  std::string out;

  Rational tolerance() const { return parse_rational(tol); }
  KernelOptions kernel() const {
    KernelOptions k;
    k.k_work = k_work;
    k.k_ceiling = k_ceiling;
    k.paranoid = paranoid;
    k.max_type_work = type_work;
    k.tol = tolerance();
    return k;
  }
  std::string to_text() const {
    std::ostringstream o;
    o << "config tol=" << tol << " k_work=" << k_work << " k_ceiling=" << k_ceiling << " type_work=" << type_work
      << " set_cap=" << set_domain_cap << " paranoid=" << (paranoid ? 1 : 0) << " seed=" << seed << "\n";
    return o.str();
  }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

template <class F>
auto in_file(const std::string& path, F&& f) {
  try {
    return f(slurp(path));
  } catch (const ParseError& e) {
    throw Error(path + ":" + e.what());
  }
}

IntervalRep read_rep(const std::string& path) {
  return in_file(path, [](const std::string& t) { return parse_rep(t); });
}
Graph read_graph(const std::string& path) {
  return in_file(path, [](const std::string& t) { return parse_graph(t); });
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
}

// Main result goes to --out when given, else to stdout.
void emit(const RunConfig& cfg, const std::string& text) {
  if (cfg.out.empty())
    std::cout << text;
  else
    write_text(cfg.out, text);
}

std::string closure_name(logic::Closure c) { return c == logic::Closure::TransitiveSymmetric ? "transitive_symmetric" : "none"; }

void emit_gadget(const RunConfig& cfg, const GadgetOutput& g) {
  std::string rep = format_rep(g.rep);
  std::string vertex = logic::to_string(g.interp.vertex_formula) + "\n";
  std::string edge = logic::to_string(g.interp.edge_formula) + "\n";
  std::string map;
  for (const auto& [from, to] : g.canonical_map) map += "canon " + from + " -> " + to + "\n";
  std::string derived;
  for (const auto& d : g.interp.derived_relations)
    derived += "relation " + d.name + " " + d.x + " " + d.y + " closure=" + closure_name(d.closure) + "\n" +
               logic::to_string(d.base) + "\n";
  if (cfg.out.empty()) {
    std::cout << "# representation\n" << rep << "# vertex formula\n# " << vertex << "# edge formula\n# " << edge;
    if (!derived.empty()) {
      std::istringstream in(derived);
      for (std::string line; std::getline(in, line);) std::cout << "# " << line << "\n";
    }
    std::istringstream in(map);
    for (std::string line; std::getline(in, line);) std::cout << "# " << line << "\n";
    return;
  }
  write_text(cfg.out + ".rep", rep);
  write_text(cfg.out + ".vertex", vertex);
  write_text(cfg.out + ".edge", edge);
  write_text(cfg.out + ".map", map);
  if (!derived.empty()) write_text(cfg.out + ".derived", derived);
  std::cout << "wrote " << cfg.out << ".{rep,vertex,edge,map" << (derived.empty() ? "" : ",derived") << "} with "
            << g.rep.size() << " intervals\n";
}

std::string format_tree(const ef::EfTree& t) {
  std::ostringstream o;
  o << "depth " << t.depth << " nodes " << t.nodes.size() << " leaves " << t.leaf_count() << "\n";
  for (std::size_t u = 0; u < t.nodes.size(); ++u) {
    const auto& n = t.nodes[u];
    o << "node " << u << " parent " << n.parent << " depth " << n.depth;
    if (n.parent >= 0) o << " element " << n.element;
    if (t.is_leaf(static_cast<int>(u))) o << " type " << n.leaf_type;
    o << "\n";
  }
  return o.str();
}

int run(int argc, char** argv) {
  CLI::App app{"interval graphs, first-order logic, kernels and gadgets"};
  app.require_subcommand(1);
  app.fallthrough();
  RunConfig cfg;
  app.add_option("--tol", cfg.tol, "tolerance for approximate length comparisons")->capture_default_str();
  app.add_option("--k-work", cfg.k_work, "initial per-window retention bound")->capture_default_str();
  app.add_flag("--paranoid", cfg.paranoid, "certify removals on the graphs as well");
  app.add_option("--seed", cfg.seed, "seed recorded in reports")->capture_default_str();
  app.add_option("--out", cfg.out, "output file (or prefix for gadget files)");

  int d = 1;
  bool no_kernel = false;
  std::string file_a, file_b, eps = "1/2", q = "1.41421356237309", labels = "classes";
  int n = 4;
  int code = 0;

  auto* kern = app.add_subcommand("kernelize", "shrink a representation while keeping its rank-d theory");
  kern->add_option("rep", file_a)->required();
  kern->add_option("--d", d, "quantifier rank")->required();
  kern->callback([&] {
    auto rep = read_rep(file_a);
    auto res = kernelize(rep, d, cfg.kernel());
    std::string report = cfg.to_text() + res.report.to_text(rep.lengths);
    if (cfg.out.empty()) {
      std::cout << format_rep(res.rep);
      std::cerr << report;
    } else {
      write_text(cfg.out, format_rep(res.rep));
      std::cout << report;
    }
    if (!res.report.guarantee_met) code = 2;
  });

  auto* mc = app.add_subcommand("modelcheck", "decide a first-order sentence on a representation");
  mc->add_option("rep", file_a)->required();
  mc->add_option("sentence", file_b)->required();
  mc->add_flag("--no-kernel", no_kernel, "evaluate on the input graph directly");
  mc->callback([&] {
    auto rep = read_rep(file_a);
    auto f = in_file(file_b, [](const std::string& t) { return logic::parse_formula(t, logic::Dialect::MSO1); });
    ModelCheckOptions opt;
    opt.use_kernel = !no_kernel;
    opt.kernel = cfg.kernel();
    opt.eval.set_domain_cap = cfg.set_domain_cap;
    auto r = modelcheck_report(rep, f, opt);
    std::cout << (r.value ? "true" : "false") << "\n" << cfg.to_text() << "rank " << r.rank << "\nevaluated_vertices "
              << r.evaluated_vertices << "\n";
    if (r.report) std::cout << r.report->to_text(rep.lengths);
    if (r.report && !r.report->guarantee_met) code = 2;
  });

  auto* cw = app.add_subcommand("cw", "clique-width expressions");
  cw->require_subcommand(1);
  auto* cw_build = cw->add_subcommand("build", "expression for a representation with rational lengths");
  cw_build->add_option("rep", file_a)->required();
  cw_build->add_option("--labels", labels, "classes or leftend")->check(CLI::IsMember({"classes", "leftend"}));
  cw_build->callback([&] {
    auto rep = read_rep(file_a);
    auto e = cw::build_cw_expression(rep, labels == "leftend" ? cw::Lemma1Labels::LeftEnd : cw::Lemma1Labels::Classes,
                                     cfg.tolerance());
    emit(cfg, cw::to_string(e) + "\n");
    auto b = cw::lemma1_bound(rep);
    std::cerr << "labels " << e.labels_used() << " bound " << b.bound << "\n";
  });
  auto* cw_eval = cw->add_subcommand("eval", "graph of an expression");
  cw_eval->add_option("expr", file_a)->required();
  cw_eval->callback([&] {
    auto e = in_file(file_a, [](const std::string& t) { return cw::parse_cw_expression(t); });
    emit(cfg, format_graph(cw::eval_cw_expression(e).graph));
  });

  auto* gad = app.add_subcommand("gadget", "interpretation gadgets");
  gad->require_subcommand(1);
  auto* gad_fo = gad->add_subcommand("fo", "graph -> interval graph with lengths in [1, 1+eps]");
  gad_fo->add_option("graph", file_a)->required();
  gad_fo->add_option("--eps", eps, "length slack")->capture_default_str();
  gad_fo->callback([&] { emit_gadget(cfg, gadget_fo(read_graph(file_a), parse_rational(eps))); });
  auto* gad_mso = gad->add_subcommand("mso", "graph -> unit interval graph");
  gad_mso->add_option("graph", file_a)->required();
  gad_mso->callback([&] { emit_gadget(cfg, gadget_mso(read_graph(file_a))); });

  auto* hard = app.add_subcommand("hardfamily", "({1,q}, q+3) representations with n^2 vertices");
  hard->add_option("--q", q, "irrational length, as a decimal")->capture_default_str();
  hard->add_option("--n", n, "number of levels")->capture_default_str();
  hard->callback([&] {
    auto h = cw::hard_family(parse_rational(q), n, cfg.tolerance());
    emit(cfg, format_rep(h.rep));
  });

  auto* ef = app.add_subcommand("ef", "Ehrenfeucht-Fraisse machinery on graphs");
  ef->require_subcommand(1);
  auto* ef_eq = ef->add_subcommand("equiv", "rank-d equivalence of two graphs");
  ef_eq->add_option("a", file_a)->required();
  ef_eq->add_option("b", file_b)->required();
  ef_eq->add_option("--d", d, "rank")->required();
  ef_eq->callback([&] {
    auto a = logic::RelStructure::from_graph(read_graph(file_a));
    auto b = logic::RelStructure::from_graph(read_graph(file_b));
    std::cout << (ef::equivalent_rank_d(a, b, d) ? "equivalent" : "not equivalent") << "\n";
  });
  auto* ef_tree = ef->add_subcommand("tree", "minimized d-EF-tree of a graph");
  ef_tree->add_option("a", file_a)->required();
  ef_tree->add_option("--d", d, "depth")->required();
  ef_tree->callback([&] {
    auto s = logic::RelStructure::from_graph(read_graph(file_a));
    emit(cfg, format_tree(ef::minimize_ef_tree(ef::build_ef_tree(s, d))));
  });

  auto* val = app.add_subcommand("validate", "check a representation file");
  val->add_option("rep", file_a)->required();
  val->callback([&] {
    auto rep = read_rep(file_a);
    auto g = build_graph(rep, cfg.tolerance());
    std::cout << "valid " << rep.size() << " vertices " << g.edge_count() << " edges\n";
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ivfo::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
