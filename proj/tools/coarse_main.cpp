#include <algorithm>
#include <fstream>
#include <iostream>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "coarse/common.hpp"
#include "coarse/constructions.hpp"
#include "coarse/cover.hpp"
#include "coarse/graph.hpp"
#include "coarse/group.hpp"
#include "coarse/io.hpp"
#include "coarse/measures.hpp"
#include "coarse/metric_space.hpp"
#include "coarse/pou.hpp"

namespace {

using coarse::Report;
using nlohmann::json;

struct GlobalOpts {
  std::string format = "text";
  double tol = 1e-9;
  std::uint64_t seed = 0;
};

json rational_json(const coarse::Rational& r) { return json(coarse::to_string(r)); }

std::string render_value(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

// One "key = value" line per result, keys alphabetical, then the
// certificate status.
int emit(const Report& rep, const GlobalOpts& g) {
  const json as_json = coarse::report_to_json(rep);
  if (coarse::report_from_json(as_json).certificate != rep.certificate) {
    throw coarse::internal_inconsistency_error("report does not round-trip");
  }
  if (g.format == "json") {
    std::cout << as_json.dump(2) << "\n";
  } else {
    std::cout << rep.op << "\n";
    for (const auto& [key, value] : rep.results.items()) {
      std::cout << key << " = " << render_value(value) << "\n";
    }
    std::cout << "certificate: " << rep.certificate << "\n";
    if (!rep.violated.empty()) std::cout << "violated: " << rep.violated << "\n";
  }
  return rep.certificate == "fails" ? 1 : 0;
}

void warn_all(const std::vector<std::string>& warnings) {
  for (const std::string& w : warnings) std::cerr << "warning: " << w << "\n";
}

coarse::FiniteMetricSpace load_space_file(const std::string& path) {
  std::vector<std::string> warnings;
  coarse::FiniteMetricSpace X = coarse::parse_space(coarse::load_json_file(path), &warnings);
  warn_all(warnings);
  return X;
}

coarse::Graph load_graph_file(const std::string& path) {
  return coarse::parse_graph(coarse::load_json_file(path));
}

// Subcommands that work on a metric space accept either a space file or a
// graph file carrying its shortest-path metric.
coarse::FiniteMetricSpace load_metric(const std::string& space_path,
                                      const std::string& graph_path) {
  if (space_path.empty() == graph_path.empty()) {
    throw coarse::validation_error("give exactly one of --space and --graph");
  }
  if (!space_path.empty()) return load_space_file(space_path);
  return coarse::graph_metric(load_graph_file(graph_path));
}

coarse::FiniteGroup load_group_file(const std::string& path) {
  std::vector<std::string> warnings;
  coarse::FiniteGroup G = coarse::parse_group(coarse::load_json_file(path), &warnings);
  warn_all(warnings);
  return G;
}

std::vector<std::size_t> sorted_unique(std::vector<std::size_t> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw coarse::validation_error("cannot write " + path);
  out << j.dump(2) << "\n";
}

struct MetricInputs {
  std::string space;
  std::string graph;

  void add_to(CLI::App* sub) {
    sub->add_option("--space", space, "metric space JSON file");
    sub->add_option("--graph", graph, "graph JSON file, used through its path metric");
  }
  json echo() const {
    json j = json::object();
    if (!space.empty()) j["space"] = space;
    if (!graph.empty()) j["graph"] = graph;
    return j;
  }
};

void add_cheeger(CLI::App& app, const GlobalOpts& g, int& rc) {
  struct Opts {
    std::string graph;
    std::size_t cap = 22;
    bool sweep = false;
    std::optional<double> eps;
    std::optional<std::size_t> k;
  };
  auto o = std::make_shared<Opts>();
  CLI::App* sub = app.add_subcommand("cheeger", "edge-boundary isoperimetric constant");
  sub->add_option("--graph", o->graph)->required();
  sub->add_option("--cap", o->cap, "largest vertex count solved exactly");
  sub->add_flag("--sweep", o->sweep, "force the BFS-sweep upper bound");
  sub->add_option("--eps", o->eps, "certify h >= eps");
  sub->add_option("--k", o->k, "degree bound for the expander certificate");
  sub->callback([o, &g, &rc] {
    coarse::set_tolerance(g.tol);
    const coarse::Graph G = load_graph_file(o->graph);
    const coarse::CheegerResult res = (o->sweep || G.n > o->cap)
                                          ? coarse::cheeger_sweep(G)
                                          : coarse::cheeger_constant(G, o->cap);
    Report rep;
    rep.op = "cheeger";
    rep.inputs = {{"graph", o->graph}, {"cap", o->cap}, {"sweep", o->sweep}};
    rep.results = {{"h", rational_json(res.h)},
                   {"h_value", coarse::to_double(res.h)},
                   {"A", res.argmin},
                   {"exact", res.exact}};
    rep.certificate = "not-applicable";
    if (o->eps) {
      rep.inputs["eps"] = *o->eps;
      const std::size_t k = o->k ? *o->k : coarse::max_degree(G);
      rep.inputs["k"] = k;
      const bool ok = coarse::expander_check(G, k, *o->eps);
      rep.certificate = ok ? "holds" : "fails";
      if (!ok) rep.violated = "max degree <= k and h >= eps";
    }
    rc = emit(rep, g);
  });
}

void add_girth(CLI::App& app, const GlobalOpts& g, int& rc) {
  auto path = std::make_shared<std::string>();
  CLI::App* sub = app.add_subcommand("girth", "shortest cycle length");
  sub->add_option("--graph", *path)->required();
  sub->callback([path, &g, &rc] {
    coarse::set_tolerance(g.tol);
    const coarse::Graph G = load_graph_file(*path);
    Report rep;
    rep.op = "girth";
    rep.inputs = {{"graph", *path}};
    rep.results = {{"girth", coarse::real_to_json(coarse::girth(G))}};
    rep.certificate = "not-applicable";
    rc = emit(rep, g);
  });
}

void add_halo(CLI::App& app, const GlobalOpts& g, int& rc) {
  struct Opts {
    MetricInputs in;
    std::vector<std::size_t> set;
    std::optional<std::size_t> max_size;
    std::optional<double> max_diam;
    std::size_t samples = 100000;
  };
  auto o = std::make_shared<Opts>();
  CLI::App* sub = app.add_subcommand("halo", "outside points within distance 2 of a set");
  o->in.add_to(sub);
  sub->add_option("--set", o->set, "evaluate one subset")->delimiter(',');
  sub->add_option("--max-size", o->max_size, "search subsets up to this size");
  sub->add_option("--max-diam", o->max_diam, "search subsets up to this diameter");
  sub->add_option("--samples", o->samples);
  sub->callback([o, &g, &rc] {
    coarse::set_tolerance(g.tol);
    const coarse::FiniteMetricSpace X = load_metric(o->in.space, o->in.graph);
    const int modes = static_cast<int>(!o->set.empty()) + static_cast<int>(o->max_size.has_value()) +
                      static_cast<int>(o->max_diam.has_value());
    if (modes != 1) {
      throw coarse::validation_error("give exactly one of --set, --max-size, --max-diam");
    }
    Report rep;
    rep.op = "halo";
    rep.inputs = o->in.echo();
    if (!o->set.empty()) {
      const std::vector<std::size_t> A = sorted_unique(o->set);
      rep.inputs["set"] = A;
      const std::vector<std::size_t> H = coarse::halo(X, A);
      rep.results = {{"halo", H},
                     {"halo_size", H.size()},
                     {"set_size", A.size()}};
      rep.certificate = H.size() >= A.size() ? "holds" : "fails";
      if (rep.certificate == "fails") rep.violated = "|halo(A)| >= |A|";
    } else {
      coarse::HaloSearchResult res =
          o->max_size ? coarse::halo_ratio_search(X, *o->max_size, g.seed, o->samples)
                      : coarse::halo_ratio_search_diameter(X, *o->max_diam, g.seed, o->samples);
      if (o->max_size) rep.inputs["max_size"] = *o->max_size;
      if (o->max_diam) rep.inputs["max_diam"] = *o->max_diam;
      rep.inputs["samples"] = o->samples;
      rep.inputs["seed"] = g.seed;
      rep.results = {{"min_ratio", rational_json(res.min_ratio)},
                     {"min_ratio_value", coarse::to_double(res.min_ratio)},
                     {"argmin", res.argmin},
                     {"exhaustive", res.exhaustive}};
      const bool ok = !(res.min_ratio < coarse::make_rational(1, 1));
      rep.certificate = ok ? "holds" : "fails";
      if (!ok) rep.violated = "|halo(A)| >= |A| for every checked A";
    }
    rc = emit(rep, g);
  });
}

void add_amenability(CLI::App& app, const GlobalOpts& g, int& rc) {
  struct Opts {
    MetricInputs in;
    std::string cover;
    double r = 0.0, s = 0.0;
    std::optional<double> eps;
  };
  auto o = std::make_shared<Opts>();
  CLI::App* sub = app.add_subcommand("amenability", "horizon ratios at two scales");
  o->in.add_to(sub);
  sub->add_option("--cover", o->cover)->required();
  sub->add_option("--r", o->r)->required();
  sub->add_option("--s", o->s)->required();
  sub->add_option("--eps", o->eps, "certify min ratio > 1 - eps");
  sub->callback([o, &g, &rc] {
    coarse::set_tolerance(g.tol);
    const coarse::FiniteMetricSpace X = load_metric(o->in.space, o->in.graph);
    const coarse::Cover U = coarse::parse_cover(coarse::load_json_file(o->cover), X);
    const coarse::AmenabilityReport res = coarse::horizon_ratio(X, U, o->r, o->s);
    Report rep;
    rep.op = "amenability";
    rep.inputs = o->in.echo();
    rep.inputs["cover"] = o->cover;
    rep.inputs["r"] = o->r;
    rep.inputs["s"] = o->s;
    json sizes = json::array();
    for (const auto& [small, large] : res.horizon_sizes) {
      sizes.push_back(json::array({small, large}));
    }
    rep.results = {{"min_ratio", res.min_ratio},
                   {"worst_point", res.worst_point},
                   {"horizon_sizes", std::move(sizes)}};
    rep.certificate = "not-applicable";
    if (o->eps) {
      rep.inputs["eps"] = *o->eps;
      const bool ok = coarse::gt(res.min_ratio, 1.0 - *o->eps);
      rep.certificate = ok ? "holds" : "fails";
      if (!ok) rep.violated = "min horizon ratio > 1 - eps";
    }
    rc = emit(rep, g);
  });
}

void add_double_count(CLI::App& app, const GlobalOpts& g, int& rc) {
  struct Opts {
    std::string graph;
    std::string cover;
  };
  auto o = std::make_shared<Opts>();
  CLI::App* sub = app.add_subcommand("double-count", "halo pair counting identity and bound");
  sub->add_option("--graph", o->graph)->required();
  sub->add_option("--cover", o->cover)->required();
  sub->callback([o, &g, &rc] {
    coarse::set_tolerance(g.tol);
    const coarse::Graph G = load_graph_file(o->graph);
    const coarse::FiniteMetricSpace X = coarse::graph_metric(G);
    const coarse::Cover U = coarse::parse_cover(coarse::load_json_file(o->cover), X);
    const coarse::DoubleCountResult res = coarse::double_counting_check(G, U);
    Report rep;
    rep.op = "double-count";
    rep.inputs = {{"graph", o->graph}, {"cover", o->cover}};
    rep.results = {{"lhs", res.lhs},
                   {"rhs", res.rhs},
                   {"p_min", rational_json(res.p_min)},
                   {"p_argmin", res.p_argmin},
                   {"c_min", rational_json(res.c_min)},
                   {"c_argmin", res.c_argmin},
                   {"vacuous", res.vacuous}};
    const bool ok = res.lhs == res.rhs && (res.vacuous || res.bound_ok);
    rep.certificate = ok ? "holds" : "fails";
    if (!ok) rep.violated = "pair count identity and p_min <= 1/(1+c_min)";
    rc = emit(rep, g);
  });
}

void add_levin(CLI::App& app, const GlobalOpts& g, int& rc) {
  struct Opts {
    MetricInputs in;
    double r = 0.0;
    std::vector<std::size_t> base;
  };
  auto o = std::make_shared<Opts>();
  CLI::App* sub = app.add_subcommand("levin", "greedy ball cover and its barycentric partition");
  o->in.add_to(sub);
  sub->add_option("--r", o->r)->required();
  sub->add_option("--base", o->base, "base sequence, default all points in order")
      ->delimiter(',');
  sub->callback([o, &g, &rc] {
    coarse::set_tolerance(g.tol);
    const coarse::FiniteMetricSpace X = load_metric(o->in.space, o->in.graph);
    std::vector<std::size_t> base = o->base;
    if (base.empty()) {
      base.resize(X.n);
      std::iota(base.begin(), base.end(), 0);
    }
    const coarse::GreedyBallResult res = coarse::greedy_ball_pou(X, base, o->r);
    const coarse::PoUMetrics metrics = coarse::pou_metrics(X, res.pou);
    Report rep;
    rep.op = "levin";
    rep.inputs = o->in.echo();
    rep.inputs["r"] = o->r;
    rep.inputs["base"] = base;
    rep.results = {{"cover", coarse::cover_to_json(res.cover)},
                   {"pou", coarse::pou_to_json(res.pou)},
                   {"coboundedness", metrics.coboundedness},
                   {"lebesgue", coarse::real_to_json(metrics.lebesgue)}};
    rep.certificate = "holds";
    rc = emit(rep, g);
  });
}

void add_round(CLI::App& app, const GlobalOpts& g, int& rc) {
  struct Opts {
    MetricInputs in;
    std::string pou;
    long long m = 0;
    double eps = 0.0;
    std::optional<std::size_t> n;
  };
  auto o = std::make_shared<Opts>();
  CLI::App* sub = app.add_subcommand("round", "integer rounding at denominator m");
  o->in.add_to(sub);
  sub->add_option("--pou", o->pou)->required();
  sub->add_option("--m", o->m)->required();
  sub->add_option("--eps", o->eps)->required();
  sub->add_option("--n", o->n, "dimension bound, default max carrier size - 1");
  sub->callback([o, &g, &rc] {
    coarse::set_tolerance(g.tol);
    const coarse::FiniteMetricSpace X = load_metric(o->in.space, o->in.graph);
    const coarse::PartitionOfUnity f = coarse::parse_pou(coarse::load_json_file(o->pou), X);
    std::size_t n = 0;
    if (o->n) {
      n = *o->n;
    } else {
      for (const coarse::SparseVec& v : f.values) {
        n = std::max(n, v.entries.empty() ? std::size_t{0} : v.entries.size() - 1);
      }
    }
    const coarse::RoundingResult res =
        coarse::round_to_barycentric(X, f, coarse::RoundingParams{n, o->m, o->eps});
    Report rep;
    rep.op = "round";
    rep.inputs = o->in.echo();
    rep.inputs["pou"] = o->pou;
    rep.inputs["m"] = o->m;
    rep.inputs["eps"] = o->eps;
    rep.inputs["n"] = n;
    rep.results = {{"h", coarse::pou_to_json(res.h)},
                   {"distance_bound", (2.0 * static_cast<double>(n) + 2.0) /
                                          static_cast<double>(o->m)},
                   {"expansion_labels", res.expansion.pou.labels.size()}};
    rep.certificate = "holds";
    rc = emit(rep, g);
  });
}

void add_average(CLI::App& app, const GlobalOpts& g, int& rc) {
  struct Opts {
    MetricInputs in;
    std::string pou;
    std::string cover;
    double eps = 0.0;
    std::optional<double> M;
  };
  auto o = std::make_shared<Opts>();
  CLI::App* sub = app.add_subcommand("average", "average a partition over nearby elements");
  o->in.add_to(sub);
  sub->add_option("--pou", o->pou)->required();
  sub->add_option("--cover", o->cover)->required();
  sub->add_option("--eps", o->eps)->required();
  sub->add_option("--M", o->M, "reach bound, default family diameter + 1/eps");
  sub->callback([o, &g, &rc] {
    coarse::set_tolerance(g.tol);
    const coarse::FiniteMetricSpace X = load_metric(o->in.space, o->in.graph);
    const coarse::PartitionOfUnity f = coarse::parse_pou(coarse::load_json_file(o->pou), X);
    const coarse::Cover U = coarse::parse_cover(coarse::load_json_file(o->cover), X);
    const coarse::PartitionOfUnity out =
        coarse::average_pou(X, f, U, o->eps, std::nullopt,
                            o->M ? std::optional<double>(*o->M) : std::nullopt);
    const coarse::PoUMetrics metrics = coarse::pou_metrics(X, out);
    Report rep;
    rep.op = "average";
    rep.inputs = o->in.echo();
    rep.inputs["pou"] = o->pou;
    rep.inputs["cover"] = o->cover;
    rep.inputs["eps"] = o->eps;
    if (o->M) rep.inputs["M"] = *o->M;
    rep.results = {{"pou", coarse::pou_to_json(out)},
                   {"lebesgue", coarse::real_to_json(metrics.lebesgue)},
                   {"lebesgue_floor", 1.0 / o->eps}};
    rep.certificate = "holds";
    rc = emit(rep, g);
  });
}

void add_cover_to_pou(CLI::App& app, const GlobalOpts& g, int& rc) {
  struct Opts {
    MetricInputs in;
    std::string cover;
    double r = 0.0;
    double mu = 0.0;
    std::optional<double> eps;
  };
  auto o = std::make_shared<Opts>();
  CLI::App* sub = app.add_subcommand("cover-to-pou", "barycentric partition over ball horizons");
  o->in.add_to(sub);
  sub->add_option("--cover", o->cover)->required();
  sub->add_option("--r", o->r)->required();
  sub->add_option("--mu", o->mu)->required();
  sub->add_option("--eps", o->eps, "also certify the (eps,eps)-Lipschitz estimate");
  sub->callback([o, &g, &rc] {
    coarse::set_tolerance(g.tol);
    const coarse::FiniteMetricSpace X = load_metric(o->in.space, o->in.graph);
    const coarse::Cover U = coarse::parse_cover(coarse::load_json_file(o->cover), X);
    const coarse::PartitionOfUnity out = coarse::amenable_cover_to_pou(
        X, U, o->r, o->mu, o->eps ? std::optional<double>(*o->eps) : std::nullopt);
    const coarse::PoUMetrics metrics = coarse::pou_metrics(X, out);
    Report rep;
    rep.op = "cover-to-pou";
    rep.inputs = o->in.echo();
    rep.inputs["cover"] = o->cover;
    rep.inputs["r"] = o->r;
    rep.inputs["mu"] = o->mu;
    if (o->eps) rep.inputs["eps"] = *o->eps;
    rep.results = {{"pou", coarse::pou_to_json(out)},
                   {"lebesgue", coarse::real_to_json(metrics.lebesgue)},
                   {"lipschitz", metrics.lipschitz_number}};
    rep.certificate = "holds";
    rc = emit(rep, g);
  });
}

void add_property_a(CLI::App& app, const GlobalOpts& g, int& rc) {
  struct Opts {
    MetricInputs in;
    std::string direction;
    std::string pou;
    std::string witness;
    double R = 0.0;
    double eps = 0.0;
  };
  auto o = std::make_shared<Opts>();
  CLI::App* sub = app.add_subcommand("property-a", "convert between partitions and witnesses");
  o->in.add_to(sub);
  sub->add_option("--direction", o->direction)
      ->required()
      ->check(CLI::IsMember({"to-witness", "from-witness"}));
  sub->add_option("--pou", o->pou);
  sub->add_option("--witness", o->witness);
  sub->add_option("--R", o->R, "scale, to-witness only");
  sub->add_option("--eps", o->eps)->required();
  sub->callback([o, &g, &rc] {
    coarse::set_tolerance(g.tol);
    const coarse::FiniteMetricSpace X = load_metric(o->in.space, o->in.graph);
    Report rep;
    rep.op = "property-a";
    rep.inputs = o->in.echo();
    rep.inputs["direction"] = o->direction;
    rep.inputs["eps"] = o->eps;
    if (o->direction == "to-witness") {
      if (o->pou.empty()) throw coarse::validation_error("to-witness needs --pou");
      if (!(o->R > 0.0)) throw coarse::validation_error("to-witness needs --R > 0");
      const coarse::PartitionOfUnity f = coarse::parse_pou(coarse::load_json_file(o->pou), X);
      rep.inputs["pou"] = o->pou;
      rep.inputs["R"] = o->R;
      const coarse::PropertyAWitness W = coarse::pou_to_witness(X, f, o->R, o->eps);
      rep.results = {{"witness", coarse::witness_to_json(W)},
                     {"S_bound", coarse::real_to_json(W.S_bound)},
                     {"eps_bar", std::min(o->eps, 0.5) / (o->R + 1.0)}};
    } else {
      if (o->witness.empty()) throw coarse::validation_error("from-witness needs --witness");
      const coarse::PropertyAWitness W =
          coarse::parse_witness(coarse::load_json_file(o->witness), X);
      rep.inputs["witness"] = o->witness;
      const coarse::PartitionOfUnity f = coarse::witness_to_pou(X, W, o->eps);
      const coarse::PoUMetrics metrics = coarse::pou_metrics(X, f);
      rep.results = {{"pou", coarse::pou_to_json(f)},
                     {"coboundedness", metrics.coboundedness},
                     {"lipschitz", metrics.lipschitz_number}};
    }
    rep.certificate = "holds";
    rc = emit(rep, g);
  });
}

void add_folner(CLI::App& app, const GlobalOpts& g, int& rc) {
  struct Opts {
    std::string group;
    std::vector<std::size_t> set;
    std::optional<double> eps;
  };
  auto o = std::make_shared<Opts>();
  CLI::App* sub = app.add_subcommand("folner", "translate difference ratios of a candidate set");
  sub->add_option("--group", o->group)->required();
  sub->add_option("--set", o->set)->required()->delimiter(',');
  sub->add_option("--eps", o->eps, "certify max ratio <= eps");
  sub->callback([o, &g, &rc] {
    coarse::set_tolerance(g.tol);
    const coarse::FiniteGroup G = load_group_file(o->group);
    const std::vector<std::size_t> F = sorted_unique(o->set);
    const coarse::FolnerResult res = coarse::folner_analysis(G, F);
    Report rep;
    rep.op = "folner";
    rep.inputs = {{"group", o->group}, {"set", F}};
    rep.results = {{"max_gen_ratio", rational_json(res.max_gen_ratio)},
                   {"max_gen_ratio_value", coarse::to_double(res.max_gen_ratio)},
                   {"phi_lipschitz", res.phi_lipschitz}};
    rep.certificate = "not-applicable";
    if (o->eps) {
      rep.inputs["eps"] = *o->eps;
      const bool ok = coarse::le(coarse::to_double(res.max_gen_ratio), *o->eps);
      rep.certificate = ok ? "holds" : "fails";
      if (!ok) rep.violated = "max generator ratio <= eps";
    }
    rc = emit(rep, g);
  });
}

void add_product_group(CLI::App& app, const GlobalOpts& g, int& rc) {
  struct Opts {
    std::string group;
    std::size_t n = 1;
    std::optional<std::size_t> claim_M;
    std::size_t table_cap = 4096;
    std::size_t samples = 10000;
  };
  auto o = std::make_shared<Opts>();
  CLI::App* sub = app.add_subcommand("product-group", "direct power with the l1 word metric");
  sub->add_option("--group", o->group)->required();
  sub->add_option("--n", o->n, "power")->required();
  sub->add_option("--claim-M", o->claim_M,
                  "check |halo(A)| >= |A| over the closed M-ball instead of building the table");
  sub->add_option("--table-cap", o->table_cap);
  sub->add_option("--samples", o->samples);
  sub->callback([o, &g, &rc] {
    coarse::set_tolerance(g.tol);
    const coarse::FiniteGroup G = load_group_file(o->group);
    Report rep;
    rep.op = "product-group";
    rep.inputs = {{"group", o->group}, {"n", o->n}, {"seed", g.seed}};
    if (o->claim_M) {
      rep.inputs["claim_M"] = *o->claim_M;
      rep.inputs["samples"] = o->samples;
      const coarse::HaloClaimResult res =
          coarse::product_halo_claim_check(G, o->n, *o->claim_M, g.seed, o->samples);
      rep.results = {{"holds", res.holds},
                     {"exhaustive", res.exhaustive},
                     {"checked", res.checked}};
      rep.certificate = res.holds ? "holds" : "fails";
      if (!res.holds) rep.violated = "|halo(A)| >= |A| on the closed M-ball";
    } else {
      rep.inputs["table_cap"] = o->table_cap;
      const coarse::ProductSpace res =
          coarse::product_group_space(G, o->n, o->table_cap, g.seed);
      rep.results = {{"order", res.group.order},
                     {"generators", res.group.generators.size()},
                     {"edges", res.graph.edges.size()}};
      rep.certificate = "holds";
    }
    rc = emit(rep, g);
  });
}

void add_msp(CLI::App& app, const GlobalOpts& g, int& rc) {
  struct Opts {
    MetricInputs in;
    std::string measure;
    double R = 0.0, S = 0.0, c = 0.0;
    std::optional<double> eps;
    std::string cover;
  };
  auto o = std::make_shared<Opts>();
  CLI::App* sub = app.add_subcommand("msp", "greedy R-disjoint family of mass above c");
  o->in.add_to(sub);
  sub->add_option("--measure", o->measure)->required();
  sub->add_option("--R", o->R)->required();
  sub->add_option("--S", o->S)->required();
  sub->add_option("--c", o->c)->required();
  sub->add_option("--eps", o->eps, "finder tolerance, default (1-c)/(4c)");
  sub->add_option("--cover", o->cover, "scan this cover instead of brute force");
  sub->callback([o, &g, &rc] {
    coarse::set_tolerance(g.tol);
    const coarse::FiniteMetricSpace X = load_metric(o->in.space, o->in.graph);
    const coarse::ProbabilityMeasure mu =
        coarse::parse_measure(coarse::load_json_file(o->measure), X);
    const double eps = o->eps ? *o->eps : (1.0 - o->c) / (4.0 * o->c);
    coarse::SetFinder finder;
    if (o->cover.empty()) {
      finder = coarse::brute_force_finder(o->R, o->S, eps);
    } else {
      finder = coarse::cover_scan_finder(
          coarse::parse_cover(coarse::load_json_file(o->cover), X), o->R, eps);
    }
    const coarse::DisjointFamily family =
        coarse::msp_greedy(X, mu, o->R, o->S, finder, eps, o->c);
    double total = 0.0;
    for (const auto& member : family.members) total += coarse::measure_of(mu, member);
    Report rep;
    rep.op = "msp";
    rep.inputs = o->in.echo();
    rep.inputs["measure"] = o->measure;
    rep.inputs["R"] = o->R;
    rep.inputs["S"] = o->S;
    rep.inputs["c"] = o->c;
    rep.inputs["eps"] = eps;
    if (!o->cover.empty()) rep.inputs["cover"] = o->cover;
    rep.results = {{"members", family.members}, {"total_mass", total}};
    rep.certificate = "holds";
    rc = emit(rep, g);
  });
}

void add_ula_scan(CLI::App& app, const GlobalOpts& g, int& rc) {
  struct Opts {
    MetricInputs in;
    std::string measure;
    std::string cover;
    double R = 0.0, eps = 0.0;
  };
  auto o = std::make_shared<Opts>();
  CLI::App* sub = app.add_subcommand("ula-scan", "find a cover element with a light boundary");
  o->in.add_to(sub);
  sub->add_option("--measure", o->measure)->required();
  sub->add_option("--cover", o->cover)->required();
  sub->add_option("--R", o->R)->required();
  sub->add_option("--eps", o->eps)->required();
  sub->callback([o, &g, &rc] {
    coarse::set_tolerance(g.tol);
    const coarse::FiniteMetricSpace X = load_metric(o->in.space, o->in.graph);
    const coarse::ProbabilityMeasure mu =
        coarse::parse_measure(coarse::load_json_file(o->measure), X);
    const coarse::Cover U = coarse::parse_cover(coarse::load_json_file(o->cover), X);
    const coarse::BoundaryScanResult res = coarse::scan_boundary_set(X, mu, U, o->R, o->eps);
    Report rep;
    rep.op = "ula-scan";
    rep.inputs = o->in.echo();
    rep.inputs["measure"] = o->measure;
    rep.inputs["cover"] = o->cover;
    rep.inputs["R"] = o->R;
    rep.inputs["eps"] = o->eps;
    rep.results = {{"label", res.label},
                   {"element", res.element},
                   {"boundary_mass", res.boundary_mass},
                   {"element_mass", res.element_mass}};
    rep.certificate = "holds";
    rc = emit(rep, g);
  });
}

void add_net(CLI::App& app, const GlobalOpts& g, int& rc) {
  struct Opts {
    MetricInputs in;
    double r = 0.0;
  };
  auto o = std::make_shared<Opts>();
  CLI::App* sub = app.add_subcommand("net", "greedy r-separated r-dense net");
  o->in.add_to(sub);
  sub->add_option("--r", o->r)->required();
  sub->callback([o, &g, &rc] {
    coarse::set_tolerance(g.tol);
    const coarse::FiniteMetricSpace X = load_metric(o->in.space, o->in.graph);
    const std::vector<std::size_t> net = coarse::separated_net(X, o->r);
    Report rep;
    rep.op = "net";
    rep.inputs = o->in.echo();
    rep.inputs["r"] = o->r;
    rep.results = {{"net", net}, {"size", net.size()}};
    rep.certificate = "not-applicable";
    rc = emit(rep, g);
  });
}

void add_expander_light(CLI::App& app, const GlobalOpts& g, int& rc) {
  struct Opts {
    std::vector<std::string> graphs;
    std::size_t max_size = 0;
    std::size_t samples = 100000;
  };
  auto o = std::make_shared<Opts>();
  CLI::App* sub =
      app.add_subcommand("expander-light", "halo ratio floor across a sequence prefix");
  sub->add_option("--graphs", o->graphs, "member graph files in order")->required();
  sub->add_option("--max-size", o->max_size)->required();
  sub->add_option("--samples", o->samples);
  sub->callback([o, &g, &rc] {
    coarse::set_tolerance(g.tol);
    coarse::GraphSequence seq;
    for (const std::string& path : o->graphs) seq.members.push_back(load_graph_file(path));
    const coarse::LightExpanderCertificate res =
        coarse::light_expander_certificate(seq, o->max_size, g.seed, o->samples);
    Report rep;
    rep.op = "expander-light";
    rep.inputs = {{"graphs", o->graphs},
                  {"max_size", o->max_size},
                  {"samples", o->samples},
                  {"seed", g.seed}};
    rep.results = {{"min_ratio", rational_json(res.min_ratio)},
                   {"min_ratio_value", coarse::to_double(res.min_ratio)},
                   {"worst_member", res.worst_member},
                   {"worst_set", res.worst_set},
                   {"exhaustive", res.exhaustive}};
    const bool ok = !(res.min_ratio < coarse::make_rational(1, 1));
    rep.certificate = ok ? "holds" : "fails";
    if (!ok) rep.violated = "|halo(A)| >= |A| across the checked prefix";
    rc = emit(rep, g);
  });
}

void add_ratio_bound(CLI::App& app, const GlobalOpts& g, int& rc) {
  struct Opts {
    MetricInputs in;
    std::string cover;
    double s = 0.0, mu = 0.0;
    std::size_t M = 0;
  };
  auto o = std::make_shared<Opts>();
  CLI::App* sub =
      app.add_subcommand("ratio-bound", "horizon ratio floor from a Lipschitz partition");
  o->in.add_to(sub);
  sub->add_option("--cover", o->cover)->required();
  sub->add_option("--s", o->s)->required();
  sub->add_option("--mu", o->mu)->required();
  sub->add_option("--M", o->M, "max points of an open s-ball")->required();
  sub->callback([o, &g, &rc] {
    coarse::set_tolerance(g.tol);
    const coarse::FiniteMetricSpace X = load_metric(o->in.space, o->in.graph);
    const coarse::Cover U = coarse::parse_cover(coarse::load_json_file(o->cover), X);
    const coarse::RatioBound res = coarse::ratio_bound_from_pou(X, U, o->s, o->mu, o->M);
    Report rep;
    rep.op = "ratio-bound";
    rep.inputs = o->in.echo();
    rep.inputs["cover"] = o->cover;
    rep.inputs["s"] = o->s;
    rep.inputs["mu"] = o->mu;
    rep.inputs["M"] = o->M;
    rep.results = {{"bound", res.bound},
                   {"min_ratio", res.report.min_ratio},
                   {"worst_point", res.report.worst_point}};
    rep.certificate = "holds";
    rc = emit(rep, g);
  });
}

void add_girth_halo(CLI::App& app, const GlobalOpts& g, int& rc) {
  struct Opts {
    std::string graph;
    std::size_t M = 1;
    bool interior = false;
  };
  auto o = std::make_shared<Opts>();
  CLI::App* sub = app.add_subcommand("girth-halo", "halo growth of small sets under large girth");
  sub->add_option("--graph", o->graph)->required();
  sub->add_option("--M", o->M)->required();
  sub->add_flag("--interior", o->interior, "restrict to vertices of degree >= 3");
  sub->callback([o, &g, &rc] {
    coarse::set_tolerance(g.tol);
    const coarse::Graph G = load_graph_file(o->graph);
    std::vector<std::size_t> pool;
    if (o->interior) {
      const auto adj = coarse::adjacency(G);
      for (std::size_t v = 0; v < G.n; ++v) {
        if (adj[v].size() >= 3) pool.push_back(v);
      }
    }
    const bool ok = coarse::girth_halo_check(G, o->M, o->interior ? &pool : nullptr);
    Report rep;
    rep.op = "girth-halo";
    rep.inputs = {{"graph", o->graph}, {"M", o->M}, {"interior", o->interior}};
    rep.results = {{"girth", coarse::real_to_json(coarse::girth(G))}, {"ok", ok}};
    rep.certificate = ok ? "holds" : "fails";
    if (!ok) rep.violated = "|halo(A)| >= |A| for admissible A up to size M";
    rc = emit(rep, g);
  });
}

void add_gen(CLI::App& app, const GlobalOpts& g, int& rc) {
  struct Opts {
    std::string family;
    std::string out;
    std::size_t n = 0;
    std::size_t degree = 3;
    std::size_t radius = 1;
    std::size_t order = 2;
    std::size_t power = 1;
    bool metric = false;
  };
  auto o = std::make_shared<Opts>();
  CLI::App* sub = app.add_subcommand("gen", "write a built-in instance to a file");
  sub->add_option("--family", o->family)
      ->required()
      ->check(CLI::IsMember({"cycle", "path", "complete", "hypercube", "petersen",
                             "random-regular", "truncated-tree", "cyclic", "product-group"}));
  sub->add_option("--out", o->out)->required();
  sub->add_option("--n", o->n, "size (vertices, or hypercube dimension)");
  sub->add_option("--degree", o->degree);
  sub->add_option("--radius", o->radius);
  sub->add_option("--order", o->order, "cyclic base order for product-group");
  sub->add_option("--power", o->power, "power for product-group");
  sub->add_flag("--metric", o->metric, "write the path metric as a space file instead");
  sub->callback([o, &g, &rc] {
    coarse::set_tolerance(g.tol);
    Report rep;
    rep.op = "gen";
    rep.inputs = {{"family", o->family}, {"out", o->out}};
    json payload;
    if (o->family == "cyclic") {
      rep.inputs["n"] = o->n;
      payload = coarse::group_to_json(coarse::cyclic_group(o->n));
    } else if (o->family == "product-group") {
      rep.inputs["order"] = o->order;
      rep.inputs["power"] = o->power;
      const coarse::ProductSpace p =
          coarse::product_group_space(coarse::cyclic_group(o->order), o->power, 4096, g.seed);
      payload = coarse::group_to_json(p.group);
    } else {
      coarse::Graph G;
      if (o->family == "cycle") {
        rep.inputs["n"] = o->n;
        G = coarse::cycle_graph(o->n);
      } else if (o->family == "path") {
        rep.inputs["n"] = o->n;
        G = coarse::path_graph(o->n);
      } else if (o->family == "complete") {
        rep.inputs["n"] = o->n;
        G = coarse::complete_graph(o->n);
      } else if (o->family == "hypercube") {
        rep.inputs["n"] = o->n;
        G = coarse::hypercube_graph(o->n);
      } else if (o->family == "petersen") {
        G = coarse::petersen_graph();
      } else if (o->family == "random-regular") {
        rep.inputs["n"] = o->n;
        rep.inputs["degree"] = o->degree;
        rep.inputs["seed"] = g.seed;
        G = coarse::random_regular_graph(o->n, o->degree, g.seed);
      } else {
        rep.inputs["degree"] = o->degree;
        rep.inputs["radius"] = o->radius;
        G = coarse::truncated_tree(o->degree, o->radius);
      }
      payload = o->metric ? coarse::space_to_json(coarse::graph_metric(G))
                          : coarse::graph_to_json(G);
    }
    write_json_file(o->out, payload);
    rep.results = {{"wrote", o->out}};
    rep.certificate = "not-applicable";
    rc = emit(rep, g);
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"coarse geometry toolkit"};
  app.require_subcommand(1);

  GlobalOpts g;
  app.add_option("--format", g.format, "text or json")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();
  app.add_option("--tol", g.tol, "global comparison tolerance")->capture_default_str();
  app.add_option("--seed", g.seed, "seed for every randomized routine")->capture_default_str();

  int rc = 0;
  add_cheeger(app, g, rc);
  add_girth(app, g, rc);
  add_halo(app, g, rc);
  add_amenability(app, g, rc);
  add_double_count(app, g, rc);
  add_levin(app, g, rc);
  add_round(app, g, rc);
  add_average(app, g, rc);
  add_cover_to_pou(app, g, rc);
  add_property_a(app, g, rc);
  add_folner(app, g, rc);
  add_product_group(app, g, rc);
  add_msp(app, g, rc);
  add_ula_scan(app, g, rc);
  add_net(app, g, rc);
  add_expander_light(app, g, rc);
  add_ratio_bound(app, g, rc);
  add_girth_halo(app, g, rc);
  add_gen(app, g, rc);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const coarse::internal_inconsistency_error& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return rc;
}
