// Command-line front end over the pricing library: the substitutability
// pipeline, the four baselines, a benchmark harness, and a graph generator.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "gnp/baselines.hpp"
#include "gnp/dominator.hpp"
#include "gnp/errors.hpp"
#include "gnp/graph.hpp"
#include "gnp/numfmt.hpp"
#include "gnp/pricing.hpp"
#include "gnp/rng.hpp"
#include "gnp/similarity.hpp"
#include "gnp/sketch.hpp"

namespace {

using json = nlohmann::json;
using namespace gnp;

struct PipelineOptions {
  std::string input;
  std::string output;
  std::string config_path;
  std::string format = "csv";
  std::string root_policy;
  std::uint64_t root_label = 0;
  std::string criticality;
  std::string similarity;
  int num_perm = 128;
  double threshold = 0.5;
  double epsilon = 1e-9;
  std::uint64_t seed = 0;
  int threads = 0;
  CLI::App* cmd = nullptr;
};

void add_io_flags(CLI::App* cmd, PipelineOptions& o, bool input_required) {
  auto* in = cmd->add_option("--input,-i", o.input, "edge list file");
  if (input_required) in->required();
  cmd->add_option("--output,-o", o.output, "output file (default: stdout)");
  cmd->add_option("--config", o.config_path, "JSON config file");
  cmd->add_option("--format", o.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->default_str("csv");
}

void add_pricing_flags(CLI::App* cmd, PipelineOptions& o, bool with_modes) {
  cmd->add_option("--root-policy", o.root_policy,
                  "root selection: virtual or designated");
  cmd->add_option("--root", o.root_label,
                  "designated root label (implies --root-policy designated)");
  if (with_modes) {
    cmd->add_option("--criticality", o.criticality,
                    "criticality mode: dominator or shortest-path");
    cmd->add_option("--similarity", o.similarity,
                    "similarity mode: exact or minhash-lsh");
  }
  cmd->add_option("--num-perm", o.num_perm, "MinHash signature lanes");
  cmd->add_option("--threshold", o.threshold, "LSH similarity threshold");
  cmd->add_option("--epsilon", o.epsilon, "price clamp epsilon");
  cmd->add_option("--seed", o.seed, "RNG seed");
  cmd->add_option("--threads", o.threads,
                  "worker threads (0 = available parallelism)");
}

std::string normalize_token(std::string s) {
  for (char& c : s) {
    if (c == '-') c = '_';
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return s;
}

CriticalityMode parse_criticality(const std::string& s) {
  const std::string t = normalize_token(s);
  if (t == "dominator") return CriticalityMode::Dominator;
  if (t == "shortest_path") return CriticalityMode::ShortestPath;
  throw InputError("unknown criticality mode: " + s);
}

SimilarityMode parse_similarity(const std::string& s) {
  const std::string t = normalize_token(s);
  if (t == "exact") return SimilarityMode::Exact;
  if (t == "minhash_lsh") return SimilarityMode::MinHashLsh;
  throw InputError("unknown similarity mode: " + s);
}

// Defaults < config file < explicit flags.
PricingConfig resolve_pricing_config(const PipelineOptions& o) {
  PricingConfig cfg;
  std::string policy;
  bool root_set = false;
  std::uint64_t root_label = 0;

  if (!o.config_path.empty()) {
    std::ifstream in(o.config_path);
    if (!in) throw InputError("cannot open config file: " + o.config_path);
    json j;
    try {
      j = json::parse(in);
      for (const auto& [key, value] : j.items()) {
        if (key == "root_policy") {
          policy = normalize_token(value.get<std::string>());
        } else if (key == "root") {
          root_label = value.get<std::uint64_t>();
          root_set = true;
        } else if (key == "criticality_mode") {
          cfg.criticality = parse_criticality(value.get<std::string>());
        } else if (key == "similarity_mode") {
          cfg.similarity = parse_similarity(value.get<std::string>());
        } else if (key == "num_perm") {
          cfg.num_perm = value.get<int>();
        } else if (key == "threshold") {
          cfg.threshold = value.get<double>();
        } else if (key == "epsilon") {
          cfg.epsilon = value.get<double>();
        } else if (key == "seed") {
          cfg.seed = value.get<std::uint64_t>();
        } else if (key == "threads") {
          cfg.threads = value.get<int>();
        } else {
          throw InputError("unknown config key: " + key);
        }
      }
    } catch (const json::exception& e) {
      throw InputError(std::string("config parse error: ") + e.what());
    }
  }

  const auto given = [&o](const std::string& name) {
    const CLI::Option* opt = o.cmd->get_option_no_throw(name);
    return opt != nullptr && opt->count() > 0;
  };
  if (given("--root-policy")) policy = normalize_token(o.root_policy);
  if (given("--root")) {
    root_label = o.root_label;
    root_set = true;
  }
  if (given("--criticality")) cfg.criticality = parse_criticality(o.criticality);
  if (given("--similarity")) cfg.similarity = parse_similarity(o.similarity);
  if (given("--num-perm")) cfg.num_perm = o.num_perm;
  if (given("--threshold")) cfg.threshold = o.threshold;
  if (given("--epsilon")) cfg.epsilon = o.epsilon;
  if (given("--seed")) cfg.seed = o.seed;
  if (given("--threads")) cfg.threads = o.threads;

  if (policy.empty()) policy = root_set ? "designated" : "virtual";
  if (policy == "virtual" || policy == "virtual_super_root") {
    if (root_set)
      throw InputError("--root contradicts the virtual root policy");
    cfg.root = RootSpec::virtual_super_root();
  } else if (policy == "designated") {
    if (!root_set)
      throw InputError("designated root policy requires a root label");
    cfg.root = RootSpec::designated(root_label);
  } else {
    throw InputError("unknown root policy: " + policy);
  }
  return cfg;
}

class OutputTarget {
 public:
  explicit OutputTarget(const std::string& path) {
    if (path.empty()) {
      out_ = &std::cout;
      return;
    }
    file_.open(path, std::ios::binary);
    if (!file_) throw InputError("cannot open output file: " + path);
    out_ = &file_;
  }
  std::ostream& stream() { return *out_; }

 private:
  std::ofstream file_;
  std::ostream* out_ = nullptr;
};

json config_json(const PricingConfig& cfg) {
  json j{
      {"root_policy", cfg.root.policy == RootPolicy::VirtualSuperRoot
                          ? "virtual_super_root"
                          : "designated"},
      {"criticality_mode", to_string(cfg.criticality)},
      {"similarity_mode", to_string(cfg.similarity)},
      {"num_perm", cfg.num_perm},
      {"threshold", cfg.threshold},
      {"epsilon", cfg.epsilon},
      {"seed", cfg.seed},
      {"threads", cfg.threads},
  };
  if (cfg.root.policy == RootPolicy::Designated)
    j["root"] = cfg.root.designated_label;
  return j;
}

json timings_json(const StageTimings& t) {
  return json{
      {"preprocess", t.preprocess_ms}, {"dominators", t.dominators_ms},
      {"profiles", t.profiles_ms},     {"similarity", t.similarity_ms},
      {"criticality", t.criticality_ms}, {"scoring", t.scoring_ms},
      {"pricing", t.pricing_ms},       {"total", t.total_ms},
  };
}

json report_json(const PricingReport& r) {
  json nodes = json::array();
  for (std::size_t i = 0; i < r.labels.size(); ++i) {
    nodes.push_back(json{
        {"label", r.labels[i]},
        {"criticality", r.scores.criticality[i]},
        {"mean_similarity", r.scores.mean_similarity[i]},
        {"substitutability", r.scores.substitutability[i]},
        {"price", r.prices[i]},
    });
  }
  return json{
      {"command", "price"},
      {"config", config_json(r.config)},
      {"input", json{{"nodes", r.input_n}, {"edges", r.input_m}}},
      {"analyzed", json{{"nodes", r.analyzed_n},
                        {"edges", r.analyzed_m},
                        {"virtual_root", r.virtual_root}}},
      {"timings_ms", timings_json(r.timings)},
      {"nodes", std::move(nodes)},
  };
}

void write_price_csv(std::ostream& out, const PricingReport& r) {
  out << "node_label,criticality,mean_similarity,substitutability,price\n";
  for (std::size_t i = 0; i < r.labels.size(); ++i) {
    out << format_u64(r.labels[i]) << ','
        << format_double(r.scores.criticality[i]) << ','
        << format_double(r.scores.mean_similarity[i]) << ','
        << format_double(r.scores.substitutability[i]) << ','
        << format_double(r.prices[i]) << '\n';
  }
}

int cmd_price(const PipelineOptions& o, const std::string& report_path) {
  const DirectedGraph g = load_edge_list_file(o.input);
  const PricingConfig cfg = resolve_pricing_config(o);
  const PricingReport report = price_graph(g, cfg);

  OutputTarget target(o.output);
  if (o.format == "json") {
    target.stream() << report_json(report).dump(2) << '\n';
  } else {
    write_price_csv(target.stream(), report);
  }
  if (!report_path.empty()) {
    std::ofstream rf(report_path, std::ios::binary);
    if (!rf) throw InputError("cannot open report file: " + report_path);
    rf << report_json(report).dump(2) << '\n';
  }
  return 0;
}

int cmd_similarity(const PipelineOptions& o, const std::string& mode) {
  if (mode != "exact" && mode != "approx")
    throw InputError("unknown similarity output mode: " + mode);
  const DirectedGraph g = load_edge_list_file(o.input);
  const PricingConfig cfg = resolve_pricing_config(o);
  const RootedGraph rg = preprocess(g, cfg.root);
  const DominatorTree tree = compute_dominator_tree(rg);

  std::vector<double> scores;
  if (mode == "exact") {
    scores = exact_similarity_scores(tree, cfg.threads);
  } else {
    const LshIndex index = LshIndex::build(
        tree, LshParams{cfg.num_perm, cfg.threshold, cfg.seed});
    scores = approx_similarity_scores(tree, index);
  }

  OutputTarget target(o.output);
  if (o.format == "json") {
    json nodes = json::array();
    for (NodeId v = 0; v < tree.n(); ++v) {
      if (tree.is_virtual(v)) continue;
      nodes.push_back(json{{"label", tree.labels[v]}, {"score", scores[v]}});
    }
    target.stream() << json{{"command", "similarity"},
                            {"mode", mode},
                            {"nodes", std::move(nodes)}}
                           .dump(2)
                    << '\n';
  } else {
    target.stream() << "node_label,mode,score\n";
    for (NodeId v = 0; v < tree.n(); ++v) {
      if (tree.is_virtual(v)) continue;
      target.stream() << format_u64(tree.labels[v]) << ',' << mode << ','
                      << format_double(scores[v]) << '\n';
    }
  }
  return 0;
}

std::string tree_label(const DominatorTree& t, NodeId v) {
  return t.is_virtual(v) ? "__root__" : format_u64(t.labels[v]);
}

int cmd_domtree(const PipelineOptions& o) {
  const DirectedGraph g = load_edge_list_file(o.input);
  const PricingConfig cfg = resolve_pricing_config(o);
  const RootedGraph rg = preprocess(g, cfg.root);
  const DominatorTree tree = compute_dominator_tree(rg);

  OutputTarget target(o.output);
  if (o.format == "json") {
    json nodes = json::array();
    for (NodeId v = 0; v < tree.n(); ++v)
      nodes.push_back(json{{"node", tree_label(tree, v)},
                           {"idom", tree_label(tree, tree.idom[v])}});
    target.stream() << json{{"command", "domtree"}, {"nodes", std::move(nodes)}}
                           .dump(2)
                    << '\n';
  } else {
    target.stream() << "node,idom\n";
    for (NodeId v = 0; v < tree.n(); ++v)
      target.stream() << tree_label(tree, v) << ','
                      << tree_label(tree, tree.idom[v]) << '\n';
  }
  return 0;
}

// "label value" lines; '#' starts a comment. All-numeric values become a
// numeric attribute (absent nodes get the observed mean); any non-numeric
// value switches the whole file to categorical (absent nodes get their own
// category).
NodeAttributes load_attributes(const std::string& path, const DirectedGraph& g) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open attribute file: " + path);

  std::map<std::uint64_t, NodeId> id_of;
  for (NodeId v = 0; v < g.n; ++v) id_of[g.labels[v]] = v;

  std::vector<std::pair<NodeId, std::string>> rows;
  bool all_numeric = true;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string label_tok, value_tok;
    if (!(ls >> label_tok)) continue;
    if (label_tok[0] == '#') continue;
    if (!(ls >> value_tok))
      throw InputError("attribute parse error at line " +
                       format_u64(line_no) + ": missing value");
    std::uint64_t label = 0;
    const auto [p, ec] = std::from_chars(
        label_tok.data(), label_tok.data() + label_tok.size(), label);
    if (ec != std::errc{} || p != label_tok.data() + label_tok.size())
      throw InputError("attribute parse error at line " +
                       format_u64(line_no) + ": bad node label");
    const auto it = id_of.find(label);
    if (it == id_of.end()) continue;  // attribute for a node not in the graph
    double value = 0.0;
    const auto [vp, vec] = std::from_chars(
        value_tok.data(), value_tok.data() + value_tok.size(), value);
    if (vec != std::errc{} || vp != value_tok.data() + value_tok.size())
      all_numeric = false;
    rows.emplace_back(it->second, value_tok);
  }
  if (rows.empty())
    throw InputError("attribute file covers no graph nodes: " + path);

  NodeAttributes attrs;
  if (all_numeric) {
    attrs.numeric.assign(g.n, std::numeric_limits<double>::quiet_NaN());
    for (const auto& [v, tok] : rows) {
      double value = 0.0;
      std::from_chars(tok.data(), tok.data() + tok.size(), value);
      attrs.numeric[v] = value;
    }
    double sum = 0.0;
    std::size_t present = 0;
    for (const double x : attrs.numeric)
      if (!std::isnan(x)) {
        sum += x;
        ++present;
      }
    const double fill = sum / static_cast<double>(present);
    for (double& x : attrs.numeric)
      if (std::isnan(x)) x = fill;
    return attrs;
  }

  std::vector<std::string> tokens;
  tokens.reserve(rows.size());
  for (const auto& [v, tok] : rows) tokens.push_back(tok);
  std::sort(tokens.begin(), tokens.end());
  tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
  std::map<std::string, std::uint32_t> cat_of;
  for (std::uint32_t i = 0; i < tokens.size(); ++i) cat_of[tokens[i]] = i;

  const auto missing = static_cast<std::uint32_t>(tokens.size());
  attrs.category.assign(g.n, missing);
  bool any_missing = false;
  for (const auto& [v, tok] : rows) attrs.category[v] = cat_of[tok];
  for (const std::uint32_t c : attrs.category)
    if (c == missing) any_missing = true;
  attrs.category_count = missing + (any_missing ? 1u : 0u);
  return attrs;
}

struct BaselineResult {
  std::vector<double> raw;
  std::vector<double> prices;
};

BaselineResult run_baseline(const std::string& method, const DirectedGraph& g,
                            const PipelineOptions& o, int samples, int bins,
                            const std::string& attr_path) {
  BaselineResult r;
  if (method == "shapley") {
    r.raw = monte_carlo_shapley_raw(g, samples, o.seed, o.threads);
  } else if (method == "entropy") {
    const NodeAttributes attrs = attr_path.empty()
                                     ? NodeAttributes::from_graph(g)
                                     : load_attributes(attr_path, g);
    r.raw = entropy_scores(g, attrs, bins);
  } else if (method == "degree") {
    r.raw = degree_scores(g);
  } else if (method == "eigenvector") {
    r.raw = eigenvector_scores(g);
  } else {
    throw InputError("unknown baseline method: " + method);
  }
  r.prices = positivity_normalize(r.raw);
  return r;
}

int cmd_baseline(const PipelineOptions& o, const std::string& method,
                 int samples, int bins, const std::string& attr_path) {
  const DirectedGraph loaded = load_edge_list_file(o.input);
  const PricingConfig cfg = resolve_pricing_config(o);
  // Baselines run over the same node set the pricing pipeline prices.
  const DirectedGraph g = strip_virtual_root(preprocess(loaded, cfg.root));
  const BaselineResult r = run_baseline(method, g, o, samples, bins, attr_path);

  OutputTarget target(o.output);
  if (o.format == "json") {
    json nodes = json::array();
    for (NodeId v = 0; v < g.n; ++v)
      nodes.push_back(json{{"label", g.labels[v]},
                           {"score", r.raw[v]},
                           {"price", r.prices[v]}});
    target.stream() << json{{"command", "baseline"},
                            {"method", method},
                            {"nodes", std::move(nodes)}}
                           .dump(2)
                    << '\n';
  } else {
    // Price schema; the substitutability column carries the method's raw
    // score, the two pipeline-specific columns stay empty.
    target.stream() << "node_label,criticality,mean_similarity,substitutability,price\n";
    for (NodeId v = 0; v < g.n; ++v)
      target.stream() << format_u64(g.labels[v]) << ",,,"
                      << format_double(r.raw[v]) << ','
                      << format_double(r.prices[v]) << '\n';
  }
  return 0;
}

struct Dispersion {
  double mean = 0, stddev = 0, lo = 0, hi = 0;
};

Dispersion dispersion(const std::vector<double>& p) {
  Dispersion d;
  if (p.empty()) return d;
  d.lo = p[0];
  d.hi = p[0];
  for (const double x : p) {
    d.mean += x;
    d.lo = std::min(d.lo, x);
    d.hi = std::max(d.hi, x);
  }
  d.mean /= static_cast<double>(p.size());
  double acc = 0.0;
  for (const double x : p) acc += (x - d.mean) * (x - d.mean);
  d.stddev = std::sqrt(acc / static_cast<double>(p.size()));
  return d;
}

int cmd_compare(const PipelineOptions& o, std::vector<std::string> methods,
                int samples, int bins, const std::string& attr_path,
                const std::string& summary_path) {
  for (const std::string& m : methods)
    if (m != "shapley" && m != "entropy" && m != "degree" && m != "eigenvector")
      throw InputError("unknown baseline method: " + m);

  const DirectedGraph loaded = load_edge_list_file(o.input);
  const PricingConfig cfg = resolve_pricing_config(o);
  const PricingReport report = price_graph(loaded, cfg);
  const DirectedGraph g = strip_virtual_root(preprocess(loaded, cfg.root));
  if (g.labels != report.labels)
    throw PipelineError("method universes diverged");

  std::vector<std::pair<std::string, std::vector<double>>> columns;
  columns.emplace_back("substitutability", report.prices);
  for (const std::string& m : methods)
    columns.emplace_back(m, run_baseline(m, g, o, samples, bins, attr_path).prices);

  OutputTarget target(o.output);
  if (o.format == "json") {
    json prices = json::object();
    for (const auto& [name, p] : columns) {
      json rows = json::array();
      for (NodeId v = 0; v < g.n; ++v)
        rows.push_back(json{{"label", g.labels[v]}, {"price", p[v]}});
      prices[name] = std::move(rows);
    }
    json summary = json::array();
    for (const auto& [name, p] : columns) {
      const Dispersion d = dispersion(p);
      summary.push_back(json{{"method", name},
                             {"nodes", p.size()},
                             {"mean", d.mean},
                             {"std_dev", d.stddev},
                             {"min", d.lo},
                             {"max", d.hi}});
    }
    target.stream() << json{{"command", "compare"},
                            {"prices", std::move(prices)},
                            {"summary", std::move(summary)}}
                           .dump(2)
                    << '\n';
    return 0;
  }

  target.stream() << "node_label,method,price\n";
  for (const auto& [name, p] : columns)
    for (NodeId v = 0; v < g.n; ++v)
      target.stream() << format_u64(g.labels[v]) << ',' << name << ','
                      << format_double(p[v]) << '\n';

  std::ofstream summary_file;
  std::ostream* summary_out = &std::cerr;
  if (!summary_path.empty()) {
    summary_file.open(summary_path, std::ios::binary);
    if (!summary_file)
      throw InputError("cannot open summary file: " + summary_path);
    summary_out = &summary_file;
  }
  *summary_out << "method,nodes,mean,std_dev,min,max\n";
  for (const auto& [name, p] : columns) {
    const Dispersion d = dispersion(p);
    *summary_out << name << ',' << format_u64(p.size()) << ','
                 << format_double(d.mean) << ',' << format_double(d.stddev)
                 << ',' << format_double(d.lo) << ',' << format_double(d.hi)
                 << '\n';
  }
  return 0;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

int cmd_bench(const PipelineOptions& o, std::vector<std::uint32_t> sizes,
              const std::string& mode, int seeds, int edge_factor) {
  if (mode != "approx" && mode != "exact" && mode != "both")
    throw InputError("unknown bench mode: " + mode);
  if (sizes.empty()) throw InputError("size list is empty");
  if (seeds < 1) throw InputError("seed count must be positive");
  if (edge_factor < 1) throw InputError("edge factor must be positive");

  std::vector<std::string> runs;
  if (mode == "approx" || mode == "both") runs.push_back("approx");
  if (mode == "exact" || mode == "both") runs.push_back("exact");
  if (std::find(runs.begin(), runs.end(), "exact") != runs.end())
    for (const std::uint32_t n : sizes)
      if (n > 4000)
        throw InputError("exact mode is limited to n <= 4000");

  const PricingConfig base_cfg = resolve_pricing_config(o);

  struct Record {
    std::string dataset;
    std::uint32_t n;
    std::uint64_t m;
    std::string method;
    StageTimings t;
    Dispersion d;
  };
  std::vector<Record> records;
  // method -> size -> total_ms samples
  std::map<std::string, std::map<std::uint32_t, std::vector<double>>> totals;

  for (const std::uint32_t n : sizes) {
    const std::uint64_t m = static_cast<std::uint64_t>(edge_factor) * n;
    for (int k = 0; k < seeds; ++k) {
      const std::uint64_t graph_seed = stream_seed(
          o.seed, static_cast<std::uint64_t>(n) * 1024 + static_cast<std::uint64_t>(k));
      const DirectedGraph g = generate_random_graph(n, m, graph_seed);
      for (const std::string& method : runs) {
        PricingConfig cfg = base_cfg;
        cfg.similarity = method == "approx" ? SimilarityMode::MinHashLsh
                                            : SimilarityMode::Exact;
        const PricingReport report = price_graph(g, cfg);
        Record rec;
        rec.dataset = "er_n" + format_u64(n) + "_m" + format_u64(m) + "_s" +
                      format_u64(static_cast<std::uint64_t>(k));
        rec.n = report.analyzed_n;
        rec.m = report.analyzed_m;
        rec.method = method;
        rec.t = report.timings;
        rec.d = dispersion(report.prices);
        totals[method][n].push_back(report.timings.total_ms);
        records.push_back(std::move(rec));
      }
    }
  }

  struct Ratio {
    std::string method;
    std::uint32_t n_from, n_to;
    double med_from, med_to, ratio;
  };
  std::vector<Ratio> ratios;
  for (const std::string& method : runs) {
    for (std::size_t i = 0; i + 1 < sizes.size(); ++i) {
      const double a = median(totals[method][sizes[i]]);
      const double b = median(totals[method][sizes[i + 1]]);
      ratios.push_back(
          {method, sizes[i], sizes[i + 1], a, b, a > 0 ? b / a : 0.0});
    }
  }

  OutputTarget target(o.output);
  if (o.format == "json") {
    json recs = json::array();
    for (const Record& r : records) {
      recs.push_back(json{{"dataset", r.dataset},
                          {"n", r.n},
                          {"m", r.m},
                          {"method", r.method},
                          {"timings_ms", timings_json(r.t)},
                          {"price_stddev", r.d.stddev},
                          {"price_min", r.d.lo},
                          {"price_max", r.d.hi}});
    }
    json rats = json::array();
    for (const Ratio& r : ratios) {
      rats.push_back(json{{"method", r.method},
                          {"n_from", r.n_from},
                          {"n_to", r.n_to},
                          {"median_from_ms", r.med_from},
                          {"median_to_ms", r.med_to},
                          {"ratio", r.ratio}});
    }
    target.stream() << json{{"command", "bench"},
                            {"records", std::move(recs)},
                            {"ratios", std::move(rats)}}
                           .dump(2)
                    << '\n';
    return 0;
  }

  target.stream() << "dataset,n,m,method,preprocess_ms,dominators_ms,"
                     "profiles_ms,similarity_ms,criticality_ms,scoring_ms,"
                     "pricing_ms,total_ms,price_stddev,price_min,price_max\n";
  for (const Record& r : records) {
    target.stream() << r.dataset << ',' << format_u64(r.n) << ','
                    << format_u64(r.m) << ',' << r.method << ','
                    << format_double(r.t.preprocess_ms) << ','
                    << format_double(r.t.dominators_ms) << ','
                    << format_double(r.t.profiles_ms) << ','
                    << format_double(r.t.similarity_ms) << ','
                    << format_double(r.t.criticality_ms) << ','
                    << format_double(r.t.scoring_ms) << ','
                    << format_double(r.t.pricing_ms) << ','
                    << format_double(r.t.total_ms) << ','
                    << format_double(r.d.stddev) << ','
                    << format_double(r.d.lo) << ','
                    << format_double(r.d.hi) << '\n';
  }
  for (const Ratio& r : ratios) {
    std::cerr << "# scaling " << r.method << ": n " << r.n_from << " -> "
              << r.n_to << " median " << format_double(r.med_from) << " -> "
              << format_double(r.med_to) << " ms, ratio "
              << format_double(r.ratio) << '\n';
  }
  return 0;
}

int cmd_gen(std::uint32_t n, std::uint64_t m, std::uint64_t seed,
            const std::string& output) {
  const DirectedGraph g = generate_random_graph(n, m, seed);
  OutputTarget target(output);
  write_edge_list(target.stream(), g);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"graph node pricing by structural substitutability"};
  app.require_subcommand(1);

  // price
  PipelineOptions price_opts;
  std::string price_report_path;
  CLI::App* price = app.add_subcommand(
      "price", "price every node via the substitutability pipeline");
  price_opts.cmd = price;
  add_io_flags(price, price_opts, true);
  add_pricing_flags(price, price_opts, true);
  price->add_option("--report", price_report_path,
                    "also write the full JSON report here");

  // similarity
  PipelineOptions sim_opts;
  std::string sim_mode = "exact";
  CLI::App* sim = app.add_subcommand(
      "similarity", "per-node mean structural similarity scores");
  sim_opts.cmd = sim;
  add_io_flags(sim, sim_opts, true);
  add_pricing_flags(sim, sim_opts, false);
  sim->add_option("--mode", sim_mode, "exact or approx")
      ->check(CLI::IsMember({"exact", "approx"}))
      ->default_str("exact");

  // domtree
  PipelineOptions dom_opts;
  CLI::App* dom = app.add_subcommand("domtree", "dump the dominator tree");
  dom_opts.cmd = dom;
  add_io_flags(dom, dom_opts, true);
  add_pricing_flags(dom, dom_opts, false);

  // baseline
  PipelineOptions base_opts;
  std::string base_method;
  std::string base_attrs;
  int base_samples = 2000;
  int base_bins = 16;
  CLI::App* base = app.add_subcommand("baseline", "run one baseline pricer");
  base_opts.cmd = base;
  add_io_flags(base, base_opts, true);
  add_pricing_flags(base, base_opts, false);
  base->add_option("--method", base_method,
                   "shapley, entropy, degree, or eigenvector")
      ->required();
  base->add_option("--samples", base_samples,
                   "permutation samples for shapley");
  base->add_option("--bins", base_bins, "attribute bins for entropy");
  base->add_option("--attributes", base_attrs,
                   "node attribute file for entropy (label value lines)");

  // compare
  PipelineOptions cmp_opts;
  std::vector<std::string> cmp_methods{"shapley", "entropy", "degree",
                                       "eigenvector"};
  std::string cmp_attrs;
  std::string cmp_summary;
  int cmp_samples = 200;
  int cmp_bins = 16;
  CLI::App* cmp = app.add_subcommand(
      "compare", "substitutability prices next to the baselines");
  cmp_opts.cmd = cmp;
  add_io_flags(cmp, cmp_opts, true);
  add_pricing_flags(cmp, cmp_opts, true);
  cmp->add_option("--methods", cmp_methods, "baselines to include")
      ->delimiter(',');
  cmp->add_option("--samples", cmp_samples, "permutation samples for shapley");
  cmp->add_option("--bins", cmp_bins, "attribute bins for entropy");
  cmp->add_option("--attributes", cmp_attrs, "node attribute file for entropy");
  cmp->add_option("--summary", cmp_summary,
                  "dispersion summary file (default: stderr)");

  // bench
  PipelineOptions bench_opts;
  std::vector<std::uint32_t> bench_sizes{1000, 2000, 4000, 8000, 16000};
  std::string bench_mode = "approx";
  int bench_seeds = 10;
  int bench_factor = 5;
  CLI::App* bench = app.add_subcommand(
      "bench", "runtime ladder over generated graphs");
  bench_opts.cmd = bench;
  add_io_flags(bench, bench_opts, false);
  add_pricing_flags(bench, bench_opts, true);
  bench->add_option("--sizes", bench_sizes, "node counts")->delimiter(',');
  bench->add_option("--mode", bench_mode, "approx, exact, or both")
      ->check(CLI::IsMember({"approx", "exact", "both"}))
      ->default_str("approx");
  bench->add_option("--seeds", bench_seeds, "graphs per size");
  bench->add_option("--edge-factor", bench_factor, "edges per node");

  // gen
  std::uint32_t gen_n = 0;
  std::uint64_t gen_m = 0;
  std::uint64_t gen_seed = 0;
  std::string gen_output;
  CLI::App* gen = app.add_subcommand("gen", "generate a uniform random digraph");
  gen->add_option("--nodes,-n", gen_n, "node count")->required();
  gen->add_option("--edges,-m", gen_m, "edge count")->required();
  gen->add_option("--seed", gen_seed, "RNG seed");
  gen->add_option("--output,-o", gen_output, "output file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (price->parsed()) return cmd_price(price_opts, price_report_path);
    if (sim->parsed()) return cmd_similarity(sim_opts, sim_mode);
    if (dom->parsed()) return cmd_domtree(dom_opts);
    if (base->parsed())
      return cmd_baseline(base_opts, base_method, base_samples, base_bins,
                          base_attrs);
    if (cmp->parsed())
      return cmd_compare(cmp_opts, cmp_methods, cmp_samples, cmp_bins,
                         cmp_attrs, cmp_summary);
    if (bench->parsed())
      return cmd_bench(bench_opts, bench_sizes, bench_mode, bench_seeds,
                       bench_factor);
    if (gen->parsed()) return cmd_gen(gen_n, gen_m, gen_seed, gen_output);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const PipelineError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
