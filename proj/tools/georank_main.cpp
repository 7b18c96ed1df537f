#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>

#include <CLI11.hpp>
#include <fmt/core.h>
#include <json.hpp>

#include "georank/engine.hpp"
#include "georank/eval.hpp"
#include "georank/geojson.hpp"

namespace {

using namespace georank;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitService = 3;

struct CommonOpts {
  std::string store;
  std::string embedder = "hash";
  int embed_dim = 256;
  std::string embed_url;
  std::string embed_model;
  std::string embed_cache;
  double lambda_p = 0.5;
  double lambda_d = 0.5;
  std::string weights = "heuristic";  // heuristic | fixed:s,k | llm
  std::string parser = "rule";        // rule | llm | dsl
  int top_k = 10;
  std::string format = "table";
  std::string gateway = "stub";       // stub | replay:FILE | http
  std::string gateway_url;
  std::string gateway_model;
  std::string assets_dir;
  uint64_t seed = 0;                   // reserved; the default pipeline is deterministic
  std::vector<std::string> at;         // extra reference points "lon,lat"
};

void add_common_flags(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--store", o.store, "store directory")->required();
  cmd->add_option("--embedder", o.embedder, "hash | service");
  cmd->add_option("--embed-dim", o.embed_dim, "hash embedder dimension (ingest only)");
  cmd->add_option("--embed-url", o.embed_url, "embedding service endpoint");
  cmd->add_option("--embed-model", o.embed_model, "embedding service model");
  cmd->add_option("--embed-cache", o.embed_cache, "embedding response cache directory");
  cmd->add_option("--lambda-p", o.lambda_p, "sparse spatial fusion weight");
  cmd->add_option("--lambda-d", o.lambda_d, "dense spatial fusion weight");
  cmd->add_option("--weights", o.weights, "heuristic | fixed:s,k | llm");
  cmd->add_option("--parser", o.parser, "rule | llm | dsl");
  cmd->add_option("--topk", o.top_k, "answers to return");
  cmd->add_option("--format", o.format, "table | json | geojson");
  cmd->add_option("--gateway", o.gateway, "stub | replay:FILE | http");
  cmd->add_option("--gateway-url", o.gateway_url, "chat completion base url");
  cmd->add_option("--gateway-model", o.gateway_model, "chat completion model");
  cmd->add_option("--assets", o.assets_dir, "prompt assets directory");
  cmd->add_option("--seed", o.seed, "seed for randomized components (reserved)");
  cmd->add_option("--at", o.at, "extra reference point lon,lat (repeatable)");
  cmd->set_config("--config");
}

std::unique_ptr<Embedder> make_embedder(const CommonOpts& o, int dim_hint) {
  if (o.embedder == "hash") return std::make_unique<HashEmbedder>(dim_hint > 0 ? dim_hint : o.embed_dim);
  if (o.embedder == "service") {
    ServiceEmbedderConfig cfg;
    cfg.endpoint = o.embed_url;
    cfg.model = o.embed_model;
    cfg.cache_dir = o.embed_cache;
    cfg.dim = dim_hint;
    return std::make_unique<ServiceEmbedder>(cfg);
  }
  throw ValidationError("unknown embedder '" + o.embedder + "' (expected hash or service)");
}

std::string assets_dir(const CommonOpts& o) {
  if (!o.assets_dir.empty()) return o.assets_dir;
  return std::string(GEORANK_DEFAULT_ASSET_DIR);
}

std::shared_ptr<Gateway> make_gateway(const CommonOpts& o) {
  PromptLibrary lib = PromptLibrary::load(std::filesystem::path(assets_dir(o)) / "prompts");
  std::shared_ptr<ChatBackend> backend;
  if (o.gateway == "stub") {
    backend = std::make_shared<StubChatBackend>();
  } else if (o.gateway.rfind("replay:", 0) == 0) {
    backend = std::make_shared<ReplayBackend>(ReplayBackend::from_file(o.gateway.substr(7)));
  } else if (o.gateway == "http") {
    HttpChatConfig cfg;
    cfg.base_url = o.gateway_url;
    cfg.model = o.gateway_model;
    backend = std::make_shared<HttpChatBackend>(cfg);
  } else {
    throw ValidationError("unknown gateway '" + o.gateway + "'");
  }
  return std::make_shared<Gateway>(backend, std::move(lib));
}

EngineConfig make_engine_config(const CommonOpts& o) {
  EngineConfig cfg;
  cfg.lambda_p = o.lambda_p;
  cfg.lambda_d = o.lambda_d;
  cfg.top_k = o.top_k;
  if (o.parser == "rule") cfg.parser = ParserMode::Rule;
  else if (o.parser == "llm") cfg.parser = ParserMode::Llm;
  else if (o.parser == "dsl") cfg.parser = ParserMode::Dsl;
  else throw ValidationError("unknown parser mode '" + o.parser + "'");

  if (o.weights == "heuristic") {
    cfg.weight_policy = WeightPolicy::Heuristic;
  } else if (o.weights == "llm") {
    cfg.weight_policy = WeightPolicy::Llm;
  } else if (o.weights.rfind("fixed:", 0) == 0) {
    cfg.weight_policy = WeightPolicy::Fixed;
    std::string rest = o.weights.substr(6);
    auto comma = rest.find(',');
    if (comma == std::string::npos)
      throw ValidationError("--weights fixed:s,k needs two comma-separated values");
    cfg.fixed_weights.lambda_s = std::stod(rest.substr(0, comma));
    cfg.fixed_weights.lambda_k = std::stod(rest.substr(comma + 1));
  } else {
    throw ValidationError("unknown weights policy '" + o.weights + "'");
  }
  cfg.validate();
  return cfg;
}

std::vector<geo::Coord> parse_at_points(const std::vector<std::string>& at) {
  std::vector<geo::Coord> out;
  for (const auto& s : at) {
    auto comma = s.find(',');
    if (comma == std::string::npos) throw ValidationError("--at expects lon,lat, got '" + s + "'");
    out.push_back({std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1))});
  }
  return out;
}

json answers_json(const QueryResult& res, const Corpus& corpus) {
  json answers = json::array();
  int rank = 1;
  for (const auto& id : res.ranking) {
    const PoiRecord* rec = corpus.find_by_id(id);
    const CandidateScores* cs = nullptr;
    for (const auto& c : res.candidates)
      if (c.poi_id == id) {
        cs = &c;
        break;
      }
    json a = {{"rank", rank++}, {"id", id}, {"name", rec->name}, {"category", rec->category}};
    if (cs) {
      a["distance_km"] = cs->distance_km;
      a["f_sparse"] = cs->f_sparse;
      a["f_dense_spatial"] = cs->f_dense_spatial;
      a["f_semantic"] = cs->f_semantic;
    }
    answers.push_back(std::move(a));
  }
  return answers;
}

json query_summary_json(const QueryResult& res) {
  const SpatialQuery& sq = res.parsed.query;
  json q = {{"kind", to_string(sq.kind)},
            {"parser", res.parser_used},
            {"category", sq.target_category},
            {"reference_count", sq.references.size()},
            {"candidates", res.sparse_candidate_count},
            {"frontier_size", res.frontier.size()}};
  if (sq.eps_km) q["eps_km"] = *sq.eps_km;
  if (res.weights) {
    q["lambda_s"] = res.weights->lambda_s;
    q["lambda_k"] = res.weights->lambda_k;
  }
  q["llm_reranked"] = res.llm_reranked;
  return q;
}

void print_query_table(const QueryResult& res, const Corpus& corpus) {
  const SpatialQuery& sq = res.parsed.query;
  fmt::print("query: kind={} category={} refs={}", to_string(sq.kind), sq.target_category,
             sq.references.size());
  if (sq.eps_km) fmt::print(" eps_km={:.3f}", *sq.eps_km);
  fmt::print(" parser={}\n", res.parser_used);
  if (res.ranking.empty()) {
    fmt::print("no answers: no candidate satisfies the spatial and semantic constraints\n");
    return;
  }
  fmt::print("{:<5} {:<14} {:<28} {:<10} {:>8} {:>8} {:>8} {:>8}\n", "rank", "id", "name",
             "category", "dist_km", "f_sp", "f_dn", "f_sem");
  int rank = 1;
  for (const auto& id : res.ranking) {
    const PoiRecord* rec = corpus.find_by_id(id);
    const CandidateScores* cs = nullptr;
    for (const auto& c : res.candidates)
      if (c.poi_id == id) {
        cs = &c;
        break;
      }
    std::string name = rec->name.substr(0, 28);
    if (cs)
      fmt::print("{:<5} {:<14} {:<28} {:<10} {:>8.3f} {:>8.4f} {:>8.4f} {:>8.4f}\n", rank, id,
                 name, rec->category, cs->distance_km, cs->f_sparse, cs->f_dense_spatial,
                 cs->f_semantic);
    else
      fmt::print("{:<5} {:<14} {:<28} {:<10}\n", rank, id, name, rec->category);
    ++rank;
  }
}

json query_geojson(const QueryResult& res, const Corpus& corpus) {
  json features = json::array();
  const SpatialQuery& sq = res.parsed.query;

  json ref_props = {{"role", "reference"}, {"kind", to_string(sq.kind)}};
  geo::Geometry reference = to_candidate_query(sq).reference;
  features.push_back(
      {{"type", "Feature"}, {"geometry", geojson::write_geometry(reference)}, {"properties", ref_props}});

  if (sq.eps_km) {
    geo::Geometry ring = geojson::buffer_outline(reference, *sq.eps_km);
    features.push_back({{"type", "Feature"},
                        {"geometry", geojson::write_geometry(ring)},
                        {"properties", {{"role", "buffer"}, {"eps_km", *sq.eps_km}}}});
  } else if (sq.kind == QueryKind::RegionContain) {
    features.push_back({{"type", "Feature"},
                        {"geometry", geojson::write_geometry(sq.references.front())},
                        {"properties", {{"role", "buffer"}}}});
  }

  int rank = 1;
  for (const auto& id : res.ranking) {
    const PoiRecord* rec = corpus.find_by_id(id);
    features.push_back({{"type", "Feature"},
                        {"geometry", geojson::write_geometry(rec->geometry)},
                        {"properties",
                         {{"role", "answer"},
                          {"rank", rank++},
                          {"id", id},
                          {"name", rec->name},
                          {"category", rec->category}}}});
  }
  return json{{"type", "FeatureCollection"}, {"features", features}};
}

bool verify_feasibility(const QueryResult& res, const Corpus& corpus) {
  CandidateQuery plan = to_candidate_query(res.parsed.query);
  for (const auto& id : res.ranking) {
    const PoiRecord* rec = corpus.find_by_id(id);
    bool ok = plan.mode == CandidateQuery::Mode::Contained
                  ? geo::contains(plan.reference, rec->geometry)
                  : geo::within_buffer(rec->geometry, plan.reference, plan.eps_km);
    if (!ok) {
      fmt::print(stderr, "[verify] answer {} violates the spatial predicate\n", id);
      return false;
    }
  }
  return true;
}

int cmd_ingest(const std::string& poi, const std::string& gazetteer, const CommonOpts& o,
               const std::string& categories_csv) {
  IngestOptions opt;
  opt.poi_path = poi;
  opt.gazetteer_path = gazetteer;
  opt.store_dir = o.store;
  if (!categories_csv.empty()) {
    opt.categories.clear();
    std::string cur;
    for (char c : categories_csv + ",") {
      if (c == ',') {
        if (!cur.empty()) opt.categories.push_back(cur);
        cur.clear();
      } else {
        cur.push_back(c);
      }
    }
  }
  auto embedder = make_embedder(o, 0);
  text::LexiconMasker masker;
  IngestStats stats = ingest(opt, *embedder, masker);
  fmt::print("ingested {} POIs, {} regions -> {} (checksum {})\n", stats.poi_count,
             stats.region_count, o.store, stats.store_checksum);
  return kExitOk;
}

// Heap-owned members keep their addresses stable under moves; the engine
// holds references into them.
struct LoadedEngine {
  std::unique_ptr<Corpus> corpus;
  std::unique_ptr<Embedder> embedder;
  std::unique_ptr<text::LexiconMasker> masker;
  std::unique_ptr<Engine> engine;
};

LoadedEngine load_engine(const CommonOpts& o, int top_k_override = 0) {
  LoadedEngine le;
  le.corpus = std::make_unique<Corpus>(Corpus::load(o.store));
  le.embedder = make_embedder(o, le.corpus->dim());
  if (le.embedder->deterministic() && le.embedder->id() != le.corpus->embedder_id())
    throw ValidationError("embedder '" + le.embedder->id() + "' does not match the store's '" +
                          le.corpus->embedder_id() + "'");
  le.masker = std::make_unique<text::LexiconMasker>();
  EngineConfig cfg = make_engine_config(o);
  if (top_k_override > 0) cfg.top_k = std::max(cfg.top_k, top_k_override);
  le.engine = std::make_unique<Engine>(*le.corpus, *le.embedder, *le.masker, cfg);
  if (cfg.parser == ParserMode::Llm || cfg.weight_policy == WeightPolicy::Llm)
    le.engine->set_gateway(make_gateway(o));
  return le;
}

int cmd_query(const std::string& question, const std::string& dsl, const CommonOpts& o_in,
              bool verify) {
  CommonOpts o = o_in;
  std::string input = question;
  if (!dsl.empty()) {
    o.parser = "dsl";
    input = dsl;
  }
  if (input.empty()) throw ValidationError("no question or --dsl expression given");

  LoadedEngine le = load_engine(o);
  QueryResult res = le.engine->run(input, parse_at_points(o.at));

  if (verify && !verify_feasibility(res, *le.corpus)) return 1;

  if (o.format == "table") {
    print_query_table(res, *le.corpus);
  } else if (o.format == "json") {
    json out = {{"query", query_summary_json(res)}, {"answers", answers_json(res, *le.corpus)}};
    fmt::print("{}\n", out.dump(2));
  } else if (o.format == "geojson") {
    fmt::print("{}\n", query_geojson(res, *le.corpus).dump(2));
  } else {
    throw ValidationError("unknown format '" + o.format + "'");
  }
  return kExitOk;
}

int cmd_explain(const std::string& question, const std::string& dsl, const CommonOpts& o_in) {
  CommonOpts o = o_in;
  std::string input = question;
  if (!dsl.empty()) {
    o.parser = "dsl";
    input = dsl;
  }
  if (input.empty()) throw ValidationError("no question or --dsl expression given");

  LoadedEngine le = load_engine(o);
  QueryResult res = le.engine->run(input, parse_at_points(o.at));
  const SpatialQuery& sq = res.parsed.query;

  fmt::print("[1 parse] kind={} parser={}{}\n", to_string(sq.kind), res.parser_used,
             res.parser_used == "dsl" ? " (NL parsing bypassed)" : "");
  fmt::print("          category={} references={}", sq.target_category, sq.references.size());
  if (sq.eps_km) fmt::print(" eps_km={:.3f}", *sq.eps_km);
  fmt::print("\n");
  fmt::print("          spatial_requirement : {}\n", res.parsed.intent.spatial_requirement);
  fmt::print("          semantic_requirement: {}\n", res.parsed.intent.semantic_requirement);

  fmt::print("[2 retrieve] |C_s| = {}\n", res.sparse_candidate_count);
  if (res.candidates.empty()) {
    fmt::print("no candidates; pipeline stops at retrieval\n");
    return kExitOk;
  }

  fmt::print("[3 score] {} candidates after semantic filter\n", res.candidates.size());
  fmt::print("          {:<14} {:>8} {:>8} {:>8} {:>8}\n", "id", "dist_km", "f_sp", "f_dn",
             "f_sem");
  for (const auto& c : res.candidates)
    fmt::print("          {:<14} {:>8.3f} {:>8.4f} {:>8.4f} {:>8.4f}\n", c.poi_id, c.distance_km,
               c.f_sparse, c.f_dense_spatial, c.f_semantic);

  fmt::print("[4 frontier] {} member(s):", res.frontier.size());
  for (const auto& p : res.frontier) fmt::print(" {}", p.poi_id);
  fmt::print("\n");

  if (res.weights)
    fmt::print("[5 weights] lambda_s={:.4f} lambda_k={:.4f}\n", res.weights->lambda_s,
               res.weights->lambda_k);
  else
    fmt::print("[5 weights] llm rerank path\n");

  fmt::print("[6 ranking]\n");
  int rank = 1;
  for (const auto& id : res.ranking) fmt::print("  {}. {}\n", rank++, id);
  return kExitOk;
}

int cmd_eval(const std::string& qa_path, const CommonOpts& o, const std::string& k_csv,
             const std::string& baselines_csv, const std::string& out_path,
             const std::string& csv_path) {
  std::vector<int> k_list;
  {
    std::string cur;
    for (char c : k_csv + ",") {
      if (c == ',') {
        if (!cur.empty()) k_list.push_back(std::stoi(cur));
        cur.clear();
      } else {
        cur.push_back(c);
      }
    }
  }
  if (k_list.empty()) throw ValidationError("--k must list at least one cutoff");
  int max_k = *std::max_element(k_list.begin(), k_list.end());

  std::vector<BaselineKind> baselines;
  if (!baselines_csv.empty()) {
    std::string cur;
    for (char c : baselines_csv + ",") {
      if (c == ',') {
        if (!cur.empty()) baselines.push_back(baseline_from_string(cur));
        cur.clear();
      } else {
        cur.push_back(c);
      }
    }
  }

  LoadedEngine le = load_engine(o, max_k);
  std::vector<QaPair> qa = load_qa_pairs(qa_path, *le.corpus);

  auto parse_for = [&](const QaPair& q) {
    std::vector<geo::Coord> pts = q.reference_points;
    if (q.reference_name) {
      auto g = resolve_geometry(*q.reference_name, le.corpus->gazetteer(),
                                [&](const std::string& n) -> std::optional<geo::Geometry> {
                                  const PoiRecord* r = le.corpus->find_by_name(n);
                                  if (!r) return std::nullopt;
                                  return r->geometry;
                                });
      if (!g.areal()) pts.push_back(geo::bounds(g).center());
    }
    for (const auto& c : le.engine->resolve_reference_points(q.question)) pts.push_back(c);
    return parse_rule_based(q.question, pts, le.corpus->gazetteer());
  };

  Ranker pipeline_ranker = [&](const QaPair& q) {
    return le.engine->run(q.question, q.reference_points).ranking;
  };

  std::string fingerprint = le.engine->config().fingerprint();
  std::map<std::string, MetricReport> reports;
  reports.emplace("pipeline", evaluate(pipeline_ranker, qa, k_list, fingerprint));
  for (BaselineKind b : baselines) {
    std::string name = b == BaselineKind::SD ? "SD" : (b == BaselineKind::TE ? "TE" : "ST");
    Ranker r = [&, b](const QaPair& q) {
      return run_baseline(b, parse_for(q), *le.corpus, *le.embedder);
    };
    reports.emplace(name, evaluate(r, qa, k_list, fingerprint + ":" + name));
  }

  if (o.format == "json") {
    json out;
    for (const auto& [name, rep] : reports) out[name] = rep.to_json();
    fmt::print("{}\n", out.dump(2));
  } else {
    fmt::print("{:<10} {:<4}", "metric", "k");
    for (const auto& [name, _] : reports) fmt::print(" {:>10}", name);
    fmt::print("\n");
    for (const char* metric : {"precision", "recall", "f1", "ndcg"}) {
      for (int k : k_list) {
        fmt::print("{:<10} {:<4}", metric, k);
        for (const auto& [name, rep] : reports) fmt::print(" {:>10.4f}", rep.macro.at(metric).at(k));
        fmt::print("\n");
      }
    }
  }
  if (!out_path.empty()) {
    json out;
    for (const auto& [name, rep] : reports) out[name] = rep.to_json();
    std::ofstream f(out_path);
    f << out.dump(2) << "\n";
  }
  if (!csv_path.empty()) {
    std::ofstream f(csv_path);
    f << reports.at("pipeline").to_csv();
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"geospatial retrieval and ranking engine"};
  app.require_subcommand(1);

  CommonOpts ingest_opts, query_opts, eval_opts, explain_opts;
  std::string poi_path, gazetteer_path, categories_csv;
  std::string question, dsl_expr, qa_path, k_csv = "1,3,5,10", baselines_csv, out_path, csv_path;
  std::string explain_question, explain_dsl;
  bool verify = false;

  auto* ing = app.add_subcommand("ingest", "build a store from GeoJSON inputs");
  ing->add_option("--poi", poi_path, "POI FeatureCollection")->required();
  ing->add_option("--gazetteer", gazetteer_path, "gazetteer FeatureCollection");
  ing->add_option("--categories", categories_csv, "comma-separated known categories");
  add_common_flags(ing, ingest_opts);

  auto* qry = app.add_subcommand("query", "answer one question");
  qry->add_option("question", question, "natural-language question");
  qry->add_option("--dsl", dsl_expr, "DSL expression (bypasses NL parsing)");
  qry->add_flag("--verify", verify, "re-check the spatial predicate on every answer");
  add_common_flags(qry, query_opts);

  auto* evl = app.add_subcommand("eval", "run metrics over a QA file");
  evl->add_option("--qa", qa_path, "QA pairs, JSON lines")->required();
  evl->add_option("--k", k_csv, "comma-separated cutoffs");
  evl->add_option("--baselines", baselines_csv, "comma-separated: SD,TE,ST");
  evl->add_option("--out", out_path, "write the JSON report here");
  evl->add_option("--csv", csv_path, "write the pipeline CSV report here");
  add_common_flags(evl, eval_opts);

  auto* exp = app.add_subcommand("explain", "trace one question through the pipeline stages");
  exp->add_option("question", explain_question, "natural-language question");
  exp->add_option("--dsl", explain_dsl, "DSL expression");
  add_common_flags(exp, explain_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (ing->parsed()) return cmd_ingest(poi_path, gazetteer_path, ingest_opts, categories_csv);
    if (qry->parsed()) return cmd_query(question, dsl_expr, query_opts, verify);
    if (evl->parsed()) return cmd_eval(qa_path, eval_opts, k_csv, baselines_csv, out_path, csv_path);
    if (exp->parsed()) return cmd_explain(explain_question, explain_dsl, explain_opts);
  } catch (const TransportError& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitService;
  } catch (const Error& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitUsage;
  }
  return kExitUsage;
}
