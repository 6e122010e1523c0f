// Copyright 2026 The tempaug Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "tempaug/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "tempaug/bench.hpp"
#include "tempaug/checkpoint.hpp"
#include "tempaug/walks.hpp"

namespace tempaug::cli {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr const char* kGridHelp =
    "Tuning grids: layers {2,4,8,16,32}, lambda {0.5,1.0,1.5}, alpha {0.1,0.3,0.5}, dropout {0.1,0.3,0.5}, "
    "skip {true,false}, variant {true,false}.";

// Records which flags were given so they can be layered over a config file.
class FlagSet {
 public:
  template <typename T>
  void option(CLI::App& app, const std::string& flag, const std::string& key, const std::string& help) {
    auto holder = std::make_shared<T>();
    auto* opt = app.add_option(flag, *holder, help);
    bindings_.push_back({opt, [holder, key](json& j) { j[key] = *holder; }});
  }

  // Boolean switch; `--flag` sets key = !invert, `--flag=false` the opposite.
  void flag(CLI::App& app, const std::string& flag, const std::string& key, const std::string& help,
            bool invert = false) {
    auto holder = std::make_shared<bool>(false);
    auto* opt = app.add_flag(flag, *holder, help);
    bindings_.push_back({opt, [holder, key, invert](json& j) { j[key] = invert ? !*holder : *holder; }});
  }

  json given() const {
    json j = json::object();
    for (const auto& b : bindings_)
      if (b.opt->count() > 0) b.emit(j);
    return j;
  }

 private:
  struct Binding {
    CLI::Option* opt;
    std::function<void(json&)> emit;
  };
  std::vector<Binding> bindings_;
};

const std::vector<std::string>& data_keys() {
  static const std::vector<std::string> keys{"synthetic", "edges", "labels", "T",         "n",
                                             "blocks",    "p_in",  "p_out",  "drift", "data_seed"};
  return keys;
}

json data_defaults() {
  const DsbmParams d;
  return json{{"synthetic", false}, {"edges", ""},       {"labels", ""},   {"T", d.n_steps},
              {"n", d.n_nodes},     {"blocks", d.n_blocks}, {"p_in", d.p_in}, {"p_out", d.p_out},
              {"drift", d.drift},   {"data_seed", d.seed}};
}

void add_data_flags(CLI::App& app, FlagSet& flags) {
  flags.option<std::string>(app, "--edges", "edges", "Edge stream TSV: u v timestamp");
  flags.option<std::string>(app, "--labels", "labels", "Label TSV: v timestamp class");
  flags.option<std::size_t>(app, "--T", "T", "Number of snapshots");
  flags.flag(app, "--synthetic", "synthetic", "Use a dynamic stochastic block model instead of files");
  flags.option<std::size_t>(app, "--n", "n", "Synthetic: node count");
  flags.option<std::size_t>(app, "--blocks", "blocks", "Synthetic: block count");
  flags.option<double>(app, "--p-in", "p_in", "Synthetic: intra-block edge probability");
  flags.option<double>(app, "--p-out", "p_out", "Synthetic: inter-block edge probability");
  flags.option<double>(app, "--drift", "drift", "Synthetic: per-step block switch probability");
  flags.option<std::uint64_t>(app, "--data-seed", "data_seed", "Synthetic: generator seed");
}

void add_train_flags(CLI::App& app, FlagSet& flags) {
  flags.option<std::string>(app, "--realization", "realization", "full | self_evolution | disentangled");
  flags.flag(app, "--static", "time_augmentation", "Diagonal-only graph (no time augmentation)", true);
  flags.flag(app, "--uniform-transition", "adaptive_transition", "Mean aggregation instead of attention", true);
  flags.flag(app, "--untie-embedding", "tie_embedding", "Separate H0 projection from the attention theta_r", true);
  flags.option<std::size_t>(app, "--layers", "layers", "Propagation layers L");
  flags.option<std::size_t>(app, "--dim", "dim", "Hidden dimension F");
  flags.option<double>(app, "--alpha", "alpha", "Initial-residual weight");
  flags.option<double>(app, "--lambda", "lambda", "beta_l = lambda / l");
  flags.flag(app, "--variant", "variant", "Separate weights for aggregated and residual terms");
  flags.flag(app, "--skip", "skip", "Skip connection");
  flags.option<double>(app, "--dropout", "dropout", "Embedding dropout");
  flags.option<double>(app, "--decoder-dropout", "decoder_dropout", "Decoder dropout");
  flags.option<double>(app, "--leaky-slope", "leaky_slope", "Attention LeakyReLU slope");
  flags.option<std::size_t>(app, "--epochs", "epochs", "Training epochs");
  flags.option<double>(app, "--lr", "lr", "Learning rate");
  flags.option<double>(app, "--wd", "wd", "Weight decay (L2, biases excluded)");
  flags.option<double>(app, "--plateau-factor", "plateau_factor", "LR decay factor on plateau");
  flags.option<std::size_t>(app, "--plateau-patience", "plateau_patience", "Epochs without improvement");
  flags.option<double>(app, "--min-lr", "min_lr", "Learning-rate floor");
  flags.option<std::uint64_t>(app, "--seed", "seed", "Seed for initialization and dropout");
  flags.option<std::string>(app, "--pooling", "pooling", "pooled | per_step macro-AUC");
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ValidationError("config " + path + ": " + e.what());
  }
}

void merge_into(json& base, const json& over) {
  for (const auto& [k, v] : over.items()) base[k] = v;
}

void reject_unknown(const json& j, const std::vector<std::vector<std::string>>& key_sets) {
  for (const auto& [key, value] : j.items()) {
    bool known = key == "command";
    for (const auto& set : key_sets) known = known || std::find(set.begin(), set.end(), key) != set.end();
    if (!known) throw ValidationError("config: unknown key '" + key + "'");
  }
}

template <typename T>
T get(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("config: bad value for '") + key + "': " + e.what());
  }
}

SnapshotSequence load_data(const json& cfg, Warnings& warnings) {
  const auto steps = get<std::size_t>(cfg, "T");
  if (get<bool>(cfg, "synthetic")) {
    DsbmParams p{get<std::size_t>(cfg, "n"),   steps,
                 get<std::size_t>(cfg, "blocks"), get<double>(cfg, "p_in"),
                 get<double>(cfg, "p_out"),  get<double>(cfg, "drift"),
                 get<std::uint64_t>(cfg, "data_seed")};
    return synth_dsbm(p);
  }
  const auto edges = get<std::string>(cfg, "edges");
  const auto labels = get<std::string>(cfg, "labels");
  if (edges.empty() || labels.empty()) throw ValidationError("data: need --edges and --labels, or --synthetic");
  return load_edge_stream(edges, labels, steps, &warnings);
}

std::string default_split(std::size_t steps) {
  const std::size_t k = std::max<std::size_t>(1, steps / 4);
  if (steps < 3) return "1,1,1";
  return std::to_string(steps - 2 * k) + "," + std::to_string(k) + "," + std::to_string(k);
}

fs::path resolve_out(const std::string& flag_value) {
  fs::path out = flag_value;
  if (out.empty()) {
    const char* env = std::getenv(kOutDirEnv);
    out = env != nullptr && *env != '\0' ? env : "out";
  }
  fs::create_directories(out);
  return out;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text << '\n';
}

void print_warnings(const Warnings& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
}

json resolve(const std::string& command, const std::string& config_path, const json& defaults, const json& given,
             const std::vector<std::vector<std::string>>& key_sets) {
  json cfg = defaults;
  if (!config_path.empty()) {
    const json file = read_json_file(config_path);
    if (!file.is_object()) throw ValidationError("config: expected a JSON object");
    reject_unknown(file, key_sets);
    merge_into(cfg, file);
  }
  merge_into(cfg, given);
  cfg["command"] = command;
  return cfg;
}

// ---- subcommands ----

int cmd_synth(const json& cfg, const fs::path& out) {
  Warnings warnings;
  json data = cfg;
  data["synthetic"] = true;
  const SnapshotSequence seq = load_data(data, warnings);
  write_edge_stream(seq, out / "edges.tsv", out / "labels.tsv");
  write_node_map(seq, out / "node_map.tsv");
  write_text(out / "config.resolved.json", cfg.dump(2));
  std::size_t edges = 0;
  for (const auto& s : seq.snapshots) edges += s.n_edges();
  std::cout << "synth: N=" << seq.n_nodes << " T=" << seq.n_steps << " C=" << seq.n_classes << " edges=" << edges
            << " -> " << out.string() << '\n';
  return kExitOk;
}

void write_augmented(const AugmentedGraph& g, const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "# src_idx\tdst_idx\tblock_tag\n";
  for (const auto& e : g.edges())
    out << e.src << '\t' << e.dst << '\t' << (e.tag == BlockTag::Diagonal ? "diagonal" : "cross") << '\n';
}

int cmd_augment(const json& cfg, const fs::path& out) {
  Warnings warnings;
  const SnapshotSequence seq = load_data(cfg, warnings);
  print_warnings(warnings);
  const auto realization = parse_realization(get<std::string>(cfg, "realization"));
  const TimeAugmentedGraph g = build_augmented(seq, realization);
  if (realization == Realization::Disentangled) {
    write_augmented(g.structural(), out / "augmented_structural.tsv");
    write_augmented(g.temporal(), out / "augmented_temporal.tsv");
  } else {
    write_augmented(g.joint(), out / "augmented.tsv");
  }
  write_text(out / "config.resolved.json", cfg.dump(2));
  std::cout << "augment: " << to_string(realization) << " node-times=" << seq.n_nodes * seq.n_steps
            << " edges=" << g.n_edges() << " -> " << out.string() << '\n';
  return kExitOk;
}

int cmd_train(const json& cfg, const fs::path& out) {
  Warnings warnings;
  const TrainConfig tc = train_config_from_json(cfg, {}, [] {
    auto extra = data_keys();
    extra.insert(extra.end(), {"split", "command"});
    return extra;
  }());
  const SnapshotSequence seq = load_data(cfg, warnings);
  const Split split = build_split(seq, SplitSpec::parse(get<std::string>(cfg, "split")));
  write_text(out / "config.resolved.json", cfg.dump(2));

  FitResult fr = fit(seq, split, tc);
  warnings.insert(warnings.end(), fr.warnings.begin(), fr.warnings.end());
  print_warnings(warnings);
  write_history_csv(fr.history, out / "history.csv");
  if (!seq.node_ids.empty()) write_node_map(seq, out / "node_map.tsv");

  json data;
  for (const auto& k : data_keys()) data[k] = cfg.at(k);
  data["split"] = cfg.at("split");
  save_checkpoint(out / "checkpoint.json",
                  Checkpoint{tc, fr.best_params, seq.features.dim, seq.n_classes, fr.best_epoch, data});

  const ModelGraph graph = prepare_graph(seq, tc.model);
  const EvalReport val = evaluate(seq, graph, fr.best_params, tc.model, split.val, tc.pooling);
  const EvalReport test = evaluate(seq, graph, fr.best_params, tc.model, split.test, tc.pooling);
  json report{{"val", json::parse(to_json(val, "val"))},
              {"test", json::parse(to_json(test, "test"))},
              {"best_epoch", fr.best_epoch ? json(*fr.best_epoch) : json(nullptr)},
              {"config", to_json(tc)}};
  write_text(out / "report.json", report.dump(2));
  write_per_class_csv(test, out / "per_class.csv");
  std::cout << "train: " << to_string(tc.model.realization) << " epochs=" << tc.epochs << " best_epoch="
            << (fr.best_epoch ? std::to_string(*fr.best_epoch) : "-") << " val_macro_auc=" << val.macro_auc
            << " test_macro_auc=" << test.macro_auc << " -> " << out.string() << '\n';
  return kExitOk;
}

int cmd_eval(const std::string& checkpoint_path, const std::string& partition, json given, const fs::path& out) {
  Checkpoint ck = load_checkpoint(checkpoint_path);
  json cfg = data_defaults();
  cfg["split"] = "";
  merge_into(cfg, ck.data);
  if (given.contains("pooling")) {
    ck.config = train_config_from_json(json{{"pooling", given["pooling"]}}, ck.config);
    given.erase("pooling");
  }
  merge_into(cfg, given);
  cfg["checkpoint"] = checkpoint_path;
  cfg["partition"] = partition;
  cfg["command"] = "eval";

  Warnings warnings;
  const SnapshotSequence seq = load_data(cfg, warnings);
  print_warnings(warnings);
  if (seq.features.dim != ck.feature_dim) throw ValidationError("eval: data feature dim does not match checkpoint");
  if (cfg["split"].get<std::string>().empty()) cfg["split"] = default_split(seq.n_steps);
  const Split split = build_split(seq, SplitSpec::parse(cfg["split"].get<std::string>()));
  const auto& rows = partition == "train" ? split.train : partition == "val" ? split.val : split.test;
  const ModelGraph graph = prepare_graph(seq, ck.config.model);
  const EvalReport report = evaluate(seq, graph, ck.params, ck.config.model, rows, ck.config.pooling);
  print_warnings(report.warnings);
  write_text(out / "config.resolved.json", cfg.dump(2));
  write_text(out / "eval_report.json", to_json(report, partition));
  write_per_class_csv(report, out / "eval_per_class.csv");
  std::cout << "eval: " << partition << " macro_auc=" << report.macro_auc << " n=" << report.n_examples << " -> "
            << out.string() << '\n';
  return kExitOk;
}

int cmd_verify(const json& cfg, const fs::path& out) {
  Warnings warnings;
  const SnapshotSequence seq = load_data(cfg, warnings);
  print_warnings(warnings);
  const auto realization = parse_realization(get<std::string>(cfg, "realization"));
  const auto max_len = get<std::size_t>(cfg, "max_len");
  const CorrespondenceReport r = verify_correspondence(seq, realization, max_len);
  json j{{"realization", to_string(realization)},
         {"injective_map_ok", r.injective_map_ok},
         {"reachability_ok", r.reachability_ok},
         {"counterexample", r.counterexample ? json(*r.counterexample) : json(nullptr)},
         {"temporal_walks", r.n_temporal_walks},
         {"augmented_walks", r.n_augmented_walks}};
  write_text(out / "config.resolved.json", cfg.dump(2));
  write_text(out / "verify.json", j.dump(2));
  std::cout << "verify: " << to_string(realization) << " injective_map_ok=" << r.injective_map_ok
            << " reachability_ok=" << r.reachability_ok << " temporal_walks=" << r.n_temporal_walks
            << (r.counterexample ? " counterexample: " + *r.counterexample : "") << '\n';
  return r.ok() ? kExitOk : kExitRuntime;
}

std::vector<bool> choices(const std::string& value, const char* name) {
  if (value == "all") return {false, true};
  if (value == "on") return {true};
  if (value == "off") return {false};
  throw ValidationError(std::string("gradcheck: --") + name + " must be all|on|off");
}

int cmd_gradcheck(const json& cfg, const fs::path& out) {
  std::vector<Realization> realizations;
  const auto r = get<std::string>(cfg, "realization");
  if (r == "all")
    realizations = {Realization::Full, Realization::SelfEvolution, Realization::Disentangled};
  else
    realizations = {parse_realization(r)};
  double worst = 0.0;
  std::string worst_where;
  std::size_t checked = 0;
  json runs = json::array();
  for (Realization real : realizations) {
    for (bool variant : choices(get<std::string>(cfg, "variant"), "variant")) {
      for (bool skip : choices(get<std::string>(cfg, "skip"), "skip")) {
        GradCheckConfig gc;
        gc.realization = real;
        gc.variant = variant;
        gc.skip = skip;
        gc.seed = get<std::uint64_t>(cfg, "seed");
        gc.n_nodes = get<std::size_t>(cfg, "nodes");
        gc.n_steps = get<std::size_t>(cfg, "steps");
        gc.hidden_dim = get<std::size_t>(cfg, "dim");
        gc.n_layers = get<std::size_t>(cfg, "layers");
        gc.n_blocks = std::min<std::size_t>(3, gc.n_nodes);
        gc.dropout = get<double>(cfg, "dropout");
        gc.decoder_dropout = gc.dropout;
        const GradCheckResult res = gradient_check(gc);
        checked += res.n_checked;
        runs.push_back({{"realization", to_string(real)},
                        {"variant", variant},
                        {"skip", skip},
                        {"max_rel_error", res.max_rel_error},
                        {"worst_entry", res.worst_entry},
                        {"entries", res.n_checked}});
        if (res.max_rel_error >= worst) {
          worst = res.max_rel_error;
          worst_where = to_string(real) + (variant ? "/variant" : "") + (skip ? "/skip" : "") + " " + res.worst_entry;
        }
      }
    }
  }
  write_text(out / "config.resolved.json", cfg.dump(2));
  write_text(out / "gradcheck.json", json{{"max_rel_error", worst}, {"runs", runs}}.dump(2));
  std::cout << "gradcheck: max relative error " << worst << " over " << checked << " entries (worst: " << worst_where
            << ")\n";
  return worst < 1e-5 ? kExitOk : kExitRuntime;
}

int cmd_bench(const json& cfg, const fs::path& out) {
  std::vector<std::size_t> t_values;
  {
    std::stringstream in(get<std::string>(cfg, "T_values"));
    std::string item;
    while (std::getline(in, item, ',')) {
      try {
        t_values.push_back(std::stoul(item));
      } catch (const std::exception&) {
        throw ValidationError("bench: bad --T-values entry '" + item + "'");
      }
    }
  }
  if (t_values.empty()) throw ValidationError("bench: --T-values is empty");
  BenchConfig bc;
  bc.train.model.realization = parse_realization(get<std::string>(cfg, "realization"));
  bc.train.model.propagation.hidden_dim = get<std::size_t>(cfg, "dim");
  bc.train.model.propagation.n_layers = get<std::size_t>(cfg, "layers");
  bc.train.seed = get<std::uint64_t>(cfg, "seed");
  bc.n_epochs = get<std::size_t>(cfg, "epochs");
  bc.warmup_epochs = get<std::size_t>(cfg, "warmup");
  DsbmParams base{get<std::size_t>(cfg, "n"),  0, get<std::size_t>(cfg, "blocks"), get<double>(cfg, "p_in"),
                  get<double>(cfg, "p_out"), get<double>(cfg, "drift"), get<std::uint64_t>(cfg, "data_seed")};
  const BenchReport report = measure_epoch_time(
      [&](std::size_t steps) {
        DsbmParams p = base;
        p.n_steps = steps;
        return synth_dsbm(p);
      },
      t_values, bc);
  DsbmParams largest = base;
  largest.n_steps = *std::max_element(t_values.begin(), t_values.end());
  const ComplexityAudit audit = complexity_audit(synth_dsbm(largest), bc.train.model);
  json bench = json::parse(to_json(report));
  bench["audit"] = {{"T", largest.n_steps},
                    {"stored_edges", audit.stored_edges},
                    {"predicted_edges_mean_snapshot", audit.predicted_edges_per_snapshot_e},
                    {"predicted_edges_all_snapshots", audit.predicted_edges_total_e},
                    {"edges_within_bound_mean_snapshot", audit.edges_ok_per_snapshot_e()},
                    {"edges_within_bound_all_snapshots", audit.edges_ok_total_e()},
                    {"propagation_parameters", audit.propagation_parameters},
                    {"predicted_parameters", audit.predicted_parameters},
                    {"activation_entries", audit.activation_entries},
                    {"predicted_activations", audit.predicted_activations},
                    {"sequential_stages", audit.sequential_stages}};
  write_text(out / "config.resolved.json", cfg.dump(2));
  write_text(out / "bench.json", bench.dump(2));
  write_bench_csv(report, out / "bench.csv");
  std::cout << "bench: " << to_string(report.realization) << " slope="
            << (report.slope ? std::to_string(*report.slope) : std::string("MISSING"));
  for (const auto& p : report.points) std::cout << " T" << p.n_steps << "=" << p.mean_epoch_seconds << "s";
  std::cout << '\n';
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{std::string("Time-augmented dynamic graph node classification.\n") + kGridHelp, "tempaug"};
  app.require_subcommand(1);
  std::string out_flag;

  struct Command {
    CLI::App* app;
    FlagSet flags;
    std::string config_path;
  };
  auto add = [&](const char* name, const char* help) {
    auto c = std::make_unique<Command>();
    c->app = app.add_subcommand(name, help);
    c->app->add_option("--out", out_flag, std::string("Output directory (default $") + kOutDirEnv + " or ./out)");
    return c;
  };

  auto synth = add("synth", "Generate a synthetic dynamic SBM edge stream");
  add_data_flags(*synth->app, synth->flags);

  auto augment = add("augment", "Emit the time-augmented edge list");
  add_data_flags(*augment->app, augment->flags);
  augment->flags.option<std::string>(*augment->app, "--realization", "realization", "full | self_evolution | disentangled");

  auto train = add("train", std::string("Train and evaluate. ").append(kGridHelp).c_str());
  add_data_flags(*train->app, train->flags);
  add_train_flags(*train->app, train->flags);
  train->flags.option<std::string>(*train->app, "--split", "split", "train,val,test snapshot counts");
  train->app->add_option("--config", train->config_path, "JSON config; flags override its values");

  auto eval = add("eval", "Evaluate a checkpoint");
  std::string checkpoint_path, partition = "test";
  eval->app->add_option("--checkpoint", checkpoint_path, "checkpoint.json from train")->required();
  eval->app->add_option("--partition", partition, "train | val | test")
      ->check(CLI::IsMember({"train", "val", "test"}));
  add_data_flags(*eval->app, eval->flags);
  eval->flags.option<std::string>(*eval->app, "--split", "split", "train,val,test snapshot counts");
  eval->flags.option<std::string>(*eval->app, "--pooling", "pooling", "pooled | per_step");

  auto verify = add("verify", "Check walk correspondence by brute-force enumeration");
  add_data_flags(*verify->app, verify->flags);
  verify->flags.option<std::string>(*verify->app, "--realization", "realization", "full | self_evolution | disentangled");
  verify->flags.option<std::size_t>(*verify->app, "--max-len", "max_len", "Maximum walk length");

  auto gradcheck = add("gradcheck", "Compare gradients with central finite differences");
  auto& gf = gradcheck->flags;
  gf.option<std::uint64_t>(*gradcheck->app, "--seed", "seed", "Instance seed");
  gf.option<std::string>(*gradcheck->app, "--realization", "realization", "all | full | self_evolution | disentangled");
  gf.option<std::string>(*gradcheck->app, "--variant", "variant", "all | on | off");
  gf.option<std::string>(*gradcheck->app, "--skip", "skip", "all | on | off");
  gf.option<std::size_t>(*gradcheck->app, "--nodes", "nodes", "Node count");
  gf.option<std::size_t>(*gradcheck->app, "--steps", "steps", "Snapshot count");
  gf.option<std::size_t>(*gradcheck->app, "--dim", "dim", "Hidden dimension");
  gf.option<std::size_t>(*gradcheck->app, "--layers", "layers", "Propagation layers");
  gf.option<double>(*gradcheck->app, "--dropout", "dropout", "Dropout with fixed masks");

  auto bench = add("bench", "Epoch time versus number of snapshots");
  auto& bf = bench->flags;
  bf.option<std::string>(*bench->app, "--T-values", "T_values", "Comma-separated snapshot counts");
  bf.option<std::size_t>(*bench->app, "--n", "n", "Node count");
  bf.option<std::size_t>(*bench->app, "--blocks", "blocks", "Block count");
  bf.option<double>(*bench->app, "--p-in", "p_in", "Intra-block edge probability");
  bf.option<double>(*bench->app, "--p-out", "p_out", "Inter-block edge probability");
  bf.option<double>(*bench->app, "--drift", "drift", "Block drift");
  bf.option<std::uint64_t>(*bench->app, "--data-seed", "data_seed", "Generator seed");
  bf.option<std::string>(*bench->app, "--realization", "realization", "self_evolution | disentangled | full");
  bf.option<std::size_t>(*bench->app, "--dim", "dim", "Hidden dimension");
  bf.option<std::size_t>(*bench->app, "--layers", "layers", "Propagation layers");
  bf.option<std::size_t>(*bench->app, "--epochs", "epochs", "Timed epochs per T");
  bf.option<std::size_t>(*bench->app, "--warmup", "warmup", "Discarded warmup epochs");
  bf.option<std::uint64_t>(*bench->app, "--seed", "seed", "Model seed");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    const fs::path out = resolve_out(out_flag);
    if (synth->app->parsed()) {
      json defaults = data_defaults();
      return cmd_synth(resolve("synth", "", defaults, synth->flags.given(), {}), out);
    }
    if (augment->app->parsed()) {
      json defaults = data_defaults();
      defaults["realization"] = "self_evolution";
      return cmd_augment(resolve("augment", "", defaults, augment->flags.given(), {}), out);
    }
    if (train->app->parsed()) {
      json defaults = data_defaults();
      merge_into(defaults, to_json(TrainConfig{}));
      defaults["split"] = "";
      json cfg = resolve("train", train->config_path, defaults, train->flags.given(),
                         {data_keys(), train_config_keys(), {"split"}});
      if (cfg["split"].get<std::string>().empty()) cfg["split"] = default_split(get<std::size_t>(cfg, "T"));
      return cmd_train(cfg, out);
    }
    if (eval->app->parsed()) return cmd_eval(checkpoint_path, partition, eval->flags.given(), out);
    if (verify->app->parsed()) {
      json defaults = data_defaults();
      defaults["realization"] = "self_evolution";
      defaults["max_len"] = 3;
      return cmd_verify(resolve("verify", "", defaults, verify->flags.given(), {}), out);
    }
    if (gradcheck->app->parsed()) {
      const GradCheckConfig d;
      json defaults{{"seed", 1},        {"realization", "all"}, {"variant", "all"},      {"skip", "all"},
                    {"nodes", d.n_nodes}, {"steps", d.n_steps},   {"dim", d.hidden_dim}, {"layers", d.n_layers},
                    {"dropout", 0.0}};
      return cmd_gradcheck(resolve("gradcheck", "", defaults, gradcheck->flags.given(), {}), out);
    }
    if (bench->app->parsed()) {
      json defaults{{"T_values", "2,4,8,16"}, {"n", 500},        {"blocks", 4},     {"p_in", 0.05},
                    {"p_out", 0.005},         {"drift", 0.1},    {"data_seed", 7},  {"realization", "self_evolution"},
                    {"dim", 32},              {"layers", 4},     {"epochs", 5},     {"warmup", 3},
                    {"seed", 0}};
      return cmd_bench(resolve("bench", "", defaults, bench->flags.given(), {}), out);
    }
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitValidation;
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args);
}

}  // namespace tempaug::cli
