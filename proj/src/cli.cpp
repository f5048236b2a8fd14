/*
 * Copyright 2026 The wshap authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "wshap/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>
#include <string>

#include "wshap/amortized.hpp"
#include "wshap/dataset.hpp"
#include "wshap/estimators.hpp"
#include "wshap/evaluation.hpp"
#include "wshap/knn_game.hpp"
#include "wshap/oracle.hpp"
#include "wshap/serialize.hpp"
#include "wshap/surrogate.hpp"

namespace wshap {
namespace {

using nlohmann::json;

// Shared settings; a JSON config file supplies defaults, explicit flags win.
struct GlobalArgs {
  double alpha = 1.0;
  double beta = 1.0;
  std::uint64_t seed = 0;
  std::string out;
  std::string config_path;
};

template <typename T>
void overlay(const json& config, const CLI::Option* opt, const std::string& key, T& value) {
  if (opt != nullptr && opt->count() == 0 && config.contains(key)) {
    value = config.at(key).get<T>();
  }
}

json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  return read_json_file(path);
}

json config_echo(const std::string& subcommand, const GlobalArgs& g) {
  return json{{"subcommand", subcommand},
              {"alpha", g.alpha},
              {"beta", g.beta},
              {"seed", g.seed}};
}

void emit(const json& doc, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << doc.dump(2) << '\n';
  } else {
    write_json_file(doc, out_path);
  }
}

void emit_text(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(out_path);
    if (!f) throw std::runtime_error("cannot open for writing: " + out_path);
    f << text;
    if (!f) throw std::runtime_error("write failed: " + out_path);
  }
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stoi(item));
  }
  if (out.empty()) throw std::invalid_argument("empty integer list: " + text);
  return out;
}

struct DatasetTask {
  LabeledDataset data;
  Game game;
};

DatasetTask load_knn_task(const std::string& dataset_path, int k_neighbors) {
  LabeledDataset data = load_dataset_csv(dataset_path);
  Game game = knn_value_game(data, k_neighbors);
  return {std::move(data), std::move(game)};
}

int run_exact(const GlobalArgs& g, const std::string& game_spec, const std::string& dataset_path,
              int n, int k_neighbors) {
  std::optional<Game> game;
  if (!dataset_path.empty()) {
    game = load_knn_task(dataset_path, k_neighbors).game;
  } else if (!game_spec.empty()) {
    if (n < 2) throw std::invalid_argument("exact: --n is required with --game");
    game = make_synthetic_game(game_spec, n);
  } else {
    throw std::invalid_argument("exact: provide --game with --n, or --dataset");
  }
  const WeightScheme ws(game->players(), g.alpha, g.beta);
  const Attribution psi = exact_weighted_shapley(*game, ws);
  json doc = to_json(psi);
  doc["config"] = config_echo("exact", g);
  doc["config"]["game"] = game_spec.empty() ? "knn:" + dataset_path : game_spec;
  emit(doc, g.out);
  return 0;
}

int run_estimate(const GlobalArgs& g, const std::string& method, const std::string& game_spec,
                 const std::string& dataset_path, int n, int k_neighbors,
                 std::uint64_t n_samples, const std::optional<double>& constraint,
                 double ridge) {
  std::optional<Game> game;
  if (!dataset_path.empty()) {
    game = load_knn_task(dataset_path, k_neighbors).game;
  } else if (!game_spec.empty()) {
    if (n < 2) throw std::invalid_argument("estimate: --n is required with --game");
    game = make_synthetic_game(game_spec, n);
  } else {
    throw std::invalid_argument("estimate: provide --game with --n, or --dataset");
  }
  const WeightScheme ws(game->players(), g.alpha, g.beta);
  EstimatorConfig cfg;
  cfg.n_samples = n_samples;
  cfg.seed = g.seed;
  cfg.constraint_constant = constraint;
  cfg.ridge = ridge;

  Attribution psi;
  if (method == "mc") {
    psi = monte_carlo_semivalue(*game, ws, cfg);
  } else if (method == "wls") {
    psi = regression_estimate(*game, ws, cfg);
  } else {
    throw std::invalid_argument("estimate: --method must be mc or wls");
  }
  json doc = to_json(psi);
  doc["config"] = config_echo("estimate", g);
  doc["config"]["method"] = method;
  doc["config"]["n_samples"] = n_samples;
  emit(doc, g.out);
  return 0;
}

int run_train(const GlobalArgs& g, const std::string& head, const std::string& dataset_path,
              const TrainConfig& tc_in, int k_neighbors, int batch_size,
              const std::string& trace_path) {
  LabeledDataset data = load_dataset_csv(dataset_path);
  TrainConfig tc = tc_in;
  tc.seed = g.seed;

  json doc;
  TrainResult result;
  if (head == "attention") {
    AttentionTaskConfig task;
    task.batch_size = batch_size;
    task.k_neighbors = k_neighbors;
    task.seed = g.seed;
    AttentionHeadModel model = build_attention_task(data, task);
    const WeightScheme ws(model.players(), g.alpha, g.beta);
    tc.constraint_source = TrainConfig::ConstraintSource::kNone;
    result = train(model, ws, tc);
    doc = json{{"schema_version", kSchemaVersion},
               {"kind", "train_result"},
               {"head", "attention"},
               {"params", to_json(model.net())},
               {"converged", result.converged},
               {"final_loss", result.trace.back().loss + result.trace.back().reg_term}};
  } else if (head == "mlp") {
    // Self-contained feature-attribution pipeline: fit a base classifier,
    // distill it into a masked surrogate, then amortize the per-instance
    // masked games.
    const auto base = LinearSoftmaxClassifier::fit(data, 4000, 0.05, splitmix64(g.seed ^ 0xbace));
    SurrogateTrainConfig sc;
    sc.seed = splitmix64(g.seed ^ 0x50f7);
    const SurrogateModel surrogate = train_surrogate(data, base, sc).model;

    const auto train_rows = data.train_indices();
    const int d = data.dim();
    std::vector<MlpHeadModel::Instance> instances;
    const int count = std::min<int>(16, static_cast<int>(train_rows.size()));
    for (int i = 0; i < count; ++i) {
      const int row = train_rows[static_cast<std::size_t>(i)];
      const Eigen::VectorXd x = data.features.row(row).transpose();
      const int label = data.class_index(data.labels[static_cast<std::size_t>(row)]);
      instances.push_back({x, masked_feature_game(x, label, surrogate)});
    }
    Rng rng(splitmix64(g.seed ^ 0x91eadULL));
    MlpHeadModel model = MlpHeadModel::randomized(d, 64, d, std::move(instances), 0.5, rng);
    const WeightScheme ws(d, g.alpha, g.beta);
    result = train(model, ws, tc);
    doc = json{{"schema_version", kSchemaVersion},
               {"kind", "train_result"},
               {"head", "mlp"},
               {"params", to_json(model.net())},
               {"converged", result.converged},
               {"final_loss", result.trace.back().loss + result.trace.back().reg_term}};
  } else {
    throw std::invalid_argument("train: --head must be mlp or attention");
  }
  doc["config"] = config_echo("train", g);
  doc["config"]["head"] = head;
  doc["config"]["steps"] = tc.steps;
  emit(doc, g.out);
  if (!trace_path.empty()) {
    std::ostringstream os;
    write_csv(result.trace, os);
    emit_text(os.str(), trace_path);
  }
  return 0;
}

int run_audit(const GlobalArgs& g, int n, int num_seeds, int num_instances) {
  const WeightScheme ws(n, g.alpha, g.beta);
  json audits = json::array();
  int violations = 0;
  for (int s = 0; s < num_seeds; ++s) {
    const std::uint64_t seed = splitmix64(g.seed + static_cast<std::uint64_t>(s));
    std::vector<MlpHeadModel::Instance> instances;
    std::vector<Attribution> oracle;
    for (int z = 0; z < num_instances; ++z) {
      Game game = random_game(n, splitmix64(seed ^ static_cast<std::uint64_t>(z + 1)));
      Eigen::VectorXd input(4);
      Rng in_rng(splitmix64(seed ^ 0x1abe1ULL) + static_cast<std::uint64_t>(z));
      for (int i = 0; i < 4; ++i) input[i] = in_rng.normal();
      const double c = exact_weighted_shapley(game, ws).sum();
      oracle.push_back(exact_constrained_wls(game, ws, c));
      instances.push_back({input, std::move(game)});
    }
    Rng rng(seed);
    MlpHeadModel model = MlpHeadModel::randomized(4, 32, n, std::move(instances), 1.0, rng);
    const BoundAudit audit = audit_bound(model, ws, oracle);
    audits.push_back(to_json(audit));
    if (audit.violated) ++violations;
  }
  json doc{{"schema_version", kSchemaVersion},
           {"kind", "bound_audit_sweep"},
           {"n", n},
           {"seeds", num_seeds},
           {"violations", violations},
           {"audits", audits}};
  doc["config"] = config_echo("audit-bound", g);
  emit(doc, g.out);
  return 0;
}

int run_eval_noisy(const GlobalArgs& g, const std::string& dataset_path, double flip_fraction,
                   const std::string& valuator, int k_neighbors, std::uint64_t n_samples) {
  LabeledDataset data = load_dataset_csv(dataset_path);
  const int n = static_cast<int>(data.train_indices().size());
  const WeightScheme ws(n, g.alpha, g.beta);
  NoisyLabelConfig cfg;
  cfg.flip_fraction = flip_fraction;
  cfg.k_neighbors = k_neighbors;
  cfg.valuator = parse_valuator(valuator);
  cfg.n_samples = n_samples;
  cfg.seed = g.seed;
  const EvalReport report = eval_noisy_labels(data, ws, cfg);
  json doc = to_json(report);
  doc["config"] = config_echo("eval-noisy-labels", g);
  doc["config"]["valuator"] = valuator;
  doc["config"]["flip_fraction"] = flip_fraction;
  emit(doc, g.out);
  return 0;
}

int run_eval_inclusion(const GlobalArgs& g, const std::string& dataset_path,
                       const std::string& method, int max_instances, int surrogate_steps,
                       std::uint64_t n_samples) {
  LabeledDataset data = load_dataset_csv(dataset_path);
  const int d = data.dim();
  const auto base = LinearSoftmaxClassifier::fit(data, 4000, 0.05, splitmix64(g.seed ^ 0xbace));
  SurrogateTrainConfig sc;
  sc.steps = surrogate_steps;
  sc.seed = splitmix64(g.seed ^ 0x50f7);
  const SurrogateModel surrogate = train_surrogate(data, base, sc).model;

  const auto val_rows = data.val_indices();
  const int m = std::min<int>(max_instances, static_cast<int>(val_rows.size()));
  Eigen::MatrixXd instances(m, d);
  std::vector<int> labels(static_cast<std::size_t>(m));
  std::vector<std::vector<double>> attributions;
  const WeightScheme ws(d, g.alpha, g.beta);
  for (int i = 0; i < m; ++i) {
    const int row = val_rows[static_cast<std::size_t>(i)];
    instances.row(i) = data.features.row(row);
    const int label = data.class_index(data.labels[static_cast<std::size_t>(row)]);
    labels[static_cast<std::size_t>(i)] = label;
    Game game = masked_feature_game(instances.row(i).transpose(), label, surrogate);
    if (method == "exact") {
      attributions.push_back(exact_weighted_shapley(game, ws).values);
    } else if (method == "mc" || method == "wls") {
      EstimatorConfig ec;
      ec.n_samples = n_samples;
      ec.seed = splitmix64(g.seed + static_cast<std::uint64_t>(i));
      attributions.push_back(method == "mc" ? monte_carlo_semivalue(game, ws, ec).values
                                            : regression_estimate(game, ws, ec).values);
    } else {
      throw std::invalid_argument("eval-inclusion: --method must be exact, mc or wls");
    }
  }
  const EvalReport report = eval_inclusion_auc(instances, labels, attributions, surrogate);
  json doc = to_json(report);
  doc["config"] = config_echo("eval-inclusion", g);
  doc["config"]["method"] = method;
  emit(doc, g.out);
  return 0;
}

int run_weights_report(const GlobalArgs& g, int n) {
  const WeightScheme ws(n, g.alpha, g.beta);
  const AdjacentWeightReport report = adjacent_weight_report(ws);
  std::ostringstream os;
  write_csv(report, os);
  emit_text(os.str(), g.out);
  std::cerr << "weights-report: n=" << n << " alpha=" << g.alpha << " beta=" << g.beta
            << " gap_ratio=" << report.gap_ratio << " w_tilde(1)=" << report.w_tilde_first
            << " w_tilde(n)=" << report.w_tilde_last << "\n";
  return 0;
}

int run_hessian_report(const GlobalArgs& g, const std::string& ns_text) {
  std::vector<HessianReport> reports;
  for (int n : parse_int_list(ns_text)) {
    reports.push_back(hessian_report(WeightScheme(n, g.alpha, g.beta)));
  }
  std::ostringstream os;
  write_csv(reports, os);
  emit_text(os.str(), g.out);
  return 0;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"Beta-weighted Shapley valuation toolkit"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may appear after the subcommand

  GlobalArgs g;
  auto* opt_alpha = app.add_option("--alpha", g.alpha, "Beta weight alpha (> 0)");
  auto* opt_beta = app.add_option("--beta", g.beta, "Beta weight beta (> 0)");
  auto* opt_seed = app.add_option("--seed", g.seed, "random seed");
  auto* opt_out = app.add_option("--out", g.out, "output path (stdout when omitted)");
  app.add_option("--config", g.config_path, "JSON config file with flag defaults")
      ->check(CLI::ExistingFile);

  std::string game_spec, dataset_path, method = "mc", head = "mlp", valuator = "mc";
  std::string trace_path, ns_text = "8";
  int n = 0, k_neighbors = 5, num_seeds = 20, num_instances = 4, max_instances = 16;
  int surrogate_steps = 3000, batch_size = 10;
  std::uint64_t n_samples = 10000;
  double flip_fraction = 0.2, ridge = 1e-8;
  std::optional<double> constraint;
  TrainConfig tc;

  auto* cmd_exact = app.add_subcommand("exact", "exact weighted Shapley values (n <= 20)");
  auto* ex_game = cmd_exact->add_option("--game", game_spec, "synthetic game spec");
  auto* ex_n = cmd_exact->add_option("--n", n, "player count for --game");
  auto* ex_data = cmd_exact->add_option("--dataset", dataset_path, "dataset CSV (KNN game)")
                      ->check(CLI::ExistingFile);
  cmd_exact->add_option("--K", k_neighbors, "KNN neighbor count");

  auto* cmd_est = app.add_subcommand("estimate", "sampled semivalue estimators");
  auto* es_method = cmd_est->add_option("--method", method, "mc | wls");
  auto* es_game = cmd_est->add_option("--game", game_spec, "synthetic game spec");
  auto* es_n = cmd_est->add_option("--n", n, "player count for --game");
  auto* es_data = cmd_est->add_option("--dataset", dataset_path, "dataset CSV (KNN game)")
                      ->check(CLI::ExistingFile);
  cmd_est->add_option("--K", k_neighbors, "KNN neighbor count");
  auto* es_samples = cmd_est->add_option("--samples", n_samples, "sample budget");
  cmd_est->add_option("--constraint", constraint, "efficiency constant for wls");
  cmd_est->add_option("--ridge", ridge, "ridge stabilizer for wls");

  auto* cmd_train = app.add_subcommand("train", "train an amortized estimator");
  cmd_train->add_option("--head", head, "mlp | attention");
  cmd_train->add_option("--dataset", dataset_path, "dataset CSV")
      ->required()
      ->check(CLI::ExistingFile);
  cmd_train->add_option("--steps", tc.steps, "SGD steps");
  cmd_train->add_option("--lr", tc.lr, "learning rate");
  cmd_train->add_option("--gamma", tc.gamma, "efficiency-regularizer weight");
  cmd_train->add_option("--subsets", tc.subsets_per_instance, "subsets per instance per step");
  cmd_train->add_option("--batch", batch_size, "train batch size (attention head)");
  cmd_train->add_option("--K", k_neighbors, "KNN neighbor count (attention head)");
  cmd_train->add_option("--trace", trace_path, "loss trace CSV path");

  auto* cmd_audit = app.add_subcommand("audit-bound", "estimation-error bound audit");
  cmd_audit->add_option("--n", n, "player count")->required();
  cmd_audit->add_option("--seeds", num_seeds, "number of random-parameter seeds");
  cmd_audit->add_option("--instances", num_instances, "games per audit");

  auto* cmd_noisy = app.add_subcommand("eval-noisy-labels", "noisy-label detection protocol");
  cmd_noisy->add_option("--dataset", dataset_path, "dataset CSV")
      ->required()
      ->check(CLI::ExistingFile);
  auto* nl_flip = cmd_noisy->add_option("--flip-fraction", flip_fraction,
                                        "fraction of train labels to flip");
  auto* nl_valuator =
      cmd_noisy->add_option("--valuator", valuator, "exact | mc | wls | amortized | random");
  auto* nl_k = cmd_noisy->add_option("--K", k_neighbors, "KNN neighbor count");
  auto* nl_samples = cmd_noisy->add_option("--samples", n_samples, "budget for sampled valuators");

  auto* cmd_incl = app.add_subcommand("eval-inclusion", "inclusion-AUC protocol");
  cmd_incl->add_option("--dataset", dataset_path, "dataset CSV")
      ->required()
      ->check(CLI::ExistingFile);
  cmd_incl->add_option("--method", method, "exact | mc | wls");
  cmd_incl->add_option("--instances", max_instances, "number of evaluation instances");
  cmd_incl->add_option("--surrogate-steps", surrogate_steps, "surrogate training steps");
  cmd_incl->add_option("--samples", n_samples, "budget for sampled attributions");

  auto* cmd_weights = app.add_subcommand("weights-report", "adjacent-weight curves CSV");
  auto* wr_n = cmd_weights->add_option("--n", n, "player count")->required();

  auto* cmd_hess = app.add_subcommand("hessian-report", "subset-moment diagnostics CSV");
  auto* hr_n = cmd_hess->add_option("--n", ns_text, "player counts, comma separated");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == static_cast<int>(CLI::ExitCodes::Success)) {
      return app.exit(e);  // --help
    }
    std::cerr << e.what() << "\n";
    std::cerr << app.help() << "\n";
    return 1;
  }

  try {
    const json config = load_config(g.config_path);
    overlay(config, opt_alpha, "alpha", g.alpha);
    overlay(config, opt_beta, "beta", g.beta);
    overlay(config, opt_seed, "seed", g.seed);
    overlay(config, opt_out, "out", g.out);
    if (cmd_exact->parsed()) {
      overlay(config, ex_n, "n", n);
      overlay(config, ex_game, "game", game_spec);
      overlay(config, ex_data, "dataset", dataset_path);
    }
    if (cmd_est->parsed()) {
      overlay(config, es_n, "n", n);
      overlay(config, es_samples, "samples", n_samples);
      overlay(config, es_game, "game", game_spec);
      overlay(config, es_data, "dataset", dataset_path);
      overlay(config, es_method, "method", method);
    }
    if (cmd_noisy->parsed()) {
      overlay(config, nl_flip, "flip-fraction", flip_fraction);
      overlay(config, nl_valuator, "valuator", valuator);
      overlay(config, nl_k, "K", k_neighbors);
      overlay(config, nl_samples, "samples", n_samples);
    }
    if (cmd_weights->parsed()) overlay(config, wr_n, "n", n);
    if (cmd_hess->parsed()) overlay(config, hr_n, "n", ns_text);
    if (!(g.alpha > 0.0) || !(g.beta > 0.0)) {
      throw std::invalid_argument("alpha and beta must be positive");
    }

    if (cmd_exact->parsed()) return run_exact(g, game_spec, dataset_path, n, k_neighbors);
    if (cmd_est->parsed()) {
      return run_estimate(g, method, game_spec, dataset_path, n, k_neighbors, n_samples,
                          constraint, ridge);
    }
    if (cmd_train->parsed()) {
      return run_train(g, head, dataset_path, tc, k_neighbors, batch_size, trace_path);
    }
    if (cmd_audit->parsed()) return run_audit(g, n, num_seeds, num_instances);
    if (cmd_noisy->parsed()) {
      return run_eval_noisy(g, dataset_path, flip_fraction, valuator, k_neighbors, n_samples);
    }
    if (cmd_incl->parsed()) {
      return run_eval_inclusion(g, dataset_path, method, max_instances, surrogate_steps,
                                n_samples);
    }
    if (cmd_weights->parsed()) return run_weights_report(g, n);
    if (cmd_hess->parsed()) return run_hessian_report(g, ns_text);
    std::cerr << app.help() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace wshap
