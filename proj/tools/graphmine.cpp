#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "graphmine/bench.hpp"
#include "graphmine/commands.hpp"

namespace cli = graphmine::cli;

int main(int argc, char** argv) {
  CLI::App app{"graphmine: community detection, node and graph embedding"};
  app.require_subcommand(1);
  std::size_t threads = 1;
  app.add_option("--threads", threads, "worker threads for walk generation")
      ->check(CLI::PositiveNumber);

  cli::GenerateOptions generate;
  auto* generate_cmd = app.add_subcommand("generate", "sample a G(n, m) random graph");
  generate_cmd->add_option("--nodes", generate.nodes, "node count")->required();
  generate_cmd->add_option("--edges", generate.edges, "edge count")->required();
  generate_cmd->add_option("--seed", generate.seed, "random seed");
  generate_cmd->add_flag("--connected", generate.connected, "resample until connected");
  generate_cmd->add_option("--out", generate.out, "output path (default stdout)");

  cli::ClusterOptions cluster;
  auto* cluster_cmd = app.add_subcommand("cluster", "detect communities");
  cluster_cmd->add_option("--algo", cluster.algo, "label-propagation | scd | symnmf")->required();
  cluster_cmd->add_option("--graph", cluster.graph, "edge list")->required();
  cluster_cmd->add_option("--out", cluster.out, "membership JSON path (default stdout)");
  cluster_cmd->add_option("--seed", cluster.seed, "random seed");
  cluster_cmd->add_option("--max-iterations", cluster.max_iterations, "label-propagation rounds");
  cluster_cmd->add_option("--refinement-rounds", cluster.refinement_rounds, "scd hill-climbing passes");
  cluster_cmd->add_option("--dimensions", cluster.dimensions, "symnmf factor rank");
  cluster_cmd->add_option("--iterations", cluster.iterations, "symnmf update count");

  cli::EmbedNodesOptions nodes;
  auto* nodes_cmd = app.add_subcommand("embed-nodes", "embed the nodes of one graph");
  nodes_cmd->add_option("--algo", nodes.algo, "deepwalk | walklets | netmf")->required();
  nodes_cmd->add_option("--graph", nodes.graph, "edge list")->required();
  nodes_cmd->add_option("--out", nodes.out, "embedding CSV path (default stdout)");
  nodes_cmd->add_option("--seed", nodes.seed, "random seed");
  nodes_cmd->add_option("--dimensions", nodes.dimensions, "embedding width (per scale for walklets)");
  nodes_cmd->add_option("--walk-number", nodes.walk_number, "walks per node");
  nodes_cmd->add_option("--walk-length", nodes.walk_length, "nodes per walk");
  nodes_cmd->add_option("--window-size", nodes.window_size, "context window (scales for walklets)");
  nodes_cmd->add_option("--negative-samples", nodes.negative_samples, "negatives per pair");
  nodes_cmd->add_option("--epochs", nodes.epochs, "passes over the corpus");
  nodes_cmd->add_option("--learning-rate", nodes.learning_rate, "initial step size");
  nodes_cmd->add_option("--order", nodes.order, "netmf window");
  nodes_cmd->add_option("--negatives", nodes.negatives, "netmf negative sampling constant");

  cli::EmbedGraphsOptions graphs;
  auto* graphs_cmd = app.add_subcommand("embed-graphs", "embed every graph of a JSONL corpus");
  graphs_cmd->add_option("--algo", graphs.algo, "sf | netlsd | wl-svd")->required();
  graphs_cmd->add_option("--corpus", graphs.corpus, "corpus JSONL")->required();
  graphs_cmd->add_option("--out", graphs.out, "embedding CSV path (default stdout)");
  graphs_cmd->add_option("--seed", graphs.seed, "random seed");
  graphs_cmd->add_option("--dimensions", graphs.dimensions, "embedding width (sf, wl-svd)");
  graphs_cmd->add_option("--wl-iterations", graphs.wl_iterations, "WL relabeling rounds");

  auto* eval_cmd = app.add_subcommand("eval", "score memberships or embeddings");
  eval_cmd->require_subcommand(1);
  cli::EvalNmiOptions nmi;
  auto* nmi_cmd = eval_cmd->add_subcommand("nmi", "NMI between two membership files");
  nmi_cmd->add_option("first", nmi.first, "membership JSON")->required();
  nmi_cmd->add_option("second", nmi.second, "membership JSON")->required();
  cli::EvalModularityOptions modularity;
  auto* modularity_cmd = eval_cmd->add_subcommand("modularity", "modularity of a partition");
  modularity_cmd->add_option("--graph", modularity.graph, "edge list")->required();
  modularity_cmd->add_option("--memberships", modularity.memberships, "membership JSON")->required();
  cli::EvalClassifyOptions classify;
  auto* classify_cmd = eval_cmd->add_subcommand("classify", "test AUC of a softmax classifier");
  classify_cmd->add_option("--embedding", classify.embedding, "embedding CSV")->required();
  classify_cmd->add_option("--labels", classify.labels, "labels CSV")->required();
  classify_cmd->add_option("--ratio", classify.ratio, "training fraction");
  classify_cmd->add_option("--seed", classify.seed, "split seed");

  cli::BenchCommandOptions bench;
  std::string sizes;
  std::string degrees;
  std::size_t degree = 10;
  auto* bench_cmd = app.add_subcommand("bench", "time fit on connected G(n, degree*n/2) graphs");
  bench_cmd->add_option("--task", bench.bench.task, "cluster | embed-nodes")->required();
  bench_cmd->add_option("--algo", bench.bench.algo, "algorithm name")->required();
  bench_cmd->add_option("--sizes", sizes, "ascending node counts, e.g. 1024,2048")->required();
  auto* degree_opt = bench_cmd->add_option("--degree", degree, "mean degree");
  bench_cmd->add_option("--degrees", degrees, "mean degree sweep, e.g. 5,10,20,40")->excludes(degree_opt);
  bench_cmd->add_option("--repeats", bench.bench.repeats, "runs per configuration");
  bench_cmd->add_option("--seed", bench.bench.seed, "generator and model seed");
  bench_cmd->add_option("--dimensions", bench.bench.dimensions, "embedding width override");
  bench_cmd->add_option("--out", bench.out, "CSV path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kExitInput;
  }

  if (*generate_cmd) return cli::run_generate(generate, std::cout, std::cerr);
  if (*cluster_cmd) return cli::run_cluster(cluster, std::cout, std::cerr);
  if (*nodes_cmd) {
    nodes.threads = threads;
    return cli::run_embed_nodes(nodes, std::cout, std::cerr);
  }
  if (*graphs_cmd) return cli::run_embed_graphs(graphs, std::cout, std::cerr);
  if (*nmi_cmd) return cli::run_eval_nmi(nmi, std::cout, std::cerr);
  if (*modularity_cmd) return cli::run_eval_modularity(modularity, std::cout, std::cerr);
  if (*classify_cmd) return cli::run_eval_classify(classify, std::cout, std::cerr);

  try {
    bench.bench.sizes = graphmine::parse_size_list(sizes);
    bench.bench.degrees = degrees.empty() ? std::vector<std::size_t>{degree}
                                          : graphmine::parse_size_list(degrees);
  } catch (const graphmine::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kExitInput;
  }
  bench.bench.threads = threads;
  return cli::run_bench_command(bench, std::cout, std::cerr);
}
