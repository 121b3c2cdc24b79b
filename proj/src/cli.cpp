#include "bisp/cli.hpp"

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>

#include <CLI11.hpp>

#include "bisp/analysis.hpp"
#include "bisp/bench.hpp"
#include "bisp/graphs.hpp"
#include "bisp/json_io.hpp"
#include "bisp/layered_sampler.hpp"
#include "bisp/partitioner.hpp"

namespace bisp::cli {

namespace {

// Flag-level mistakes found after CLI11 parsing.
struct UsageError : Error {
  using Error::Error;
};

std::uint64_t parse_seed(const std::string& text) {
  if (text.empty()) throw UsageError("empty seed");
  std::size_t pos = 0;
  std::uint64_t value = 0;
  try {
    value = std::stoull(text, &pos, text.starts_with("0x") ||
                                            text.starts_with("0X")
                                        ? 16
                                        : 10);
  } catch (const std::exception&) {
    throw UsageError("seed must be a decimal or 0x-hex 64-bit value, got \"" +
                     text + "\"");
  }
  if (pos != text.size()) {
    throw UsageError("trailing characters in seed \"" + text + "\"");
  }
  return value;
}

// Resolves --input / --output paths, with "-" meaning the session streams.
class InputFile {
 public:
  InputFile(const std::string& path, std::istream& fallback) {
    if (path == "-") {
      stream_ = &fallback;
      return;
    }
    file_ = std::make_unique<std::ifstream>(path);
    if (!*file_) throw IoError("cannot open input file " + path);
    stream_ = file_.get();
  }
  std::istream& get() { return *stream_; }

 private:
  std::unique_ptr<std::ifstream> file_;
  std::istream* stream_ = nullptr;
};

class OutputFile {
 public:
  OutputFile(const std::string& path, std::ostream& fallback) {
    if (path == "-") {
      stream_ = &fallback;
      return;
    }
    file_ = std::make_unique<std::ofstream>(path);
    if (!*file_) throw IoError("cannot open output file " + path);
    stream_ = file_.get();
  }
  std::ostream& get() { return *stream_; }
  void finish() {
    stream_->flush();
    if (file_ && !*file_) throw IoError("write failure on output file");
  }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_ = nullptr;
};

struct ParsedArgs {
  std::string command;              // "plan", "gen", ..., "system verify"
  std::string model;
  std::string mode = "hash";
  std::string algo = "bisp";
  std::string input = "-";
  std::string output = "-";
  std::string seed_text;
  std::int64_t partitions = 0;
  std::int64_t nodes = 0;
  std::int64_t edges = -1;
  std::int64_t block = 0;
  std::int64_t table_max = 1000;
  double alpha = 0.0;
  double tol = 1e-9;
  unsigned threads = 1;
  bool json = false;
  bool metrics_only = false;
  bool have_alpha = false;
  bool have_seed = false;
  bool have_edges = false;
};

std::uint32_t checked_partitions(std::int64_t n) {
  if (n <= 0) throw InvalidN("partition count must be positive");
  if (n > UINT32_MAX) throw InvalidN("partition count too large");
  return static_cast<std::uint32_t>(n);
}

std::uint64_t require_seed(const ParsedArgs& args) {
  if (!args.have_seed) {
    throw UsageError("--seed is required for randomized commands");
  }
  return parse_seed(args.seed_text);
}

void write_tsv(std::ostream& out, const Assignment& a) {
  out << a.src << '\t' << a.dst << '\t' << a.partition << '\n';
}

// Assignment TSV: src, dst, partition.
std::vector<Assignment> read_assignments(std::istream& in, std::uint32_t n) {
  std::vector<Assignment> out;
  std::string line;
  std::uint64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    bool blank = true;
    for (const char c : line) {
      if (!std::isspace(static_cast<unsigned char>(c))) {
        blank = c == '#';
        break;
      }
    }
    if (blank) continue;
    std::uint64_t src = 0, dst = 0, part = 0;
    char extra = 0;
    std::istringstream fields(line);
    if (!(fields >> src >> dst >> part) || (fields >> extra)) {
      throw ParseError(line_no,
                       "expected src, dst, partition: \"" + line + "\"");
    }
    if (part >= n) {
      throw PartitionOutOfRange(
          "line " + std::to_string(line_no) + ": partition " +
          std::to_string(part) + " out of range for n = " + std::to_string(n));
    }
    out.push_back({src, dst, static_cast<std::uint32_t>(part)});
  }
  if (in.bad()) throw IoError("read failure on assignment input");
  return out;
}

int run_plan(const ParsedArgs& args, std::ostream& out) {
  const LayoutPlan plan = plan_schedule(checked_partitions(args.partitions));
  if (args.json) {
    out << layout_to_json(plan).dump(2) << '\n';
    return 0;
  }
  out << "partitions: " << plan.n << '\n';
  if (plan.base == LayoutPlan::Base::plane) {
    out << "base: plane q=" << plan.q << " (" << plan.n0 << " elements)\n";
  } else {
    out << "base: cyclic intervals of length " << plan.interval << " on "
        << plan.n0 << " elements\n";
  }
  out << "blocks:";
  if (plan.blocks.empty()) out << " none";
  for (std::size_t t = 0; t < plan.blocks.size(); ++t) {
    out << ' ' << plan.blocks[t] << " (p=" << plan.accept_num[t] << '/'
        << plan.accept_den[t] << ')';
  }
  out << '\n';
  out << "cardinality: " << plan.cardinality << '\n';
  return 0;
}

int run_gen(const ParsedArgs& args, std::istream& in, std::ostream& out) {
  if (args.nodes <= 0) throw UsageError("--nodes must be positive");
  const auto nodes = static_cast<std::uint64_t>(args.nodes);
  std::unique_ptr<EdgeSource> source;
  if (args.model == "complete") {
    source = std::make_unique<CompleteSource>(nodes);
  } else {
    if (!args.have_edges || args.edges < 0) {
      throw UsageError("--edges is required for model " + args.model);
    }
    const auto edges = static_cast<std::uint64_t>(args.edges);
    const std::uint64_t seed = require_seed(args);
    if (args.model == "er") {
      source = std::make_unique<ErdosRenyiSource>(nodes, edges, seed);
    } else {
      if (!args.have_alpha) {
        throw UsageError("--alpha is required for model powerlaw");
      }
      if (!(args.alpha > 1.0)) {
        throw UsageError("--alpha must exceed 1");
      }
      source =
          std::make_unique<PowerLawSource>(nodes, edges, args.alpha, seed);
    }
  }
  OutputFile sink(args.output, out);
  write_edge_list(sink.get(), *source);
  sink.finish();
  (void)in;
  return 0;
}

int run_partition(const ParsedArgs& args, std::istream& in,
                  std::ostream& out) {
  const std::uint32_t n = checked_partitions(args.partitions);
  const std::uint64_t seed = require_seed(args);
  InputFile input(args.input, in);
  EdgeListReader edges(input.get());
  OutputFile sink(args.output, out);

  std::optional<Layout> layout;
  std::optional<BispAssigner> bisp;
  std::optional<RandomAssigner> random;
  std::optional<GridAssigner> grid;
  if (args.algo == "bisp") {
    layout.emplace(plan_schedule(n));
    bisp.emplace(*layout, seed,
                 args.mode == "hash" ? Mode::hash : Mode::rng);
  } else if (args.algo == "random") {
    random.emplace(n, seed);
  } else {
    grid.emplace(n, seed);
  }
  const auto assign = [&](const Edge& e, std::uint64_t k) {
    if (bisp) return bisp->assign(e, k);
    if (random) return random->assign(e, k);
    return grid->assign(e, k);
  };

  if (args.metrics_only) {
    MetricsAccumulator acc(n);
    std::uint64_t k = 0;
    while (auto e = edges.next()) {
      acc.add(e->src, e->dst, assign(*e, k));
      ++k;
    }
    sink.get() << metrics_to_json(acc.finalize()).dump(2) << '\n';
    sink.finish();
    return 0;
  }
  if (args.threads > 1) {
    const std::vector<Edge> all = collect(edges);
    std::vector<std::uint32_t> parts;
    if (bisp) {
      parts = assign_parallel(all, *bisp, args.threads);
    } else if (random) {
      parts = assign_parallel(all, *random, args.threads);
    } else {
      parts = assign_parallel(all, *grid, args.threads);
    }
    for (std::size_t k = 0; k < all.size(); ++k) {
      write_tsv(sink.get(), {all[k].src, all[k].dst, parts[k]});
    }
  } else {
    std::uint64_t k = 0;
    while (auto e = edges.next()) {
      write_tsv(sink.get(), {e->src, e->dst, assign(*e, k)});
      ++k;
    }
  }
  sink.finish();
  return 0;
}

int run_metrics(const ParsedArgs& args, std::istream& in, std::ostream& out) {
  const std::uint32_t n = checked_partitions(args.partitions);
  InputFile input(args.input, in);
  MetricsAccumulator acc(n);
  for (const auto& a : read_assignments(input.get(), n)) acc.add(a);
  OutputFile sink(args.output, out);
  sink.get() << metrics_to_json(acc.finalize()).dump(2) << '\n';
  sink.finish();
  return 0;
}

int run_extract(const ParsedArgs& args, std::istream& in, std::ostream& out,
                std::ostream& err) {
  const std::uint32_t n = checked_partitions(args.partitions);
  if (args.nodes <= 0) throw UsageError("--nodes must be positive");
  InputFile input(args.input, in);
  const auto assignments = read_assignments(input.get(), n);
  const auto [sys, report] =
      extract_system(assignments, static_cast<std::uint32_t>(args.nodes), n);
  OutputFile sink(args.output, out);
  sink.get() << system_to_json(sys).dump(2) << '\n';
  sink.finish();
  err << "extracted " << sys.family.size()
      << " classes; epsilon=" << report.epsilon
      << " cardinality=" << report.cardinality
      << " intersecting=" << (report.intersecting ? "true" : "false") << '\n';
  return 0;
}

nlohmann::json parse_json_input(std::istream& in) {
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(0, std::string("invalid JSON: ") + e.what());
  }
}

int run_system_verify(const ParsedArgs& args, std::istream& in,
                      std::ostream& out) {
  InputFile input(args.input, in);
  const ExplicitSystem sys = system_from_json(parse_json_input(input.get()));
  const SystemReport report = verify_system(sys, args.tol);
  OutputFile sink(args.output, out);
  sink.get() << report_to_json(report).dump(2) << '\n';
  sink.finish();
  return 0;
}

int run_system_materialize(const ParsedArgs& args, std::ostream& out) {
  const Layout layout = plan_layout(checked_partitions(args.partitions));
  OutputFile sink(args.output, out);
  sink.get() << system_to_json(materialize(layout)).dump(2) << '\n';
  sink.finish();
  return 0;
}

int run_system_extend(const ParsedArgs& args, std::istream& in,
                      std::ostream& out) {
  if (args.block <= 0) throw UsageError("--block must be positive");
  if (args.block > UINT32_MAX) throw BlockTooLarge("block too large");
  InputFile input(args.input, in);
  const ExplicitSystem sys = system_from_json(parse_json_input(input.get()));
  const ExplicitSystem extended =
      extend_system(sys, static_cast<std::uint32_t>(args.block));
  OutputFile sink(args.output, out);
  sink.get() << system_to_json(extended).dump(2) << '\n';
  sink.finish();
  return 0;
}

int run_bench_cmd(const ParsedArgs& args, std::ostream& out,
                  std::ostream& err) {
  if (args.table_max <= 0 || args.table_max > 1000000) {
    throw UsageError("--table-max must be in 1..1000000");
  }
  BenchOptions opts;
  opts.seed = require_seed(args);
  opts.table_max = static_cast<std::uint32_t>(args.table_max);
  opts.threads = args.threads;
  const nlohmann::json report = run_bench(opts, &err);
  OutputFile sink(args.output, out);
  sink.get() << report.dump(2) << '\n';
  sink.finish();
  return 0;
}

int dispatch(const ParsedArgs& args, std::istream& in, std::ostream& out,
             std::ostream& err) {
  if (args.command == "plan") return run_plan(args, out);
  if (args.command == "gen") return run_gen(args, in, out);
  if (args.command == "partition") return run_partition(args, in, out);
  if (args.command == "metrics") return run_metrics(args, in, out);
  if (args.command == "extract") return run_extract(args, in, out, err);
  if (args.command == "system verify") return run_system_verify(args, in, out);
  if (args.command == "system materialize") {
    return run_system_materialize(args, out);
  }
  if (args.command == "system extend") return run_system_extend(args, in, out);
  if (args.command == "bench") return run_bench_cmd(args, out, err);
  throw UsageError("no subcommand given (try --help)");
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in,
        std::ostream& out, std::ostream& err) {
  CLI::App app{"Edge partitioner with bounded per-vertex replication"};
  app.require_subcommand(0, 1);
  ParsedArgs parsed;

  const auto add_partitions = [&](CLI::App* cmd) {
    return cmd->add_option("--partitions", parsed.partitions,
                           "number of partitions");
  };
  const auto add_seed = [&](CLI::App* cmd) {
    cmd->add_option("--seed", parsed.seed_text,
                    "64-bit seed, decimal or 0x-hex")
        ->each([&](const std::string&) { parsed.have_seed = true; });
  };
  const auto add_io = [&](CLI::App* cmd, bool input, bool output) {
    if (input) {
      cmd->add_option("--input", parsed.input, "input path or - for stdin");
    }
    if (output) {
      cmd->add_option("--output", parsed.output,
                      "output path or - for stdout");
    }
  };

  auto* plan = app.add_subcommand("plan", "plan the system layout for n");
  add_partitions(plan)->required();
  plan->add_flag("--json", parsed.json, "emit the layout as JSON");
  add_io(plan, false, true);

  auto* gen = app.add_subcommand("gen", "generate a synthetic edge list");
  gen->add_option("--model", parsed.model, "complete | er | powerlaw")
      ->required()
      ->check(CLI::IsMember({"complete", "er", "powerlaw"}));
  gen->add_option("--nodes", parsed.nodes, "vertex count")->required();
  gen->add_option("--edges", parsed.edges, "edge count (er, powerlaw)")
      ->each([&](const std::string&) { parsed.have_edges = true; });
  gen->add_option("--alpha", parsed.alpha, "power-law exponent (> 1)")
      ->each([&](const std::string&) { parsed.have_alpha = true; });
  add_seed(gen);
  add_io(gen, false, true);

  auto* partition =
      app.add_subcommand("partition", "assign each input edge a partition");
  add_partitions(partition)->required();
  partition->add_option("--algo", parsed.algo, "bisp | random | grid")
      ->check(CLI::IsMember({"bisp", "random", "grid"}));
  partition->add_option("--mode", parsed.mode, "hash | rng (bisp only)")
      ->check(CLI::IsMember({"hash", "rng"}));
  add_seed(partition);
  partition->add_option("--threads", parsed.threads, "worker threads");
  partition->add_flag("--metrics-only", parsed.metrics_only,
                      "emit metrics JSON instead of assignments");
  add_io(partition, true, true);

  auto* metrics =
      app.add_subcommand("metrics", "compute metrics from assignments");
  add_partitions(metrics)->required();
  add_io(metrics, true, true);

  auto* extract = app.add_subcommand(
      "extract", "read back the system realized on a complete graph");
  add_partitions(extract)->required();
  extract->add_option("--nodes", parsed.nodes, "complete graph vertex count")
      ->required();
  add_io(extract, true, true);

  auto* system = app.add_subcommand("system", "explicit system tools");
  system->require_subcommand(0, 1);
  auto* verify =
      system->add_subcommand("verify", "check balance and intersection");
  verify->add_option("--tol", parsed.tol, "verification tolerance");
  add_io(verify, true, true);
  auto* materialize_cmd = system->add_subcommand(
      "materialize", "emit the explicit system planned for n");
  add_partitions(materialize_cmd)->required();
  add_io(materialize_cmd, false, true);
  auto* extend = system->add_subcommand(
      "extend", "apply one extension block to a system");
  extend->add_option("--block", parsed.block, "block size r")->required();
  add_io(extend, true, true);

  auto* bench = app.add_subcommand(
      "bench", "run the experiment grid and emit one JSON report");
  add_seed(bench);
  bench->add_option("--table-max", parsed.table_max,
                    "cardinality table upper bound");
  bench->add_option("--threads", parsed.threads,
                    "worker threads (0 = all cores)");
  add_io(bench, false, true);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }

  try {
    if (plan->parsed()) parsed.command = "plan";
    if (gen->parsed()) parsed.command = "gen";
    if (partition->parsed()) parsed.command = "partition";
    if (metrics->parsed()) parsed.command = "metrics";
    if (extract->parsed()) parsed.command = "extract";
    if (system->parsed()) {
      if (verify->parsed()) parsed.command = "system verify";
      if (materialize_cmd->parsed()) parsed.command = "system materialize";
      if (extend->parsed()) parsed.command = "system extend";
      if (parsed.command.empty()) {
        throw UsageError("system needs verify, materialize, or extend");
      }
    }
    if (bench->parsed()) parsed.command = "bench";
    return dispatch(parsed, in, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const InvalidN& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const NotPrime& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const TooLarge& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const BlockTooLarge& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const TooLargeToMaterialize& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const BadRange& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const NoGridShape& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const nlohmann::json::exception& e) {
    err << "error: invalid JSON: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace bisp::cli
