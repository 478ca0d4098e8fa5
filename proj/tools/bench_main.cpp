// Benchmark CLI: `bench run` drives optimizers over the builtin functions,
// `bench serve` speaks the line-delimited JSON ask/tell protocol, and
// `bench report` reprints the summary for an existing results CSV.
//
// Exit codes: 0 success, 2 config error, 3 protocol error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "squirrel/bench.hpp"
#include "squirrel/errors.hpp"
#include "squirrel/optimizer.hpp"
#include "squirrel/parallel.hpp"

namespace {

using nlohmann::json;
using namespace squirrel;

std::vector<std::string> split_list(const std::string &text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    if (!item.empty()) {
      out.push_back(item);
    }
  }
  return out;
}

// "0..19" (inclusive range) or a comma list of seeds.
std::vector<std::uint64_t> parse_seeds(const std::string &text) {
  std::vector<std::uint64_t> seeds;
  auto range_pos = text.find("..");
  if (range_pos != std::string::npos) {
    std::uint64_t lo = std::stoull(text.substr(0, range_pos));
    std::uint64_t hi = std::stoull(text.substr(range_pos + 2));
    if (hi < lo) {
      throw ConfigError("seed range '" + text + "' is empty");
    }
    for (std::uint64_t s = lo; s <= hi; ++s) {
      seeds.push_back(s);
    }
    return seeds;
  }
  for (const auto &item : split_list(text)) {
    seeds.push_back(std::stoull(item));
  }
  if (seeds.empty()) {
    throw ConfigError("no seeds given");
  }
  return seeds;
}

std::vector<FuncSpec> parse_functions(const std::string &text) {
  if (text == "all") {
    return builtin_functions();
  }
  std::vector<FuncSpec> out;
  for (const auto &name : split_list(text)) {
    out.push_back(builtin_function(name));
  }
  if (out.empty()) {
    throw ConfigError("no functions given");
  }
  return out;
}

json config_to_json(const Configuration &config) {
  json out = json::object();
  for (const auto &[name, value] : config.values()) {
    if (std::holds_alternative<double>(value)) {
      out[name] = std::get<double>(value);
    } else if (std::holds_alternative<std::int64_t>(value)) {
      out[name] = std::get<std::int64_t>(value);
    } else {
      out[name] = std::get<std::string>(value);
    }
  }
  return out;
}

int cmd_run(const std::string &functions_arg, const std::string &optimizer_arg,
            const std::string &seeds_arg,
            const std::optional<std::string> &registry,
            const std::string &out_path,
            const std::optional<std::string> &dump_history_dir) {
  auto functions = parse_functions(functions_arg);
  auto seeds = parse_seeds(seeds_arg);

  std::vector<RunResult> results;
  for (const auto &kind : split_list(optimizer_arg)) {
    auto part = run_experiment(kind, functions, seeds, registry);
    results.insert(results.end(), part.begin(), part.end());
  }
  if (results.empty()) {
    throw ConfigError("no optimizer given");
  }

  if (dump_history_dir) {
    // Re-run serially to export per-run history CSVs (squirrel runs only).
    std::filesystem::create_directories(*dump_history_dir);
    std::optional<Registry> reg;
    if (registry) {
      reg = load_registry(*registry);
    }
    for (const auto &func : functions) {
      for (auto seed : seeds) {
        OptimizerOptions options;
        options.registry = reg;
        Optimizer opt(func.space, seed, std::move(options));
        for (int b = 0; b < 16; ++b) {
          auto configs = opt.suggest();
          std::vector<double> values;
          for (const auto &c : configs) {
            values.push_back(func.evaluate(c));
          }
          opt.observe(configs, values);
        }
        std::ofstream hist(*dump_history_dir + "/" + func.name + "-seed" +
                           std::to_string(seed) + ".csv");
        opt.history().to_csv(hist);
      }
    }
  }

  std::cout << report(results, out_path);
  std::cout << "results written to " << out_path << "\n";
  return 0;
}

int cmd_report(const std::string &in_path) {
  std::ifstream in(in_path);
  if (!in) {
    throw ConfigError("cannot open results CSV '" + in_path + "'");
  }
  auto results = load_results_csv(in);
  std::cout << summarize(results);
  return 0;
}

int cmd_serve(const std::optional<std::string> &space_path,
              std::uint64_t seed,
              const std::optional<std::string> &registry_path,
              const std::optional<std::string> &resume_path) {
  std::optional<Optimizer> optimizer;
  std::vector<Configuration> last_suggestion;

  auto build = [&](const ConfigSpace &space, std::uint64_t s,
                   const std::optional<std::string> &reg_path) {
    OptimizerOptions options;
    if (reg_path) {
      options.registry = load_registry(*reg_path);
    }
    optimizer.emplace(space, s, std::move(options));
    last_suggestion.clear();
  };

  if (space_path) {
    std::ifstream in(*space_path);
    if (!in) {
      throw ConfigError("cannot open space file '" + *space_path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    build(parse_space(buf.str()), seed, registry_path);
    if (resume_path) {
      std::ifstream hist(*resume_path);
      if (!hist) {
        throw ConfigError("cannot open history CSV '" + *resume_path + "'");
      }
      optimizer->resume_from_csv(hist);
    }
  } else if (resume_path) {
    throw ConfigError("--resume requires --space");
  }

  std::string line;
  while (std::getline(std::cin, line)) {
    if (line.empty()) {
      continue;
    }
    json request;
    try {
      request = json::parse(line);
    } catch (const json::exception &e) {
      json resp{{"ok", false}, {"error", std::string("bad JSON: ") + e.what()}};
      std::cout << resp.dump() << std::endl;
      return 3;
    }

    std::string op = request.value("op", std::string{});
    try {
      if (op == "init") {
        if (!request.contains("space")) {
          throw ConfigError("init requires a \"space\" array");
        }
        std::optional<std::string> reg;
        if (request.contains("registry_path")) {
          reg = request["registry_path"].get<std::string>();
        }
        build(parse_space(request["space"].dump()),
              request.value("seed", std::uint64_t{0}), reg);
        std::cout << json{{"ok", true}}.dump() << std::endl;
      } else if (op == "suggest") {
        if (!optimizer) {
          throw ProtocolError("suggest before init");
        }
        last_suggestion = optimizer->suggest();
        json configs = json::array();
        for (const auto &c : last_suggestion) {
          configs.push_back(config_to_json(c));
        }
        std::cout << json{{"configs", configs}}.dump() << std::endl;
      } else if (op == "observe") {
        if (!optimizer) {
          throw ProtocolError("observe before init");
        }
        if (!request.contains("values") || !request["values"].is_array()) {
          throw ProtocolError("observe requires a \"values\" array");
        }
        std::vector<double> values;
        for (const auto &v : request["values"]) {
          values.push_back(v.is_number()
                               ? v.get<double>()
                               : std::numeric_limits<double>::quiet_NaN());
        }
        optimizer->observe(last_suggestion, values);
        std::cout << json{{"ok", true}}.dump() << std::endl;
      } else if (op == "shutdown") {
        std::cout << json{{"ok", true}}.dump() << std::endl;
        return 0;
      } else {
        throw ProtocolError("unknown op '" + op + "'");
      }
    } catch (const ConfigError &e) {
      std::cout << json{{"ok", false}, {"error", e.what()}}.dump()
                << std::endl;
      return 2;
    } catch (const ProtocolError &e) {
      std::cout << json{{"ok", false}, {"error", e.what()}}.dump()
                << std::endl;
      return 3;
    }
  }
  return 0;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Squirrel benchmark harness"};
  app.require_subcommand(1);

  int threads = 0;
  app.add_option("--threads", threads,
                 "worker cap for parallel sections (0 = hardware)");

  auto *run = app.add_subcommand("run", "run optimizers on builtin functions");
  std::string functions_arg = "all";
  std::string optimizer_arg = "squirrel";
  std::string seeds_arg = "0..19";
  std::optional<std::string> registry_arg;
  std::optional<std::string> dump_history_arg;
  std::string out_arg = "results.csv";
  run->add_option("--functions", functions_arg, "all or comma list of names");
  run->add_option("--optimizer", optimizer_arg, "squirrel or random");
  run->add_option("--seeds", seeds_arg, "range 0..19 or comma list");
  run->add_option("--registry", registry_arg, "warmstart registry JSON");
  run->add_option("--out", out_arg, "results CSV path");
  run->add_option("--dump-history", dump_history_arg,
                  "directory for per-run history CSVs");

  auto *serve = app.add_subcommand("serve", "ask/tell over stdin/stdout");
  std::optional<std::string> space_arg;
  std::uint64_t seed_arg = 0;
  std::optional<std::string> serve_registry_arg;
  std::optional<std::string> resume_arg;
  serve->add_option("--space", space_arg, "space-spec JSON file");
  serve->add_option("--seed", seed_arg, "root random seed");
  serve->add_option("--registry", serve_registry_arg,
                    "warmstart registry JSON");
  serve->add_option("--resume", resume_arg, "history CSV to replay first");

  auto *rep = app.add_subcommand("report", "summarize an existing CSV");
  std::string in_arg;
  rep->add_option("--in", in_arg, "results CSV path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    squirrel::parallel::set_max_threads(threads);
    if (run->parsed()) {
      return cmd_run(functions_arg, optimizer_arg, seeds_arg, registry_arg,
                     out_arg, dump_history_arg);
    }
    if (serve->parsed()) {
      return cmd_serve(space_arg, seed_arg, serve_registry_arg, resume_arg);
    }
    if (rep->parsed()) {
      return cmd_report(in_arg);
    }
  } catch (const squirrel::ConfigError &e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const squirrel::ProtocolError &e) {
    std::cerr << "protocol error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
