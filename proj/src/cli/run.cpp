#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "rwlap/cli.hpp"
#include "rwlap/error.hpp"

namespace rwlap::cli {
namespace {

constexpr std::size_t kDefaultVerifyWalks = 100'000;

std::vector<std::string> split_labels(const std::string& csv) {
  std::vector<std::string> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::optional<int> parse_precision(const std::string& s) {
  if (s == "full") return std::nullopt;
  int d = 0;
  try {
    std::size_t used = 0;
    d = std::stoi(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
  } catch (const std::exception&) {
    throw UsageError("--precision expects a digit count or 'full', got '" + s + "'");
  }
  if (d < 1 || d > 17) throw UsageError("--precision must be between 1 and 17 (or 'full')");
  return d;
}

std::size_t parse_verify(const std::string& s) {
  if (s == "mc") return kDefaultVerifyWalks;
  if (s.rfind("mc:", 0) == 0) {
    try {
      std::size_t used = 0;
      const auto walks = std::stoull(s.substr(3), &used);
      if (used == s.size() - 3 && walks > 0) return static_cast<std::size_t>(walks);
    } catch (const std::exception&) {
    }
  }
  throw UsageError("--verify expects 'mc' or 'mc:WALKS', got '" + s + "'");
}

}  // namespace

ParseOutcome parse_command_line(const std::vector<std::string>& args) {
  CLI::App app{"Random-walk analytics from one Laplacian pseudoinverse", "rwlap"};
  app.require_subcommand(1);

  Command cmd;
  std::string graph_format = "edges";
  std::string format = "json";
  std::string precision = "6";
  std::string verify;
  std::string avoid;

  app.add_option("--input", cmd.global.input, "Graph file, or - for standard input")->capture_default_str();
  app.add_option("--graph-format", graph_format, "Input format")
      ->check(CLI::IsMember({"edges", "matrix"}))
      ->capture_default_str();
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  app.add_option("--precision", precision, "Significant digits, or 'full' for shortest round-trip")
      ->capture_default_str();
  app.add_option("--verify", verify, "Cross-check with Monte Carlo: mc or mc:WALKS");
  app.add_option("--seed", cmd.global.seed, "Monte Carlo seed")->capture_default_str();

  auto* pinv = app.add_subcommand("pinv", "Pseudoinverse of the random-walk Laplacian");
  pinv->add_flag("--normalized", cmd.normalized, "Also emit the pseudoinverse of I - P");

  auto* tensor = app.add_subcommand("tensor", "Fundamental tensor slice, full tensor, or avoidance counts");
  tensor->add_option("--target", cmd.target, "Target node")->required();
  tensor->add_flag("--full", cmd.full, "Emit every slice");
  tensor->add_option("--avoid", avoid, "Comma-separated nodes to avoid");

  auto* hitting = app.add_subcommand("hitting", "Expected hitting time");
  hitting->add_option("--from", cmd.from, "Start node")->required();
  hitting->add_option("--to", cmd.target, "Target node")->required();
  hitting->add_option("--avoid", avoid, "Comma-separated nodes to avoid");

  auto* commute = app.add_subcommand("commute", "Expected round-trip commute time");
  commute->add_option("--a", cmd.a, "First node")->required();
  commute->add_option("--b", cmd.b, "Second node")->required();

  auto* centrality = app.add_subcommand("centrality", "Per-node centrality");
  centrality->add_option("--node", cmd.node, "Node (all nodes when omitted)");
  centrality->add_option("--kind", cmd.kind, "Measure")
      ->check(CLI::IsMember({"commute", "closeness", "betweenness"}))
      ->capture_default_str();
  centrality->add_flag("--exclude-diagonal", cmd.exclude_diagonal, "Skip i == k terms in betweenness");

  auto* passage = app.add_subcommand("passage", "Probability of visiting --via before --to");
  passage->add_option("--from", cmd.from, "Start node")->required();
  passage->add_option("--via", cmd.via, "Intermediate node")->required();
  passage->add_option("--to", cmd.target, "Target node")->required();
  passage->add_option("--avoid", avoid, "Comma-separated nodes to avoid");

  auto* trust = app.add_subcommand("trust", "Personalized hitting time trust ranking");
  trust->add_option("--viewpoint", cmd.viewpoint, "Viewpoint node")->required();
  trust->add_option("--avoid", avoid, "Comma-separated nodes to avoid");
  trust->add_option("--evaporation", cmd.evaporation, "Evaporation rate in (0,1)")->capture_default_str();

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  ParseOutcome outcome;
  if (args.empty()) {
    outcome.exit_code = 2;
    outcome.text = app.help();
    return outcome;
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    outcome.text = app.help();
    return outcome;
  } catch (const CLI::CallForAllHelp&) {
    outcome.text = app.help("", CLI::AppFormatMode::All);
    return outcome;
  } catch (const CLI::ParseError& e) {
    outcome.exit_code = 2;
    outcome.text = std::string(e.what()) + "\n\n" + app.help();
    return outcome;
  }

  try {
    cmd.name = app.get_subcommands().front()->get_name();
    cmd.global.graph_format = graph_format == "matrix" ? GraphFormat::dense_matrix : GraphFormat::edge_list;
    cmd.global.format = format == "csv" ? OutputFormat::csv : OutputFormat::json;
    cmd.global.precision = parse_precision(precision);
    if (!verify.empty()) {
      if (cmd.name == "pinv" || cmd.name == "tensor") {
        throw UsageError("--verify applies to measure subcommands (hitting, commute, centrality, passage, trust)");
      }
      cmd.global.verify_walks = parse_verify(verify);
    }
    cmd.avoid = split_labels(avoid);
    if (cmd.name == "tensor" && cmd.full && !cmd.avoid.empty()) {
      throw UsageError("tensor: --full and --avoid cannot be combined");
    }
    if (cmd.name == "centrality" && cmd.global.verify_walks && !cmd.node) {
      throw UsageError("centrality: --verify needs --node");
    }
  } catch (const UsageError& e) {
    outcome.exit_code = 2;
    outcome.text = std::string(e.what()) + "\n";
    return outcome;
  }
  outcome.command = std::move(cmd);
  return outcome;
}

namespace {

void write_error(std::ostream& err, std::string_view code, const std::string& message,
                 const std::vector<std::string>& nodes) {
  nlohmann::ordered_json j;
  j["error"]["code"] = code;
  j["error"]["message"] = message;
  j["error"]["nodes"] = nodes;
  err << j.dump() << "\n";
}

std::vector<std::string> labels_for(const Error& e, const Digraph* g) {
  if (!e.labels().empty()) return e.labels();
  std::vector<std::string> out;
  for (std::size_t i : e.nodes()) {
    if (g != nullptr && i < g->size()) {
      out.push_back(g->label(i));
    } else if (g != nullptr && i == g->size()) {
      out.push_back("<evaporation>");
    } else {
      out.push_back(std::to_string(i));
    }
  }
  return out;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  ParseOutcome parsed = parse_command_line(args);
  if (!parsed.command) {
    (parsed.exit_code == 0 ? out : err) << parsed.text;
    return parsed.exit_code;
  }
  const Command& cmd = *parsed.command;

  std::unique_ptr<Session> session;
  try {
    session = std::make_unique<Session>(load_graph_file(cmd.global.input, cmd.global.graph_format));
    session->execute(cmd, out, err);
    return 0;
  } catch (const UsageError& e) {
    err << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    write_error(err, to_string(e.code()), e.what(), labels_for(e, session ? &session->graph() : nullptr));
    return 1;
  } catch (const std::exception& e) {
    write_error(err, "internal_error", e.what(), {});
    return 1;
  }
}

}  // namespace rwlap::cli
