#pragma once

// Command-line front end. `run` parses argv, loads the graph once and hands the
// parsed command to a Session, which builds the pseudoinverse lazily and at
// most once no matter how many commands it executes.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rwlap/graph.hpp"
#include "rwlap/laplacian.hpp"
#include "rwlap/trust.hpp"

namespace rwlap::cli {

enum class OutputFormat { json, csv };

struct GlobalOptions {
  std::string input = "-";
  GraphFormat graph_format = GraphFormat::edge_list;
  OutputFormat format = OutputFormat::json;
  // Significant digits; nullopt means shortest round-trip.
  std::optional<int> precision = 6;
  // Number of Monte Carlo walks when --verify was given.
  std::optional<std::size_t> verify_walks;
  std::uint64_t seed = 1;
};

struct Command {
  std::string name;  // pinv | tensor | hitting | commute | centrality | passage | trust
  GlobalOptions global;

  bool normalized = false;              // pinv
  std::string target;                   // tensor, hitting --to, passage --to
  bool full = false;                    // tensor
  std::vector<std::string> avoid;       // tensor, hitting, passage, trust
  std::string from;                     // hitting, passage
  std::string via;                      // passage
  std::string a, b;                     // commute
  std::optional<std::string> node;      // centrality
  std::string kind = "commute";         // centrality
  bool exclude_diagonal = false;        // centrality
  std::string viewpoint;                // trust
  double evaporation = 0.15;            // trust
};

// Thrown for bad flags or flag combinations; maps to exit status 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ParseOutcome {
  std::optional<Command> command;
  // Set when parsing finished without a command (help requested, or usage
  // error); `text` goes to stdout for help and stderr otherwise.
  int exit_code = 0;
  std::string text;
};

ParseOutcome parse_command_line(const std::vector<std::string>& args);

class Session {
 public:
  explicit Session(Digraph graph);

  const Digraph& graph() const noexcept { return graph_; }
  const TransitionMatrix& transition() const noexcept { return transition_; }
  const LaplacianPinv& pinv();
  const TrustNetwork& trust(double rate);

  // Writes the formatted result; diagnostics (e.g. memory estimates) go to
  // `err`. Throws rwlap::Error for domain failures, including unknown node
  // labels, and UsageError for bad flag combinations.
  void execute(const Command& cmd, std::ostream& out, std::ostream& err);

 private:
  std::size_t node(const std::string& label) const;
  std::vector<std::size_t> nodes(const std::vector<std::string>& labels) const;

  Digraph graph_;
  TransitionMatrix transition_;
  std::unique_ptr<LaplacianPinv> pinv_;
  std::map<double, std::unique_ptr<TrustNetwork>> trust_;
};

// Full CLI entry point: 0 on success, 1 on domain errors (structured JSON on
// `err`), 2 on usage errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rwlap::cli
