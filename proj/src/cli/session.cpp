#include <cmath>
#include <ostream>

#include "format.hpp"
#include "rwlap/cli.hpp"
#include "rwlap/error.hpp"
#include "rwlap/measures.hpp"
#include "rwlap/oracle.hpp"
#include "rwlap/tensor.hpp"

namespace rwlap::cli {

using detail::Json;
using detail::NumberFormat;

Session::Session(Digraph graph) : graph_(std::move(graph)), transition_(transition_matrix(graph_)) {}

const LaplacianPinv& Session::pinv() {
  if (pinv_) return *pinv_;
  try {
    pinv_ = std::make_unique<LaplacianPinv>(rw_laplacian_pinv(transition_, true));
  } catch (const NotStronglyConnectedError& e) {
    std::vector<std::string> labels;
    for (std::size_t i : e.nodes()) labels.push_back(graph_.label(i));
    if (labels.size() != 2) throw;
    throw Error(ErrorCode::not_strongly_connected,
                "graph is not strongly connected: no path from '" + labels[0] + "' to '" + labels[1] + "'",
                e.nodes(), labels);
  }
  return *pinv_;
}

const TrustNetwork& Session::trust(double rate) {
  auto& slot = trust_[rate];
  if (!slot) slot = std::make_unique<TrustNetwork>(augment_evaporation(graph_, rate));
  return *slot;
}

std::size_t Session::node(const std::string& label) const {
  if (auto i = graph_.find(label)) return *i;
  throw Error(ErrorCode::domain, "unknown node '" + label + "'", {}, {label});
}

std::vector<std::size_t> Session::nodes(const std::vector<std::string>& labels) const {
  std::vector<std::size_t> out;
  out.reserve(labels.size());
  for (const auto& l : labels) out.push_back(node(l));
  return out;
}

namespace {

struct Estimate {
  double value;
  double stderr_;
  std::size_t accepted;
  std::size_t capped;
};

Json verify_json(const NumberFormat& fmt, double closed, const Estimate& e, std::size_t walks, std::uint64_t seed) {
  Json v;
  v["method"] = "monte-carlo";
  v["walks"] = walks;
  v["seed"] = seed;
  v["accepted"] = e.accepted;
  v["capped"] = e.capped;
  v["closed_form"] = fmt.json(closed);
  v["estimate"] = fmt.json(e.value);
  v["stderr"] = fmt.json(e.stderr_);
  double z = 0.0;
  if (e.stderr_ > 0.0) {
    z = (e.value - closed) / e.stderr_;
  } else if (std::fabs(e.value - closed) > 1e-9) {
    z = NAN;
  }
  v["z"] = fmt.json(z);
  return v;
}

// Distinct deterministic seeds for the several simulations one query may need.
std::uint64_t sub_seed(std::uint64_t seed, std::size_t index) { return seed + 0x9E3779B97F4A7C15ULL * index; }

class Writer {
 public:
  Writer(const Command& cmd, std::ostream& out) : cmd_(cmd), out_(out), fmt_(cmd.global.precision) {}

  const NumberFormat& fmt() const { return fmt_; }
  bool csv() const { return cmd_.global.format == OutputFormat::csv; }

  void json(const Json& j) { out_ << j.dump(2) << "\n"; }

  void csv_matrix(const std::vector<std::string>& row_labels, const std::vector<std::string>& col_labels,
                  const Matrix& m, const std::vector<bool>* row_mask = nullptr) {
    out_ << "";
    for (const auto& l : col_labels) out_ << "," << l;
    if (row_mask) out_ << ",reachable";
    out_ << "\n";
    for (std::size_t i = 0; i < m.rows(); ++i) {
      out_ << row_labels[i];
      const bool ok = !row_mask || (*row_mask)[i];
      for (std::size_t j = 0; j < m.cols(); ++j) {
        out_ << ",";
        if (ok) out_ << fmt_.text(m(i, j));
      }
      if (row_mask) out_ << "," << (ok ? "true" : "false");
      out_ << "\n";
    }
  }

  void csv_record(const std::vector<std::pair<std::string, std::string>>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) out_ << (i ? "," : "") << fields[i].first;
    out_ << "\n";
    for (std::size_t i = 0; i < fields.size(); ++i) out_ << (i ? "," : "") << fields[i].second;
    out_ << "\n";
  }

  std::ostream& raw() { return out_; }

 private:
  const Command& cmd_;
  std::ostream& out_;
  NumberFormat fmt_;
};

Json query_json(const Command& cmd) {
  Json q;
  q["command"] = cmd.name;
  if (cmd.name == "pinv") q["normalized"] = cmd.normalized;
  if (cmd.name == "tensor") {
    q["target"] = cmd.target;
    if (cmd.full) q["full"] = true;
  }
  if (cmd.name == "hitting") {
    q["from"] = cmd.from;
    q["to"] = cmd.target;
  }
  if (cmd.name == "commute") {
    q["a"] = cmd.a;
    q["b"] = cmd.b;
  }
  if (cmd.name == "centrality") {
    if (cmd.node) q["node"] = *cmd.node;
    q["kind"] = cmd.kind;
  }
  if (cmd.name == "passage") {
    q["from"] = cmd.from;
    q["via"] = cmd.via;
    q["to"] = cmd.target;
  }
  if (cmd.name == "trust") q["viewpoint"] = cmd.viewpoint;
  if (!cmd.avoid.empty()) q["avoid"] = cmd.avoid;
  return q;
}

Json flags_json(const Command& cmd) {
  Json f = Json::object();
  if (!cmd.avoid.empty()) f["avoid"] = cmd.avoid;
  if (cmd.name == "centrality" && cmd.exclude_diagonal) f["exclude_diagonal"] = true;
  if (cmd.name == "trust") f["evaporation"] = cmd.evaporation;
  return f;
}

void scalar_result(Writer& w, const Command& cmd, double value, const std::optional<Json>& verify) {
  if (w.csv()) {
    std::vector<std::pair<std::string, std::string>> fields;
    for (const auto& [k, v] : query_json(cmd).items()) {
      fields.emplace_back(k, v.is_string() ? v.get<std::string>() : v.dump());
    }
    fields.emplace_back("value", w.fmt().text(value));
    if (verify) {
      fields.emplace_back("mc_estimate", w.fmt().text((*verify)["estimate"].is_null() ? NAN : (*verify)["estimate"].get<double>()));
      fields.emplace_back("mc_stderr", w.fmt().text((*verify)["stderr"].is_null() ? NAN : (*verify)["stderr"].get<double>()));
      fields.emplace_back("mc_z", w.fmt().text((*verify)["z"].is_null() ? NAN : (*verify)["z"].get<double>()));
    }
    w.csv_record(fields);
    return;
  }
  Json j;
  j["query"] = query_json(cmd);
  j["value"] = w.fmt().json(value);
  j["flags"] = flags_json(cmd);
  if (verify) j["verify"] = *verify;
  w.json(j);
}

}  // namespace

void Session::execute(const Command& cmd, std::ostream& out, std::ostream& err) {
  Writer w(cmd, out);
  const auto& labels = graph_.labels();
  const std::uint64_t seed = cmd.global.seed;
  const auto walks = cmd.global.verify_walks;

  auto simulate = [&](std::size_t from, std::size_t to, const IndexSet& avoid, std::size_t idx) {
    return simulate_walks(transition_, from, to, avoid, *walks, sub_seed(seed, idx));
  };

  if (cmd.name == "pinv") {
    const LaplacianPinv& lp = pinv();
    if (w.csv()) {
      if (cmd.normalized) w.raw() << "# random-walk Laplacian pseudoinverse\n";
      w.csv_matrix(labels, labels, lp.pinv());
      if (cmd.normalized) {
        w.raw() << "# normalized Laplacian pseudoinverse\n";
        w.csv_matrix(labels, labels, *lp.normalized_pinv());
      }
      return;
    }
    Json j;
    j["query"] = query_json(cmd);
    j["labels"] = labels;
    j["stationary"] = w.fmt().json(lp.pi());
    j["value"] = w.fmt().json(lp.pinv());
    if (cmd.normalized) j["normalized_pinv"] = w.fmt().json(*lp.normalized_pinv());
    j["flags"] = flags_json(cmd);
    w.json(j);
    return;
  }

  if (cmd.name == "tensor") {
    const std::size_t k = node(cmd.target);
    const FundamentalTensor t(pinv());
    if (!cmd.avoid.empty()) {
      const Partition p = Partition::avoiding(graph_.size(), nodes(cmd.avoid), k);
      const AvoidanceCounts counts = visits_avoiding(t, p);
      std::vector<std::string> beta_labels;
      for (std::size_t b : p.beta()) beta_labels.push_back(labels[b]);
      if (w.csv()) {
        w.csv_matrix(beta_labels, beta_labels, counts.counts, &counts.reachable_mask);
        return;
      }
      Json j;
      j["query"] = query_json(cmd);
      j["labels"] = beta_labels;
      Json rows = Json::array();
      Json reach = Json::object();
      for (std::size_t a = 0; a < p.beta().size(); ++a) {
        reach[beta_labels[a]] = static_cast<bool>(counts.reachable_mask[a]);
        if (!counts.reachable_mask[a]) {
          rows.push_back(nullptr);
          continue;
        }
        Json row = Json::array();
        for (double v : counts.counts.row(a)) row.push_back(w.fmt().json(v));
        rows.push_back(std::move(row));
      }
      j["value"] = std::move(rows);
      Json flags = flags_json(cmd);
      flags["reachable"] = std::move(reach);
      j["flags"] = std::move(flags);
      w.json(j);
      return;
    }
    if (cmd.full) {
      const std::size_t n = graph_.size();
      err << "full tensor: " << n << "^3 = " << n * n * n << " entries, "
          << static_cast<double>(full_tensor_bytes(n)) / (1024.0 * 1024.0) << " MiB\n";
      if (w.csv()) {
        w.raw() << "target,source,node,visits\n";
        for (std::size_t kk = 0; kk < n; ++kk) {
          const Matrix s = fundamental_slice(t, kk);
          for (std::size_t i = 0; i < n; ++i)
            for (std::size_t jj = 0; jj < n; ++jj)
              w.raw() << labels[kk] << "," << labels[i] << "," << labels[jj] << "," << w.fmt().text(s(i, jj)) << "\n";
        }
        return;
      }
      Json j;
      j["query"] = query_json(cmd);
      j["labels"] = labels;
      Json slices = Json::array();
      for (std::size_t kk = 0; kk < n; ++kk) {
        Json s;
        s["target"] = labels[kk];
        s["slice"] = w.fmt().json(fundamental_slice(t, kk));
        slices.push_back(std::move(s));
      }
      j["value"] = std::move(slices);
      j["flags"] = flags_json(cmd);
      w.json(j);
      return;
    }
    const Matrix slice = fundamental_slice(t, k);
    if (w.csv()) {
      w.csv_matrix(labels, labels, slice);
      return;
    }
    Json j;
    j["query"] = query_json(cmd);
    j["labels"] = labels;
    j["value"] = w.fmt().json(slice);
    j["flags"] = flags_json(cmd);
    w.json(j);
    return;
  }

  if (cmd.name == "hitting") {
    const std::size_t i = node(cmd.from);
    const std::size_t k = node(cmd.target);
    const FundamentalTensor t(pinv());
    const IndexSet avoid = nodes(cmd.avoid);
    const double value = avoid.empty() ? hitting_time(t, i, k)
                                       : conditional_hitting_time(t, i, Partition::avoiding(graph_.size(), avoid, k));
    std::optional<Json> verify;
    if (walks) {
      const WalkStats s = simulate(i, k, avoid, 0);
      verify = verify_json(w.fmt(), value, {s.hit_time_mean, s.hit_time_stderr, s.accepted, s.capped}, *walks, seed);
    }
    scalar_result(w, cmd, value, verify);
    return;
  }

  if (cmd.name == "commute") {
    const std::size_t i = node(cmd.a);
    const std::size_t k = node(cmd.b);
    const FundamentalTensor t(pinv());
    const double value = commute_time(t, i, k);
    std::optional<Json> verify;
    if (walks) {
      Estimate e{0.0, 0.0, 0, 0};
      if (i != k) {
        const WalkStats there = simulate(i, k, {}, 0);
        const WalkStats back = simulate(k, i, {}, 1);
        e = {there.hit_time_mean + back.hit_time_mean,
             std::hypot(there.hit_time_stderr, back.hit_time_stderr), there.accepted + back.accepted,
             there.capped + back.capped};
      }
      verify = verify_json(w.fmt(), value, e, *walks, seed);
    }
    scalar_result(w, cmd, value, verify);
    return;
  }

  if (cmd.name == "centrality") {
    const FundamentalTensor t(pinv());
    const MeasureKind kind = cmd.kind == "closeness"     ? MeasureKind::closeness
                             : cmd.kind == "betweenness" ? MeasureKind::betweenness
                                                         : MeasureKind::commute_centrality;
    if (!cmd.node) {
      const MeasureReport r = centrality_report(t, kind, cmd.exclude_diagonal);
      if (w.csv()) {
        w.raw() << "node," << cmd.kind << "\n";
        for (const auto& [key, v] : r.values) w.raw() << labels[key[0]] << "," << w.fmt().text(v) << "\n";
        return;
      }
      Json j;
      j["query"] = query_json(cmd);
      Json values = Json::object();
      for (const auto& [key, v] : r.values) values[labels[key[0]]] = w.fmt().json(v);
      j["value"] = std::move(values);
      j["flags"] = flags_json(cmd);
      w.json(j);
      return;
    }
    const std::size_t k = node(*cmd.node);
    const std::size_t n = graph_.size();
    double value = 0.0;
    switch (kind) {
      case MeasureKind::closeness: value = closeness(t, k); break;
      case MeasureKind::betweenness: value = betweenness(t, k, cmd.exclude_diagonal); break;
      default: value = commute_centrality(t, k); break;
    }
    std::optional<Json> verify;
    if (walks) {
      double est = 0.0;
      double var = 0.0;
      std::size_t accepted = 0;
      std::size_t capped = 0;
      std::size_t idx = 0;
      auto add = [&](double mean, double se, double weight, const WalkStats& s) {
        est += weight * mean;
        var += weight * weight * se * se;
        accepted += s.accepted;
        capped += s.capped;
      };
      for (std::size_t i = 0; i < n; ++i) {
        if (kind == MeasureKind::betweenness) {
          if (i == k) continue;
          for (std::size_t kk = 0; kk < n; ++kk) {
            if (kk == k || kk == i) continue;
            const WalkStats s = simulate(i, kk, {}, idx++);
            add(s.passage_freq[k], s.passage_stderr[k], 1.0, s);
          }
        } else if (i != k) {
          const WalkStats to = simulate(i, k, {}, idx++);
          if (kind == MeasureKind::closeness) {
            add(to.hit_time_mean, to.hit_time_stderr, 1.0, to);
          } else {
            const double inv_n = 1.0 / static_cast<double>(n);
            add(to.hit_time_mean, to.hit_time_stderr, inv_n, to);
            const WalkStats from = simulate(k, i, {}, idx++);
            add(from.hit_time_mean, from.hit_time_stderr, inv_n, from);
          }
        }
      }
      verify = verify_json(w.fmt(), value, {est, std::sqrt(var), accepted, capped}, *walks, seed);
    }
    scalar_result(w, cmd, value, verify);
    return;
  }

  if (cmd.name == "passage") {
    const std::size_t i = node(cmd.from);
    const std::size_t jn = node(cmd.via);
    const std::size_t k = node(cmd.target);
    const FundamentalTensor t(pinv());
    const IndexSet avoid = nodes(cmd.avoid);
    const double value = avoid.empty() ? passage_probability(t, i, jn, k)
                                       : passage_probability_avoiding(
                                             t, i, jn, Partition::avoiding(graph_.size(), avoid, k));
    std::optional<Json> verify;
    if (walks) {
      const WalkStats s = simulate(i, k, avoid, 0);
      verify = verify_json(w.fmt(), value, {s.passage_freq[jn], s.passage_stderr[jn], s.accepted, s.capped}, *walks,
                           seed);
    }
    scalar_result(w, cmd, value, verify);
    return;
  }

  if (cmd.name == "trust") {
    const std::size_t v = node(cmd.viewpoint);
    const IndexSet avoid = nodes(cmd.avoid);
    const TrustNetwork& net = trust(cmd.evaporation);
    const std::vector<TrustScore> ranking = rank_subjects(net, v, avoid);
    std::optional<WalkStats> sim;
    if (walks) {
      sim = simulate_walks(net.augmented(), v, net.evaporation_node(), avoid, *walks, sub_seed(seed, 0));
    }
    auto estimate = [&](std::size_t j) {
      const WalkStats& s = *sim;
      return avoid.empty() ? Estimate{s.passage_freq[j], s.passage_stderr[j], s.accepted, s.capped}
                           : Estimate{s.exit_passage_freq[j], s.exit_passage_stderr[j], s.accepted, s.capped};
    };
    if (w.csv()) {
      w.raw() << "rank,subject,score" << (sim ? ",mc_estimate,mc_stderr" : "") << "\n";
      for (std::size_t r = 0; r < ranking.size(); ++r) {
        w.raw() << r + 1 << "," << labels[ranking[r].subject] << "," << w.fmt().text(ranking[r].score);
        if (sim) {
          const Estimate e = estimate(ranking[r].subject);
          w.raw() << "," << w.fmt().text(e.value) << "," << w.fmt().text(e.stderr_);
        }
        w.raw() << "\n";
      }
      return;
    }
    Json j;
    j["query"] = query_json(cmd);
    Json list = Json::array();
    for (const auto& s : ranking) {
      Json item;
      item["subject"] = labels[s.subject];
      item["score"] = w.fmt().json(s.score);
      if (sim) item["verify"] = verify_json(w.fmt(), s.score, estimate(s.subject), *walks, sub_seed(seed, 0));
      list.push_back(std::move(item));
    }
    j["value"] = std::move(list);
    j["flags"] = flags_json(cmd);
    w.json(j);
    return;
  }

  throw UsageError("unknown subcommand '" + cmd.name + "'");
}

}  // namespace rwlap::cli
