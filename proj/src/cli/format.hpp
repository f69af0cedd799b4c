#pragma once

#include <charconv>
#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "rwlap/matrix.hpp"

namespace rwlap::cli::detail {

using Json = nlohmann::ordered_json;

// Number formatting shared by the JSON and CSV writers.
class NumberFormat {
 public:
  explicit NumberFormat(std::optional<int> significant) : digits_(significant) {}

  // Value rounded to the requested significant digits (identity at full
  // precision), so that JSON serialization prints the rounded form.
  double round(double v) const {
    if (!digits_ || !std::isfinite(v)) return v;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", *digits_, v);
    return std::strtod(buf, nullptr);
  }

  std::string text(double v) const {
    if (std::isnan(v)) return "nan";
    if (!digits_) {
      char buf[64];
      auto res = std::to_chars(buf, buf + sizeof buf, v);
      return std::string(buf, res.ptr);
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", *digits_, v);
    return buf;
  }

  Json json(double v) const {
    if (!std::isfinite(v)) return nullptr;
    return round(v);
  }

  Json json(const Matrix& m) const {
    Json rows = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
      Json row = Json::array();
      for (double v : m.row(i)) row.push_back(json(v));
      rows.push_back(std::move(row));
    }
    return rows;
  }

  Json json(const std::vector<double>& v) const {
    Json out = Json::array();
    for (double x : v) out.push_back(json(x));
    return out;
  }

 private:
  std::optional<int> digits_;
};

}  // namespace rwlap::cli::detail
