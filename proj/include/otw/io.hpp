#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "otw/error.hpp"
#include "otw/instance.hpp"

namespace otw {

namespace detail {

[[noreturn]] inline void parse_fail(const std::string& where, const std::string& what) {
  throw Error(ErrorKind::parse, where + ": " + what);
}

/// Integers, "p/q" or decimal strings, and JSON decimals (at most 6
/// fractional digits) all read exactly.
inline Rational read_number(const nlohmann::json& j, const std::string& where) {
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  if (j.is_string()) {
    if (auto r = parse_rational(j.get<std::string>())) return *r;
    parse_fail(where, "not an exact number: \"" + j.get<std::string>() + "\"");
  }
  if (j.is_number_float()) {
    if (auto r = rational_from_decimal(j.get<double>())) return *r;
    parse_fail(where, "decimal needs at most 6 fractional digits (or use \"p/q\")");
  }
  parse_fail(where, "expected a number");
}

inline Rational read_time(const nlohmann::json& j, const std::string& where,
                          const std::optional<std::int64_t>& scale) {
  Rational r = read_number(j, where);
  if (!scale) return r;
  if (!is_integer(r)) parse_fail(where, "times must be integers when time_scale is set");
  return r / *scale;
}

inline Vertex read_vertex(const nlohmann::json& j, const std::string& where, std::size_t n) {
  if (!j.is_number_integer() || j.get<std::int64_t>() < 0 ||
      static_cast<std::size_t>(j.get<std::int64_t>()) >= n)
    parse_fail(where, "expected a vertex id in [0," + std::to_string(n) + ")");
  return static_cast<Vertex>(j.get<std::int64_t>());
}

inline const nlohmann::json& require(const nlohmann::json& doc, const char* key) {
  if (!doc.contains(key)) parse_fail(key, "missing key");
  return doc.at(key);
}

inline nlohmann::json write_number(const Rational& r) {
  if (is_integer(r)) return r.numerator();
  return to_string(r);
}

}  // namespace detail

inline TwInstance instance_from_json(const nlohmann::json& doc) {
  using namespace detail;
  if (!doc.is_object()) parse_fail("document", "expected an object");
  std::optional<std::int64_t> scale;
  if (doc.contains("time_scale")) {
    const auto& s = doc.at("time_scale");
    if (!s.is_number_integer() || s.get<std::int64_t>() <= 0)
      parse_fail("time_scale", "expected a positive integer");
    scale = s.get<std::int64_t>();
  }
  const auto& directed = require(doc, "directed");
  if (!directed.is_boolean()) parse_fail("directed", "expected true or false");
  const auto& n_json = require(doc, "n");
  if (!n_json.is_number_integer() || n_json.get<std::int64_t>() < 0)
    parse_fail("n", "expected a nonnegative integer");
  const auto n = static_cast<std::size_t>(n_json.get<std::int64_t>());

  Graph g{directed.get<bool>(), n, {}};
  const auto& edges = require(doc, "edges");
  if (!edges.is_array()) parse_fail("edges", "expected a list of [u,v,w]");
  for (std::size_t i = 0; i < edges.size(); ++i) {
    std::string where = "edges[" + std::to_string(i) + "]";
    const auto& e = edges[i];
    if (!e.is_array() || e.size() != 3) parse_fail(where, "expected [u,v,w]");
    Edge edge{read_vertex(e[0], where, n), read_vertex(e[1], where, n),
              read_time(e[2], where, scale)};
    if (edge.w < 0) parse_fail(where, "negative travel time");
    g.edges.push_back(edge);
  }

  TwInstance x;
  x.metric = metric_closure(g);
  const auto& windows = require(doc, "windows");
  if (!windows.is_array() || windows.size() != n)
    parse_fail("windows", "expected " + std::to_string(n) + " [release,deadline] pairs");
  for (std::size_t v = 0; v < n; ++v) {
    std::string where = "windows[" + std::to_string(v) + "]";
    const auto& w = windows[v];
    if (!w.is_array() || w.size() != 2) parse_fail(where, "expected [release,deadline]");
    TimeWindow tw{read_time(w[0], where, scale), read_time(w[1], where, scale)};
    if (tw.release > tw.deadline)
      parse_fail(where, "release " + to_string(tw.release) + " after deadline " +
                          to_string(tw.deadline));
    x.windows.push_back(tw);
  }
  if (doc.contains("rewards")) {
    const auto& rewards = doc.at("rewards");
    if (!rewards.is_array() || rewards.size() != n)
      parse_fail("rewards", "expected " + std::to_string(n) + " rewards");
    for (std::size_t v = 0; v < n; ++v) {
      Rational r = read_number(rewards[v], "rewards[" + std::to_string(v) + "]");
      if (r < 0) parse_fail("rewards[" + std::to_string(v) + "]", "negative reward");
      x.rewards.push_back(r);
    }
  } else {
    x.rewards.assign(n, Rational(1));
  }
  if (doc.contains("s") && !doc.at("s").is_null()) x.start = read_vertex(doc.at("s"), "s", n);
  if (doc.contains("t") && !doc.at("t").is_null()) x.end = read_vertex(doc.at("t"), "t", n);
  x.budget = read_time(require(doc, "budget"), "budget", scale);
  if (x.budget < 0) parse_fail("budget", "must be nonnegative");
  if (doc.contains("wait_policy")) {
    const auto& p = doc.at("wait_policy");
    if (p == "wait")
      x.wait_policy = WaitPolicy::wait;
    else if (p == "no-wait")
      x.wait_policy = WaitPolicy::no_wait;
    else
      parse_fail("wait_policy", "expected \"wait\" or \"no-wait\"");
  }
  x.validate();
  return x;
}

/// Parses instance text; syntax errors report line and column.
inline TwInstance parse_instance_text(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1, column = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw Error(ErrorKind::parse,
                "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
                  e.what());
  }
  return instance_from_json(doc);
}

inline TwInstance parse_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::parse, path.string() + ": cannot open");
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_instance_text(buffer.str());
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

/// The metric is written as its complete graph, so reading it back closes to
/// the identical table.
inline nlohmann::json instance_to_json(const TwInstance& x) {
  using detail::write_number;
  nlohmann::json doc;
  doc["directed"] = x.metric.directed();
  doc["n"] = x.size();
  nlohmann::json edges = nlohmann::json::array();
  for (const Edge& e : complete_graph(x.metric).edges)
    edges.push_back({e.u, e.v, write_number(e.w)});
  doc["edges"] = edges;
  nlohmann::json windows = nlohmann::json::array(), rewards = nlohmann::json::array();
  for (Vertex v = 0; v < x.size(); ++v) {
    windows.push_back({write_number(x.windows[v].release), write_number(x.windows[v].deadline)});
    rewards.push_back(write_number(x.rewards[v]));
  }
  doc["windows"] = windows;
  doc["rewards"] = rewards;
  if (x.start) doc["s"] = *x.start;
  if (x.end) doc["t"] = *x.end;
  doc["budget"] = write_number(x.budget);
  doc["wait_policy"] = x.wait_policy == WaitPolicy::wait ? "wait" : "no-wait";
  return doc;
}

inline std::string serialize_instance(const TwInstance& x) {
  return instance_to_json(x).dump(1) + "\n";
}

}  // namespace otw
