#pragma once

// JSON instance files and DIMACS wcnf.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "frusloop/convert.hpp"
#include "frusloop/core.hpp"
#include "frusloop/error.hpp"

namespace frusloop {

inline constexpr std::int64_t kDefaultWcnfScale = 1'000'000;

namespace detail {

inline std::string fmt_real(double x) {
  if (!std::isfinite(x)) throw FormatError("cannot serialize non-finite real");
  if (x == 0.0) return "0";  // also folds -0 from gauge sign flips
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline void append_reals(std::string& out, std::span<const double> xs) {
  out += '[';
  for (std::size_t k = 0; k < xs.size(); ++k) {
    if (k) out += ',';
    out += fmt_real(xs[k]);
  }
  out += ']';
}

inline void append_spins(std::string& out, const std::vector<Spin>& s) {
  out += '[';
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (k) out += ',';
    out += s[k] > 0 ? "1" : "-1";
  }
  out += ']';
}

inline std::string quote(std::string_view s) { return nlohmann::json(std::string(s)).dump(); }

}  // namespace detail

/// Serializes an instance as a single JSON document. Reals use 17
/// significant digits; W is a flat row-major array. `provenance` is embedded
/// verbatim when it is not null.
inline std::string instance_to_json(const RbmInstance& inst,
                                    const nlohmann::json& provenance = nullptr) {
  validate(inst);
  using detail::fmt_real;
  std::string out = "{\n";
  out += "  \"n\": " + std::to_string(inst.n()) + ",\n";
  out += "  \"m\": " + std::to_string(inst.m()) + ",\n";
  out += "  \"W\": ";
  detail::append_reals(out, inst.W.data());
  out += ",\n  \"a\": ";
  detail::append_reals(out, inst.a);
  out += ",\n  \"b\": ";
  detail::append_reals(out, inst.b);
  if (inst.planted) {
    out += ",\n  \"planted\": {\"v\": ";
    detail::append_spins(out, inst.planted->v);
    out += ", \"h\": ";
    detail::append_spins(out, inst.planted->h);
    out += "}";
  }
  if (inst.ground_energy) out += ",\n  \"ground_energy\": " + fmt_real(*inst.ground_energy);

  const GenMeta& g = inst.meta;
  out += ",\n  \"meta\": {";
  out += "\"algorithm\": " + detail::quote(g.algorithm);
  out += ", \"f\": " + fmt_real(g.f);
  out += ", \"alpha\": " + fmt_real(g.alpha);
  out += ", \"rho\": " + fmt_real(g.rho);
  out += ", \"d\": " + fmt_real(g.d);
  out += ", \"N\": " + std::to_string(g.N);
  out += ", \"N1\": " + std::to_string(g.N1);
  out += ", \"N2\": " + std::to_string(g.N2);
  out += ", \"N3\": " + std::to_string(g.N3);
  out += ", \"seed\": " + std::to_string(g.seed);
  out += ", \"allow_constructive\": " + std::string(g.allow_constructive ? "true" : "false");
  out += ", \"allow_destructive\": " + std::string(g.allow_destructive ? "true" : "false");
  out += ", \"jitter\": " + fmt_real(g.jitter);
  out += ", \"f_certified\": " + std::string(g.f_certified ? "true" : "false");
  out += "}";
  if (!provenance.is_null()) out += ",\n  \"provenance\": " + provenance.dump();
  out += "\n}\n";
  return out;
}

namespace detail {

inline std::vector<Spin> spins_from_json(const nlohmann::json& j, std::size_t len,
                                         const char* what) {
  if (!j.is_array() || j.size() != len) throw FormatError(std::string(what) + " has wrong length");
  std::vector<Spin> s;
  for (const auto& x : j) {
    const int v = x.get<int>();
    if (v != 1 && v != -1) throw FormatError(std::string(what) + " entries must be +-1");
    s.push_back(static_cast<Spin>(v));
  }
  return s;
}

inline std::vector<double> reals_from_json(const nlohmann::json& j, std::size_t len,
                                           const char* what) {
  if (!j.is_array() || j.size() != len) throw FormatError(std::string(what) + " has wrong length");
  std::vector<double> r;
  r.reserve(len);
  for (const auto& x : j) r.push_back(x.get<double>());
  return r;
}

}  // namespace detail

/// Parses an instance document; W may be flat row-major or nested rows.
/// Missing a/b default to zero.
inline RbmInstance instance_from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("invalid JSON: ") + e.what());
  }
  try {
    if (!j.is_object()) throw FormatError("instance must be a JSON object");
    const auto n = j.at("n").get<std::size_t>();
    const auto m = j.at("m").get<std::size_t>();
    if (n == 0 || m == 0) throw FormatError("instance needs n >= 1 and m >= 1");
    const auto& jw = j.at("W");
    std::vector<double> w;
    if (jw.is_array() && !jw.empty() && jw.front().is_array()) {
      if (jw.size() != n) throw FormatError("W has wrong number of rows");
      for (const auto& row : jw) {
        auto r = detail::reals_from_json(row, m, "W row");
        w.insert(w.end(), r.begin(), r.end());
      }
    } else {
      w = detail::reals_from_json(jw, n * m, "W");
    }
    RbmInstance inst(Matrix(n, m, std::move(w)));
    if (j.contains("a")) inst.a = detail::reals_from_json(j["a"], n, "a");
    if (j.contains("b")) inst.b = detail::reals_from_json(j["b"], m, "b");
    if (j.contains("planted") && !j["planted"].is_null()) {
      const auto& p = j["planted"];
      inst.planted = SpinState{detail::spins_from_json(p.at("v"), n, "planted.v"),
                               detail::spins_from_json(p.at("h"), m, "planted.h")};
    }
    if (j.contains("ground_energy") && !j["ground_energy"].is_null())
      inst.ground_energy = j["ground_energy"].get<double>();
    if (j.contains("meta")) {
      const auto& mj = j["meta"];
      GenMeta& g = inst.meta;
      g.algorithm = mj.value("algorithm", std::string{});
      g.f = mj.value("f", 0.0);
      g.alpha = mj.value("alpha", 0.0);
      g.rho = mj.value("rho", 0.0);
      g.d = mj.value("d", 0.0);
      g.N = mj.value("N", std::size_t{0});
      g.N1 = mj.value("N1", std::size_t{0});
      g.N2 = mj.value("N2", std::size_t{0});
      g.N3 = mj.value("N3", std::size_t{0});
      g.seed = mj.value("seed", std::uint64_t{0});
      g.allow_constructive = mj.value("allow_constructive", true);
      g.allow_destructive = mj.value("allow_destructive", false);
      g.jitter = mj.value("jitter", 0.0);
      g.f_certified = mj.value("f_certified", false);
    }
    validate(inst);
    return inst;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed instance: ") + e.what());
  } catch (const DimensionError& e) {
    throw FormatError(std::string("malformed instance: ") + e.what());
  }
}

/// DIMACS wcnf with integer weights round(w * scale). Comment lines carry
/// the scale, simplification offset, visible count, planted assignment and
/// free-form metadata. Zero-weight clauses are skipped.
inline std::string write_wcnf(const Max2SatInstance& sat, std::int64_t scale = kDefaultWcnfScale) {
  validate(sat);
  detail::require(scale >= 1, "wcnf scale must be >= 1");
  std::vector<std::pair<std::int64_t, const WeightedClause*>> rows;
  std::int64_t top = 1;
  for (const auto& c : sat.clauses) {
    if (c.weight == 0.0) continue;
    const auto w = std::llround(c.weight * static_cast<double>(scale));
    if (w == 0)
      throw InvalidParameter("clause weight " + detail::fmt_real(c.weight) +
                             " rounds to zero at scale " + std::to_string(scale));
    rows.emplace_back(w, &c);
    top += w;
  }
  std::string out;
  out += "c scale " + std::to_string(scale) + "\n";
  if (sat.satisfied_offset != 0.0) out += "c offset " + detail::fmt_real(sat.satisfied_offset) + "\n";
  if (sat.n_visible) out += "c visible " + std::to_string(sat.n_visible) + "\n";
  for (const auto& [key, value] : sat.comments) out += "c " + key + " " + value + "\n";
  if (sat.planted) {
    out += "c planted";
    for (Spin s : *sat.planted) out += s > 0 ? " 1" : " -1";
    out += "\n";
  }
  out += "p wcnf " + std::to_string(sat.num_vars) + " " + std::to_string(rows.size()) + " " +
         std::to_string(top) + "\n";
  for (const auto& [w, c] : rows) {
    out += std::to_string(w) + " " + std::to_string(c->lit1);
    if (!c->is_unit()) out += " " + std::to_string(c->lit2);
    out += " 0\n";
  }
  return out;
}

/// Parses wcnf back; weights are divided by the `c scale` comment if
/// present, else by `scale`. Clauses with more than two literals or a hard
/// weight (>= top) are rejected.
inline Max2SatInstance read_wcnf(std::string_view text, std::int64_t scale = 1) {
  Max2SatInstance sat;
  std::istringstream in{std::string(text)};
  std::string line;
  bool header = false;
  std::int64_t top = 0;
  std::size_t declared = 0;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& msg) {
    throw FormatError("wcnf line " + std::to_string(line_no) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;
    if (tok == "c") {
      std::string key;
      if (!(ls >> key)) continue;
      if (key == "scale") {
        if (!(ls >> scale) || scale < 1) fail("bad scale comment");
      } else if (key == "offset") {
        if (!(ls >> sat.satisfied_offset)) fail("bad offset comment");
      } else if (key == "visible") {
        if (!(ls >> sat.n_visible)) fail("bad visible comment");
      } else if (key == "planted") {
        std::vector<Spin> p;
        int s;
        while (ls >> s) {
          if (s != 1 && s != -1) fail("planted entries must be +-1");
          p.push_back(static_cast<Spin>(s));
        }
        sat.planted = std::move(p);
      } else {
        std::string rest;
        std::getline(ls >> std::ws, rest);
        sat.comments.emplace_back(key, rest);
      }
      continue;
    }
    if (tok == "p") {
      std::string kind;
      if (header) fail("duplicate header");
      if (!(ls >> kind >> sat.num_vars >> declared) || kind != "wcnf") fail("expected 'p wcnf nv nc [top]'");
      if (!(ls >> top)) top = 0;
      header = true;
      continue;
    }
    if (!header) fail("clause before header");
    std::int64_t w = 0;
    try {
      std::size_t pos = 0;
      w = std::stoll(tok, &pos);
      if (pos != tok.size()) fail("bad weight");
    } catch (const std::logic_error&) {
      fail("bad weight");
    }
    if (w < 0) fail("negative weight");
    if (top > 0 && w >= top) fail("hard clauses are not supported");
    std::vector<int> lits;
    long long lit;
    bool closed = false;
    while (ls >> lit) {
      if (lit == 0) {
        closed = true;
        break;
      }
      if (std::llabs(lit) > static_cast<long long>(sat.num_vars)) fail("literal out of range");
      lits.push_back(static_cast<int>(lit));
    }
    if (!closed) fail("clause not terminated by 0");
    if (lits.empty() || lits.size() > 2) fail("only 1- and 2-literal clauses are supported");
    if (lits.size() == 2 && std::abs(lits[0]) == std::abs(lits[1])) fail("clause repeats a variable");
    sat.clauses.push_back({lits[0], lits.size() == 2 ? lits[1] : 0,
                           static_cast<double>(w) / static_cast<double>(scale)});
  }
  if (!header) throw FormatError("wcnf header missing");
  if (sat.clauses.size() != declared)
    throw FormatError("wcnf declares " + std::to_string(declared) + " clauses, found " +
                      std::to_string(sat.clauses.size()));
  if (sat.planted && sat.planted->size() != sat.num_vars)
    throw FormatError("planted comment length differs from variable count");
  if (sat.n_visible > sat.num_vars) throw FormatError("visible count exceeds variable count");
  return sat;
}

/// MAX-2-SAT view of an instance with its metadata attached as comments.
inline Max2SatInstance instance_to_max2sat(const RbmInstance& inst) {
  Max2SatInstance sat = rbm_to_max2sat(inst);
  const GenMeta& g = inst.meta;
  if (!g.algorithm.empty()) {
    sat.comments.emplace_back("algorithm", g.algorithm);
    sat.comments.emplace_back("f", detail::fmt_real(g.f));
    sat.comments.emplace_back("alpha", detail::fmt_real(g.alpha));
    sat.comments.emplace_back("rho", detail::fmt_real(g.rho));
    sat.comments.emplace_back("seed", std::to_string(g.seed));
  }
  if (inst.ground_energy) {
    sat.comments.emplace_back("ground_energy", detail::fmt_real(*inst.ground_energy));
    sat.comments.emplace_back("planted_satisfied_weight",
                              detail::fmt_real(total_weight(sat) - (*inst.ground_energy - bond_floor(inst))));
  }
  return sat;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  if (in.bad()) throw IoError("read failed: " + path);
  return text;
}

inline void write_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace frusloop
