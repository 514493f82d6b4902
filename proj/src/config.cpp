#include "config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace nhp {

using json = nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ConfigError(where + ": " + what);
}

std::string str_at(const json& j, const std::string& where) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<long>());
  if (j.is_number_float()) {
    std::ostringstream os;
    os.precision(17);
    os << j.get<double>();
    return os.str();
  }
  fail(where, "expected a number or numeric string");
}

GeneratorSpec parse_generator(const json& j, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
  GeneratorSpec g;
  if (!j.contains("family")) fail(where, "missing 'family'");
  g.family = j["family"].get<std::string>();
  if (g.family != "uniform" && g.family != "jacobi" && g.family != "laguerre" && g.family != "atoms")
    fail(where + ".family", "unsupported family '" + g.family + "'");

  if (j.contains("interval")) {
    const auto& iv = j["interval"];
    if (!iv.is_array() || iv.size() != 2) fail(where + ".interval", "expected [lo, hi]");
    g.lo = str_at(iv[0], where + ".interval[0]");
    g.hi = str_at(iv[1], where + ".interval[1]");
  } else if (g.family == "laguerre") {
    g.lo = "0";
    g.hi = "inf";
  } else {
    fail(where, "missing 'interval'");
  }

  if (g.family == "atoms") {
    if (!j.contains("atom_list") || !j["atom_list"].is_array() || j["atom_list"].empty())
      fail(where, "atoms family needs a nonempty 'atom_list'");
    for (std::size_t i = 0; i < j["atom_list"].size(); ++i) {
      const auto& a = j["atom_list"][i];
      std::string aw = where + ".atom_list[" + std::to_string(i) + "]";
      if (!a.is_array() || a.size() != 2) fail(aw, "expected [x, w]");
      g.atom_list.push_back({str_at(a[0], aw), str_at(a[1], aw)});
    }
  } else {
    if (!j.contains("atoms") || !j["atoms"].is_number_integer())
      fail(where, "missing integer 'atoms' (discretization size)");
    g.atoms = j["atoms"].get<int>();
    if (g.atoms < 1) fail(where + ".atoms", "must be >= 1");
  }

  if (j.contains("rule")) {
    g.rule = j["rule"].get<std::string>();
    if (g.rule != "gauss" && g.rule != "midpoint") fail(where + ".rule", "expected gauss|midpoint");
    if (g.rule == "midpoint" && g.family != "uniform")
      fail(where + ".rule", "midpoint rule applies to the uniform family only");
  }
  if (j.contains("alpha")) g.alpha = str_at(j["alpha"], where + ".alpha");
  if (j.contains("beta")) g.beta = str_at(j["beta"], where + ".beta");
  return g;
}

std::vector<std::vector<int>> parse_indices(const json& j, int m, const std::string& where) {
  std::vector<std::vector<int>> out;
  auto push_checked = [&](std::vector<int> v, const std::string& w) {
    if (static_cast<int>(v.size()) != m)
      fail(w, "multi-index size " + std::to_string(v.size()) + " != generator count " + std::to_string(m));
    out.push_back(std::move(v));
  };
  if (j.is_array()) {
    if (j.empty()) fail(where, "empty index list");
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (!j[i].is_array()) fail(where, "expected arrays of integers");
      push_checked(j[i].get<std::vector<int>>(), where + "[" + std::to_string(i) + "]");
    }
    return out;
  }
  if (!j.is_object() || !j.contains("type")) fail(where, "expected an array or {type: ...}");
  std::string type = j["type"].get<std::string>();
  if (type == "list") {
    return parse_indices(j.at("values"), m, where + ".values");
  } else if (type == "diagonal") {
    int from = j.at("from").get<int>(), to = j.at("to").get<int>();
    if (from < 1 || to < from) fail(where, "diagonal needs 1 <= from <= to");
    for (int k = from; k <= to; ++k) push_checked(std::vector<int>(m, k), where);
    return out;
  } else if (type == "shifted") {
    int from = j.at("from").get<int>(), to = j.at("to").get<int>();
    auto offsets = j.at("offsets").get<std::vector<int>>();
    if (static_cast<int>(offsets.size()) != m) fail(where + ".offsets", "need one offset per generator");
    if (from < 1 || to < from) fail(where, "shifted needs 1 <= from <= to");
    for (int k = from; k <= to; ++k) {
      std::vector<int> v(m);
      for (int t = 0; t < m; ++t) v[t] = k + offsets[t];
      push_checked(std::move(v), where);
    }
    return out;
  }
  fail(where + ".type", "expected list|diagonal|shifted");
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config: top level must be an object");

  RunConfig cfg;
  if (j.contains("precision")) {
    std::string p = j["precision"].get<std::string>();
    if (p == "exact") {
      cfg.exact = true;
    } else if (p.rfind("float", 0) == 0) {
      cfg.exact = false;
      auto colon = p.find(':');
      if (colon != std::string::npos) cfg.bits = static_cast<unsigned>(std::stoul(p.substr(colon + 1)));
      if (cfg.bits < 64) throw ConfigError("precision: float needs >= 64 bits");
    } else {
      throw ConfigError("precision: expected 'exact' or 'float:<bits>'");
    }
  }

  if (!j.contains("generators") || !j["generators"].is_array() || j["generators"].empty())
    throw ConfigError("generators: need a nonempty array");
  for (std::size_t i = 0; i < j["generators"].size(); ++i)
    cfg.generators.push_back(parse_generator(j["generators"][i], "generators[" + std::to_string(i) + "]"));

  const int m = static_cast<int>(cfg.generators.size());
  if (!j.contains("indices")) throw ConfigError("indices: missing");
  cfg.indices = parse_indices(j["indices"], m, "indices");

  if (j.contains("w_roots")) {
    const auto& w = j["w_roots"];
    if (!w.is_object()) throw ConfigError("w_roots: expected an object");
    if (w.contains("real"))
      for (std::size_t i = 0; i < w["real"].size(); ++i) {
        const auto& r = w["real"][i];
        std::string wr = "w_roots.real[" + std::to_string(i) + "]";
        if (!r.is_array() || r.size() != 2) fail(wr, "expected [root, multiplicity]");
        cfg.w_real.push_back({str_at(r[0], wr), r[1].get<int>()});
      }
    if (w.contains("pairs"))
      for (std::size_t i = 0; i < w["pairs"].size(); ++i) {
        const auto& r = w["pairs"][i];
        std::string wr = "w_roots.pairs[" + std::to_string(i) + "]";
        if (!r.is_array() || r.size() != 3) fail(wr, "expected [re, im, multiplicity]");
        cfg.w_pairs.push_back({str_at(r[0], wr), str_at(r[1], wr), r[2].get<int>()});
      }
  }

  if (j.contains("grid")) {
    for (std::size_t i = 0; i < j["grid"].size(); ++i) {
      const auto& g = j["grid"][i];
      std::string wg = "grid[" + std::to_string(i) + "]";
      if (g.is_array()) {
        if (g.size() != 2) fail(wg, "expected [re, im]");
        cfg.grid.push_back({str_at(g[0], wg), str_at(g[1], wg)});
      } else {
        cfg.grid.push_back({str_at(g, wg), "0"});
      }
    }
  }

  if (j.contains("targets")) cfg.targets = j["targets"].get<std::vector<int>>();
  if (j.contains("threads")) {
    cfg.threads = j["threads"].get<int>();
    if (cfg.threads < 1) throw ConfigError("threads: must be >= 1");
  }
  if (j.contains("output")) cfg.output = j["output"].get<std::string>();
  if (j.contains("verify")) {
    const auto& v = j["verify"];
    if (v.contains("series_order")) cfg.verify_series_order = v["series_order"].get<int>();
    if (v.contains("max_n")) cfg.verify_max_n = v["max_n"].get<int>();
    if (v.contains("seed")) cfg.verify_seed = v["seed"].get<unsigned>();
  }
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

void apply_precision_env(RunConfig& cfg) {
  const char* env = std::getenv("NHP_PRECISION");
  if (!env || !*env) return;
  std::string p(env);
  if (p == "exact") {
    cfg.exact = true;
  } else if (p.rfind("float", 0) == 0) {
    cfg.exact = false;
    auto colon = p.find(':');
    cfg.bits = colon == std::string::npos ? 192u : static_cast<unsigned>(std::stoul(p.substr(colon + 1)));
    if (cfg.bits < 64) throw ConfigError("NHP_PRECISION: float needs >= 64 bits");
  } else {
    throw ConfigError("NHP_PRECISION: expected 'exact' or 'float:<bits>'");
  }
}

}  // namespace nhp
