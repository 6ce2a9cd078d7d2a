#include "ctmc/run_config.hpp"

#include <cerrno>
#include <charconv>
#include <cstdio>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "ctmc/generator.hpp"

namespace ctmc {

std::string to_string(ModelKind k) {
  switch (k) {
    case ModelKind::mm1: return "mm1";
    case ModelKind::ring: return "ring";
    case ModelKind::star: return "star";
    case ModelKind::telegraph: return "telegraph";
  }
  return "?";
}

ModelKind parse_model_kind(const std::string& s) {
  if (s == "mm1") return ModelKind::mm1;
  if (s == "ring") return ModelKind::ring;
  if (s == "star") return ModelKind::star;
  if (s == "telegraph") return ModelKind::telegraph;
  throw Error("unknown model '" + s + "' (expected mm1, ring, star or telegraph)");
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double RunConfig::death_rate() const {
  if (mu) return *mu;
  return model == ModelKind::mm1 ? birth_rate() * (1.0 + eps) : 1.0;
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double parse_double(const std::string& key, const std::string& v) {
  errno = 0;
  char* end = nullptr;
  const double d = std::strtod(v.c_str(), &end);
  if (v.empty() || end != v.c_str() + v.size() || errno == ERANGE || !std::isfinite(d))
    throw Error("config: '" + key + "' expects a number, got '" + v + "'");
  return d;
}

std::uint64_t parse_unsigned(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc() || ptr != v.data() + v.size())
    throw Error("config: '" + key + "' expects a non-negative integer, got '" + v + "'");
  return out;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw Error("config: '" + key + "' expects true or false, got '" + v + "'");
}

}  // namespace

ConfigPairs parse_config_text(std::string_view text) {
  ConfigPairs out;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos)
      throw Error("config line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    if (key.empty() || key.find_first_not_of("abcdefghijklmnopqrstuvwxyz0123456789-") != std::string::npos)
      throw Error("config line " + std::to_string(line_no) + ": bad key '" + key + "'");
    if (!out.emplace(key, value).second)
      throw Error("config line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
  }
  return out;
}

ConfigPairs read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

ConfigPairs merge_pairs(ConfigPairs base, const ConfigPairs& overrides) {
  for (const auto& [k, v] : overrides) base[k] = v;
  return base;
}

RunConfig RunConfig::from_pairs(const ConfigPairs& pairs) {
  RunConfig c;
  for (const auto& [key, v] : pairs) {
    if (key == "model") c.model = parse_model_kind(v);
    else if (key == "n") c.n = parse_unsigned(key, v);
    else if (key == "eps") c.eps = parse_double(key, v);
    else if (key == "lambda") c.lambda = parse_double(key, v);
    else if (key == "mu") c.mu = parse_double(key, v);
    else if (key == "seed") c.seed = parse_unsigned(key, v);
    else if (key == "out-dir") c.out_dir = v;
    else if (key == "realizations") c.realizations = parse_unsigned(key, v);
    else if (key == "t-end") c.t_end = parse_double(key, v);
    else if (key == "dt") c.dt = parse_double(key, v);
    else if (key == "threads") c.threads = static_cast<unsigned>(parse_unsigned(key, v));
    else if (key == "normalization") c.normalization = v;
    else if (key == "eigen-file") c.eigen_file = v;
    else if (key == "window-first") c.window_first = parse_unsigned(key, v);
    else if (key == "window-last") c.window_last = parse_unsigned(key, v);
    else if (key == "bins-per-decade") c.bins_per_decade = parse_unsigned(key, v);
    else if (key == "trajectory-events") c.trajectory_events = parse_unsigned(key, v);
    else if (key == "quick") c.quick = parse_bool(key, v);
    else if (key == "slow") c.slow = parse_bool(key, v);
    else if (key == "tolerance-scale") c.tolerance_scale = parse_double(key, v);
    else if (key == "only") {
      std::istringstream ids(v);
      std::string tok;
      while (std::getline(ids, tok, ','))
        if (!trim(tok).empty()) c.only.insert(static_cast<int>(parse_unsigned(key, trim(tok))));
    } else {
      throw Error("config: unknown key '" + key + "'");
    }
  }
  if (c.normalization != "raw" && c.normalization != "energy")
    throw Error("config: normalization must be raw or energy");
  if (!(c.eps > 0.0)) throw Error("config: eps must be positive");
  if (c.realizations < 1) throw Error("config: realizations must be at least 1");
  if (c.bins_per_decade < 2) throw Error("config: bins-per-decade must be at least 2");
  if (!(c.birth_rate() > 0.0) || !(c.death_rate() > 0.0)) throw Error("config: rates must be positive");
  return c;
}

ConfigPairs RunConfig::to_pairs() const {
  ConfigPairs p;
  p["model"] = to_string(model);
  p["n"] = std::to_string(n);
  p["eps"] = format_double(eps);
  p["lambda"] = format_double(birth_rate());
  p["mu"] = format_double(death_rate());
  if (seed) p["seed"] = std::to_string(*seed);
  p["out-dir"] = out_dir;
  p["realizations"] = std::to_string(realizations);
  if (t_end) p["t-end"] = format_double(*t_end);
  if (dt) p["dt"] = format_double(*dt);
  p["threads"] = std::to_string(threads);
  p["normalization"] = normalization;
  if (!eigen_file.empty()) p["eigen-file"] = eigen_file;
  if (window_first) p["window-first"] = std::to_string(*window_first);
  if (window_last) p["window-last"] = std::to_string(*window_last);
  p["bins-per-decade"] = std::to_string(bins_per_decade);
  p["trajectory-events"] = std::to_string(trajectory_events);
  p["quick"] = quick ? "true" : "false";
  p["slow"] = slow ? "true" : "false";
  p["tolerance-scale"] = format_double(tolerance_scale);
  if (!only.empty()) {
    std::string ids;
    for (int id : only) ids += (ids.empty() ? "" : ",") + std::to_string(id);
    p["only"] = ids;
  }
  return p;
}

std::string RunConfig::to_text() const {
  std::string out = "# effective run configuration\n";
  for (const auto& [k, v] : to_pairs()) out += k + " = " + v + "\n";
  return out;
}

}  // namespace ctmc
