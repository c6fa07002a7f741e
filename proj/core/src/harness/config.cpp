#include "qoplab/harness/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace qoplab::harness {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

int parse_int(const std::string& key, std::string_view text) {
  const std::string t = trim(text);
  int v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size()) {
    throw ConfigError("invalid integer for '" + key + "': '" + t + "'");
  }
  return v;
}

double parse_double(const std::string& key, std::string_view text) {
  const std::string t = trim(text);
  try {
    std::size_t used = 0;
    const double v = std::stod(t, &used);
    if (used != t.size() || !std::isfinite(v)) throw std::invalid_argument(t);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("invalid number for '" + key + "': '" + t + "'");
  }
}

bool parse_bool(const std::string& key, std::string_view text) {
  const std::string t = trim(text);
  if (t == "1" || t == "true" || t == "yes" || t == "on") return true;
  if (t == "0" || t == "false" || t == "no" || t == "off") return false;
  throw ConfigError("invalid boolean for '" + key + "': '" + t + "'");
}

// "8,16,32" with optional ranges "2..24".
std::vector<int> parse_p_list(std::string_view text) {
  std::vector<int> out;
  std::stringstream ss{std::string(text)};
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    const auto dots = item.find("..");
    if (dots == std::string::npos) {
      out.push_back(parse_int("p", item));
    } else {
      const int lo = parse_int("p", item.substr(0, dots));
      const int hi = parse_int("p", item.substr(dots + 2));
      for (int v = lo; v <= hi; ++v) out.push_back(v);
    }
  }
  return out;
}

// "zero" / "one" (the neutral keyword) or "cosine:<amplitude>".
std::optional<double> parse_cosine(const std::string& key, std::string_view text,
                                   std::string_view neutral) {
  const std::string t = trim(text);
  if (t == neutral) return std::nullopt;
  constexpr std::string_view prefix = "cosine:";
  if (t.rfind(prefix, 0) == 0) return parse_double(key, t.substr(prefix.size()));
  throw ConfigError("invalid value for '" + key + "': '" + t + "' (expected " +
                    std::string(neutral) + " or cosine:<amplitude>)");
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string_view to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kDim: return "dim";
    case ExperimentKind::kGap: return "gap";
    case ExperimentKind::kRate: return "rate";
    case ExperimentKind::kProfile: return "profile";
    case ExperimentKind::kGaussian: return "gaussian";
    case ExperimentKind::kHeat: return "heat";
    case ExperimentKind::kInvariants: return "invariants";
  }
  return "unknown";
}

ExperimentKind parse_experiment(std::string_view text) {
  for (auto kind : {ExperimentKind::kDim, ExperimentKind::kGap, ExperimentKind::kRate,
                    ExperimentKind::kProfile, ExperimentKind::kGaussian, ExperimentKind::kHeat,
                    ExperimentKind::kInvariants}) {
    if (to_string(kind) == text) return kind;
  }
  throw ConfigError("unknown experiment '" + std::string(text) + "'");
}

int GridPolicy::resolve(int p) const {
  if (fixed) return *fixed;
  const int root = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(p)) - 1e-12));
  return std::max(16, 8 * root);
}

std::string InstanceSpec::canonical() const {
  std::vector<std::string> lines{
      "model=" + std::string(to_string(model)),
      "omega=" + std::string(to_string(omega)),
      "grid=" + std::to_string(grid),
      "p=" + std::to_string(p),
      "phi=" + (phi_amplitude == 0.0 ? std::string("zero") : "cosine:" + format_double(phi_amplitude)),
      "lambda=" + (lambda_amplitude ? "cosine:" + format_double(*lambda_amplitude) : std::string("one")),
  };
  std::sort(lines.begin(), lines.end());
  std::string out;
  for (const auto& l : lines) out += l + "\n";
  return out;
}

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace {
std::string hex16(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}
}  // namespace

std::string InstanceSpec::hash() const { return hex16(fnv1a(canonical())); }

void ExperimentConfig::validate() const {
  if (p.empty()) throw ConfigError("p list must not be empty");
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] < 1) throw ConfigError("p values must be positive integers");
    if (i > 0 && p[i] <= p[i - 1]) throw ConfigError("p list must be strictly ascending");
  }
  if (grid.fixed && *grid.fixed < 4) throw ConfigError("grid must be at least 4");
  if (std::abs(phi_amplitude) > 1.0) throw ConfigError("potential amplitude must satisfy |a| <= 1");
  if (lambda_amplitude) {
    if (model != ModelKind::kConformalTorus2) {
      throw ConfigError("a conformal factor needs --model conformal-torus-2");
    }
    if (!(std::abs(*lambda_amplitude) < 1.0)) {
      throw ConfigError("conformal amplitude must satisfy |a| < 1 (lambda > 0)");
    }
  }
  if (omega == SymplecticForm::kMetric && model != ModelKind::kConformalTorus2) {
    throw ConfigError("--omega metric only applies to the conformal model");
  }
  if (jobs < 0) throw ConfigError("jobs must be nonnegative");
  if (!(radius_scale > 0.0)) throw ConfigError("radius must be positive");
}

double ExperimentConfig::tolerance(const std::string& name, double fallback) const {
  const auto it = tolerances.find(name);
  return it == tolerances.end() ? fallback : it->second;
}

InstanceSpec ExperimentConfig::instance(int pv) const {
  InstanceSpec s;
  s.model = model;
  s.omega = omega;
  s.grid = grid.resolve(pv);
  s.p = pv;
  s.phi_amplitude = phi_amplitude;
  s.lambda_amplitude = lambda_amplitude;
  return s;
}

std::string ExperimentConfig::hash() const {
  std::string text = instance(p.empty() ? 1 : p.front()).canonical();
  text += "experiment=" + std::string(to_string(experiment)) + "\n";
  text += "grid_policy=" + (grid.fixed ? std::to_string(*grid.fixed) : std::string("auto")) + "\n";
  text += "p_list=";
  for (int v : p) text += std::to_string(v) + ",";
  text += "\n";
  return hex16(fnv1a(text));
}

std::map<std::string, std::string> parse_key_values(std::string_view text) {
  std::map<std::string, std::string> out;
  std::stringstream ss{std::string(text)};
  std::string line;
  int number = 0;
  while (std::getline(ss, line)) {
    ++number;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(number) + ": expected key = value");
    }
    const std::string key = trim(t.substr(0, eq));
    if (key.empty()) throw ConfigError("config line " + std::to_string(number) + ": empty key");
    out[key] = trim(t.substr(eq + 1));
  }
  return out;
}

void apply_setting(ExperimentConfig& c, const std::string& key, const std::string& value) {
  try {
    if (key == "experiment") {
      c.experiment = parse_experiment(trim(value));
    } else if (key == "p") {
      c.p = parse_p_list(value);
    } else if (key == "model") {
      c.model = parse_model_kind(trim(value));
    } else if (key == "omega") {
      c.omega = parse_symplectic_form(trim(value));
    } else if (key == "grid") {
      const std::string t = trim(value);
      if (t == "auto") {
        c.grid.fixed.reset();
      } else {
        c.grid.fixed = parse_int(key, t);
      }
    } else if (key == "phi") {
      c.phi_amplitude = parse_cosine(key, value, "zero").value_or(0.0);
    } else if (key == "lambda") {
      c.lambda_amplitude = parse_cosine(key, value, "one");
    } else if (key == "out") {
      c.out = trim(value);
    } else if (key == "cache") {
      c.cache = std::filesystem::path(trim(value));
    } else if (key == "no-cache") {
      if (parse_bool(key, value)) c.cache.reset();
    } else if (key == "radius") {
      c.radius_scale = parse_double(key, value);
    } else if (key == "jobs") {
      c.jobs = parse_int(key, value);
    } else if (key == "svg") {
      c.svg = parse_bool(key, value);
    } else if (key.rfind("tol.", 0) == 0 && key.size() > 4) {
      c.tolerances[key.substr(4)] = parse_double(key, value);
    } else {
      throw ConfigError("unknown config key '" + key + "'");
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
}

ExperimentConfig make_config(const std::map<std::string, std::string>& file_settings,
                             const std::map<std::string, std::string>& flag_settings) {
  ExperimentConfig c;
  std::map<std::string, std::string> merged = file_settings;
  for (const auto& [k, v] : flag_settings) merged[k] = v;
  // no-cache wins over cache regardless of map order
  const auto no_cache = merged.find("no-cache");
  for (const auto& [k, v] : merged) {
    if (k != "no-cache") apply_setting(c, k, v);
  }
  if (no_cache != merged.end()) apply_setting(c, "no-cache", no_cache->second);
  c.validate();
  return c;
}

}  // namespace qoplab::harness
