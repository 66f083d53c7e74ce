#include "entlaser/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>

#include "entlaser/errors.hpp"

namespace entlaser {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

bool parse_plain(std::string_view s, double& out) {
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

const std::map<std::string, std::string>* section(const ConfigSections& s, const std::string& n) {
  const auto it = s.find(n);
  return it == s.end() ? nullptr : &it->second;
}

const std::string* lookup(const ConfigSections& s, const std::string& sec, const std::string& key) {
  const auto* m = section(s, sec);
  if (!m) return nullptr;
  const auto it = m->find(key);
  return it == m->end() ? nullptr : &it->second;
}

}  // namespace

double parse_number(std::string_view text, std::string_view field) {
  const std::string s = lower(trim(text));
  double v = 0.0;
  if (parse_plain(s, v)) {
    if (!std::isfinite(v)) throw InvalidParameter(std::string(field), "must be finite");
    return v;
  }
  // [sign][factor][*]pi[/divisor]
  const auto pi_at = s.find("pi");
  if (pi_at != std::string::npos) {
    std::string_view head = std::string_view(s).substr(0, pi_at);
    std::string_view tail = std::string_view(s).substr(pi_at + 2);
    double factor = 1.0;
    double sign = 1.0;
    head = trim(head);
    if (!head.empty() && (head.front() == '-' || head.front() == '+')) {
      sign = head.front() == '-' ? -1.0 : 1.0;
      head = trim(head.substr(1));
    }
    if (!head.empty() && head.back() == '*') head = trim(head.substr(0, head.size() - 1));
    bool ok = head.empty() || parse_plain(head, factor);
    double divisor = 1.0;
    tail = trim(tail);
    if (ok && !tail.empty()) {
      ok = tail.front() == '/' && parse_plain(trim(tail.substr(1)), divisor) && divisor != 0.0;
    }
    if (ok) return sign * factor * std::numbers::pi / divisor;
  }
  throw InvalidParameter(std::string(field), "not a number: '" + std::string(trim(text)) + "'");
}

ConfigSections parse_config_text(std::string_view text) {
  ConfigSections out;
  std::string current;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    const auto comment = line.find_first_of("#;");
    if (comment != std::string_view::npos) line = line.substr(0, comment);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(line_no);
    if (line.front() == '[') {
      if (line.back() != ']') throw InvalidParameter(where, "unterminated section header");
      current = lower(trim(line.substr(1, line.size() - 2)));
      if (current.empty()) throw InvalidParameter(where, "empty section name");
      out[current];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw InvalidParameter(where, "expected key = value");
    if (current.empty()) throw InvalidParameter(where, "key outside of a section");
    const std::string key = lower(trim(line.substr(0, eq)));
    if (key.empty()) throw InvalidParameter(where, "empty key");
    auto& sec = out[current];
    if (sec.count(key)) throw InvalidParameter(where, "duplicate key '" + key + "'");
    sec[key] = std::string(trim(line.substr(eq + 1)));
  }
  return out;
}

void apply_override(ConfigSections& sections, std::string_view assignment) {
  const auto eq = assignment.find('=');
  const auto dot = assignment.find('.');
  if (eq == std::string_view::npos || dot == std::string_view::npos || dot > eq) {
    throw InvalidParameter("override", "expected section.key=value, got '" +
                                           std::string(assignment) + "'");
  }
  const std::string sec = lower(trim(assignment.substr(0, dot)));
  const std::string key = lower(trim(assignment.substr(dot + 1, eq - dot - 1)));
  if (sec.empty() || key.empty()) throw InvalidParameter("override", "empty section or key");
  sections[sec][key] = std::string(trim(assignment.substr(eq + 1)));
}

RunConfig config_from_sections(const ConfigSections& s) {
  static const std::vector<std::string> known = {"params", "initial", "sim", "output"};
  for (const auto& [name, _] : s) {
    if (std::find(known.begin(), known.end(), name) == known.end()) {
      throw InvalidParameter(name, "unknown section");
    }
  }

  std::vector<std::string> missing;
  for (auto name : kParamNames) {
    if (!lookup(s, "params", std::string(name))) missing.push_back("params." + std::string(name));
  }
  if (!lookup(s, "sim", "t_max")) missing.push_back("sim.t_max");
  if (!missing.empty()) {
    std::string list;
    for (const auto& m : missing) list += (list.empty() ? "" : ", ") + m;
    throw InvalidParameter("config", "missing keys: " + list);
  }

  RunConfig cfg;
  for (const auto& [key, value] : *section(s, "params")) {
    double& slot = param_ref(cfg.params, key);
    slot = parse_number(value, "params." + key);
  }
  validate(cfg.params);

  auto num = [&](const std::string& sec, const std::string& key, double fallback) {
    const std::string* v = lookup(s, sec, key);
    return v ? parse_number(*v, sec + "." + key) : fallback;
  };

  // [initial]
  if (const auto* init = section(s, "initial")) {
    const std::string kind = init->count("state") ? lower(init->at("state")) : "vacuum";
    static const std::vector<std::string> coherent_keys = {"beta1_re", "beta1_im", "beta2_re",
                                                           "beta2_im"};
    static const std::vector<std::string> moment_keys = {"b1_re", "b1_im", "b2_re", "b2_im",
                                                         "n1",    "n2",    "m_re",  "m_im"};
    const std::vector<std::string>* allowed = nullptr;
    if (kind == "vacuum") {
      cfg.initial.kind = InitialKind::Vacuum;
    } else if (kind == "coherent") {
      cfg.initial.kind = InitialKind::Coherent;
      allowed = &coherent_keys;
      cfg.initial.beta1 = {num("initial", "beta1_re", 0.0), num("initial", "beta1_im", 0.0)};
      cfg.initial.beta2 = {num("initial", "beta2_re", 0.0), num("initial", "beta2_im", 0.0)};
    } else if (kind == "moments") {
      cfg.initial.kind = InitialKind::Moments;
      allowed = &moment_keys;
      MomentState& m = cfg.initial.moments;
      m.b1 = {num("initial", "b1_re", 0.0), num("initial", "b1_im", 0.0)};
      m.b2 = {num("initial", "b2_re", 0.0), num("initial", "b2_im", 0.0)};
      m.n1 = num("initial", "n1", 0.0);
      m.n2 = num("initial", "n2", 0.0);
      m.m = {num("initial", "m_re", 0.0), num("initial", "m_im", 0.0)};
      if (m.n1 < 0.0) throw InvalidParameter("initial.n1", "must be >= 0");
      if (m.n2 < 0.0) throw InvalidParameter("initial.n2", "must be >= 0");
    } else {
      throw InvalidParameter("initial.state", "expected vacuum, coherent or moments");
    }
    for (const auto& [key, _] : *init) {
      if (key == "state") continue;
      if (!allowed || std::find(allowed->begin(), allowed->end(), key) == allowed->end()) {
        throw InvalidParameter("initial." + key, "not valid for state '" + kind + "'");
      }
    }
  }

  // [sim]
  for (const auto& [key, _] : *section(s, "sim")) {
    if (key != "t_max" && key != "samples" && key != "method" && key != "dominance") {
      throw InvalidParameter("sim." + key, "unknown key");
    }
  }
  cfg.sim.t_max = num("sim", "t_max", 0.0);
  if (!(cfg.sim.t_max > 0.0)) throw InvalidParameter("sim.t_max", "must be > 0");
  const double samples = num("sim", "samples", 2000.0);
  if (samples < 2.0 || samples != std::floor(samples) || samples > 1e8) {
    throw InvalidParameter("sim.samples", "must be an integer >= 2");
  }
  cfg.sim.samples = static_cast<std::size_t>(samples);
  if (const std::string* m = lookup(s, "sim", "method")) {
    try {
      cfg.sim.method = sim_method_from_string(lower(*m));
    } catch (const InvalidParameter&) {
      throw InvalidParameter("sim.method", "expected spectral, numeric or parametric");
    }
  }
  cfg.sim.dominance = num("sim", "dominance", kDefaultDominance);
  if (!(cfg.sim.dominance >= 1.0)) throw InvalidParameter("sim.dominance", "must be >= 1");

  // [output]
  if (const auto* out = section(s, "output")) {
    for (const auto& [key, value] : *out) {
      if (key == "path") {
        if (value.empty()) throw InvalidParameter("output.path", "must not be empty");
        cfg.output.path = value;
      } else if (key == "format") {
        const std::string f = lower(value);
        if (f == "csv") {
          cfg.output.format = OutputFormat::Csv;
        } else if (f == "json") {
          cfg.output.format = OutputFormat::Json;
        } else {
          throw InvalidParameter("output.format", "expected csv or json");
        }
      } else {
        throw InvalidParameter("output." + key, "unknown key");
      }
    }
  }
  return cfg;
}

RunConfig load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidParameter("config", "cannot read " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return config_from_sections(parse_config_text(buf.str()));
}

std::filesystem::path default_preset_directory() {
  if (const char* env = std::getenv("ENTLASER_PRESET_DIR"); env && *env) return env;
#ifdef ENTLASER_PRESET_DIR
  return ENTLASER_PRESET_DIR;
#else
  return "presets";
#endif
}

std::vector<std::string> preset_names(const std::filesystem::path& dir) {
  std::vector<std::string> names;
  std::error_code ec;
  for (const auto& entry : std::filesystem::directory_iterator(dir, ec)) {
    if (entry.path().extension() == ".cfg") names.push_back(entry.path().stem().string());
  }
  std::sort(names.begin(), names.end());
  return names;
}

ConfigSections load_preset_sections(std::string_view name, const std::filesystem::path& dir) {
  const auto path = dir / (std::string(name) + ".cfg");
  std::ifstream in(path);
  if (!in) {
    std::string known;
    for (const auto& n : preset_names(dir)) known += (known.empty() ? "" : ", ") + n;
    throw InvalidParameter("preset", "unknown preset '" + std::string(name) + "' (available: " +
                                         (known.empty() ? "none" : known) + ")");
  }
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

RunConfig load_preset(std::string_view name, const std::filesystem::path& dir) {
  return config_from_sections(load_preset_sections(name, dir));
}

MomentState InitialSpec::state() const {
  switch (kind) {
    case InitialKind::Vacuum: return vacuum_state();
    case InitialKind::Coherent: return coherent_state(beta1, beta2);
    case InitialKind::Moments: return moments;
  }
  return vacuum_state();
}

std::string_view to_string(InitialKind k) {
  switch (k) {
    case InitialKind::Vacuum: return "vacuum";
    case InitialKind::Coherent: return "coherent";
    case InitialKind::Moments: return "moments";
  }
  return "vacuum";
}

std::string_view to_string(OutputFormat f) { return f == OutputFormat::Json ? "json" : "csv"; }

}  // namespace entlaser
