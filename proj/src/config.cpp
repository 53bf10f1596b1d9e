#include "collab/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace collab {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& key, const std::string& value) {
  if (value == "inf") return std::numeric_limits<double>::infinity();
  try {
    std::size_t pos = 0;
    double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error("config: bad number for '" + key + "': " + value);
  }
}

}  // namespace

ConfigMap ConfigMap::parse(const std::string& text) {
  ConfigMap cfg;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config: line " + std::to_string(lineno) +
                               " has no '='");
    Entry entry;
    entry.key = trim(line.substr(0, eq));
    entry.value = trim(line.substr(eq + 1));
    if (entry.key.empty())
      throw std::runtime_error("config: line " + std::to_string(lineno) +
                               " has an empty key");
    cfg.entries_.push_back(std::move(entry));
  }
  return cfg;
}

ConfigMap ConfigMap::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

bool ConfigMap::has(const std::string& key) const {
  for (const auto& e : entries_)
    if (e.key == key) return true;
  return false;
}

std::string ConfigMap::get_string(const std::string& key) {
  std::string out;
  bool found = false;
  for (auto& e : entries_) {
    if (e.key != key) continue;
    if (found) throw std::runtime_error("config: duplicate key '" + key + "'");
    e.used = true;
    out = e.value;
    found = true;
  }
  if (!found) throw std::runtime_error("config: missing key '" + key + "'");
  return out;
}

std::string ConfigMap::get_string_or(const std::string& key,
                                     const std::string& fallback) {
  if (!has(key)) return fallback;
  return get_string(key);
}

double ConfigMap::get_number(const std::string& key) {
  return parse_number(key, get_string(key));
}

double ConfigMap::get_number_or(const std::string& key, double fallback) {
  if (!has(key)) return fallback;
  return get_number(key);
}

std::int64_t ConfigMap::get_int(const std::string& key) {
  double v = get_number(key);
  auto i = static_cast<std::int64_t>(v);
  if (static_cast<double>(i) != v)
    throw std::runtime_error("config: key '" + key + "' must be an integer");
  return i;
}

std::int64_t ConfigMap::get_int_or(const std::string& key,
                                   std::int64_t fallback) {
  if (!has(key)) return fallback;
  return get_int(key);
}

std::vector<std::string> ConfigMap::get_all(const std::string& key) {
  std::vector<std::string> out;
  for (auto& e : entries_) {
    if (e.key != key) continue;
    e.used = true;
    out.push_back(e.value);
  }
  return out;
}

void ConfigMap::set(const std::string& key, const std::string& value) {
  bool placed = false;
  std::vector<Entry> kept;
  for (auto& e : entries_) {
    if (e.key == key) {
      if (!placed) {
        e.value = value;
        e.used = false;
        kept.push_back(e);
        placed = true;
      }
      continue;
    }
    kept.push_back(e);
  }
  if (!placed) kept.push_back(Entry{key, value, false});
  entries_ = std::move(kept);
}

void ConfigMap::reject_unknown() const {
  std::string unknown;
  for (const auto& e : entries_) {
    if (e.used) continue;
    if (!unknown.empty()) unknown += ", ";
    unknown += e.key;
  }
  if (!unknown.empty())
    throw std::runtime_error("config: unknown keys: " + unknown);
}

std::string ConfigMap::to_text() const {
  std::string out;
  for (const auto& e : entries_) out += e.key + " = " + e.value + "\n";
  return out;
}

std::vector<std::string> split_tokens(const std::string& value) {
  std::vector<std::string> out;
  std::istringstream in(value);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

CoauthorshipLaw build_law(ConfigMap& cfg) {
  std::string kind = cfg.get_string("law.kind");
  if (kind == "constant") {
    return CoauthorshipLaw::constant(cfg.get_number("law.p"));
  }
  if (kind == "linear") {
    double a = cfg.get_number("law.a");
    double b = cfg.get_number("law.b");
    return CoauthorshipLaw::linear([a](std::size_t) { return a; },
                                   [b](std::size_t) { return b; });
  }
  if (kind == "affine_k_clamped") {
    double slope = cfg.get_number("law.slope");
    double icept = cfg.get_number("law.intercept");
    return CoauthorshipLaw::tabulated(
        [slope, icept](std::size_t, std::size_t k) {
          return slope * static_cast<double>(k) + icept;
        },
        /*clamp=*/true);
  }
  if (kind == "ramp_n_clamped") {
    double denom = cfg.get_number("law.denominator");
    if (!(denom > 0))
      throw std::runtime_error("config: law.denominator must be > 0");
    return CoauthorshipLaw::tabulated(
        [denom](std::size_t n, std::size_t) {
          return static_cast<double>(n) / denom;
        },
        /*clamp=*/true);
  }
  if (kind == "harmonic_linear") {
    double a_scale = cfg.get_number("law.a_scale");
    double b_scale = cfg.get_number("law.b_scale");
    std::string base = cfg.get_string_or("law.log_base", "e");
    double log_div;
    if (base == "e")
      log_div = 1.0;
    else if (base == "10")
      log_div = std::log(10.0);
    else
      throw std::runtime_error("config: law.log_base must be e or 10");
    auto a = [a_scale](std::size_t n) {
      return a_scale / static_cast<double>(n);
    };
    auto b = [b_scale, log_div](std::size_t n) {
      return b_scale *
             (1.0 - log_div / std::log(static_cast<double>(n) + 2.0));
    };
    return CoauthorshipLaw::linear(a, b);
  }
  throw std::runtime_error("config: unknown law.kind '" + kind + "'");
}

IntensityFunction build_intensity(ConfigMap& cfg) {
  std::string kind = cfg.get_string("intensity.kind");
  if (kind == "constant") {
    return IntensityFunction::constant(cfg.get_number("intensity.rate"));
  }
  if (kind == "segments") {
    std::vector<IntensitySegment> segs;
    for (const auto& spec : cfg.get_all("intensity.segment")) {
      auto tok = split_tokens(spec);
      if (tok.size() < 4)
        throw std::runtime_error("config: bad intensity.segment '" + spec + "'");
      IntensitySegment seg;
      seg.start = parse_number("intensity.segment", tok[0]);
      seg.end = parse_number("intensity.segment", tok[1]);
      if (tok[2] == "const") {
        if (tok.size() != 4)
          throw std::runtime_error("config: bad intensity.segment '" + spec + "'");
        seg.rate = parse_number("intensity.segment", tok[3]);
      } else if (tok[2] == "linear") {
        if (tok.size() != 5 && !(tok.size() == 7 && tok[5] == "cap"))
          throw std::runtime_error("config: bad intensity.segment '" + spec + "'");
        seg.linear = true;
        seg.slope = parse_number("intensity.segment", tok[3]);
        seg.intercept = parse_number("intensity.segment", tok[4]);
        if (tok.size() == 7) seg.cap = parse_number("intensity.segment", tok[6]);
      } else {
        throw std::runtime_error("config: segment shape must be const or linear");
      }
      segs.push_back(seg);
    }
    if (segs.empty())
      throw std::runtime_error("config: intensity.kind=segments needs segments");
    return IntensityFunction::piecewise(std::move(segs));
  }
  throw std::runtime_error("config: unknown intensity.kind '" + kind + "'");
}

}  // namespace collab
