#include "model_file.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace cli {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(const std::string& text, const std::string& what) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
    throw ConfigError(what + ": not a finite number: '" + text + "'");
  }
  return v;
}

std::vector<double> parse_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(trim(item), what));
  if (out.empty()) throw ConfigError(what + ": empty list");
  return out;
}

} // namespace

KeyValueFile KeyValueFile::parse(const std::string& text, const std::string& origin) {
  KeyValueFile f;
  f.origin_ = origin;
  std::istringstream in(text);
  std::string line;
  std::string section;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const std::string where = origin + ":" + std::to_string(lineno);
    if (t.front() == '[') {
      if (t.back() != ']' || t.size() < 3) throw ConfigError(where + ": malformed section header");
      section = trim(t.substr(1, t.size() - 2));
      f.sections_[section];
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw ConfigError(where + ": expected key = value");
    if (section.empty()) throw ConfigError(where + ": key outside of any section");
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (key.empty()) throw ConfigError(where + ": empty key");
    auto& sec = f.sections_[section];
    if (sec.count(key)) throw ConfigError(where + ": duplicate key '" + key + "'");
    sec[key] = value;
  }
  return f;
}

KeyValueFile KeyValueFile::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read input file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path);
}

bool KeyValueFile::has_section(const std::string& section) const {
  return sections_.count(section) != 0;
}

bool KeyValueFile::has(const std::string& section, const std::string& key) const {
  const auto it = sections_.find(section);
  return it != sections_.end() && it->second.count(key) != 0;
}

std::string KeyValueFile::get(const std::string& section, const std::string& key) const {
  if (!has(section, key)) {
    throw ConfigError(origin_ + ": missing '" + key + "' in [" + section + "]");
  }
  return sections_.at(section).at(key);
}

std::string KeyValueFile::get_or(const std::string& section, const std::string& key,
                                 const std::string& fallback) const {
  return has(section, key) ? get(section, key) : fallback;
}

double KeyValueFile::number(const std::string& section, const std::string& key,
                            double fallback) const {
  if (!has(section, key)) return fallback;
  return parse_double(get(section, key), origin_ + ": [" + section + "] " + key);
}

std::size_t KeyValueFile::count(const std::string& section, const std::string& key,
                                std::size_t fallback) const {
  if (!has(section, key)) return fallback;
  const double v = number(section, key, 0.0);
  if (v < 1.0 || std::floor(v) != v) {
    throw ConfigError(origin_ + ": [" + section + "] " + key + " must be a positive integer");
  }
  return static_cast<std::size_t>(v);
}

Json KeyValueFile::to_json() const {
  Json j = Json::object();
  for (const auto& [name, entries] : sections_) {
    Json s = Json::object();
    for (const auto& [k, v] : entries) s[k] = v;
    j[name] = s;
  }
  return j;
}

nogo::PureState state_from_file(const KeyValueFile& f) {
  const std::string kind = f.get("state", "kind");
  if (kind == "max_entangled") {
    return nogo::max_entangled(f.count("state", "n", 2));
  }
  if (kind == "singlet") return nogo::singlet();
  if (kind == "schmidt") {
    return nogo::schmidt_form_state(parse_list(f.get("state", "coefficients"), "coefficients"));
  }
  if (kind == "product") {
    const auto dims = parse_list(f.get_or("state", "dims", "2,2"), "dims");
    if (dims.size() != 2 || dims[0] < 1 || dims[1] < 1) {
      throw ConfigError("product state: dims must be 'da,db'");
    }
    const auto da = static_cast<Eigen::Index>(dims[0]);
    const auto db = static_cast<Eigen::Index>(dims[1]);
    const auto ia = static_cast<Eigen::Index>(f.number("state", "a", 0.0));
    const auto ib = static_cast<Eigen::Index>(f.number("state", "b", 0.0));
    if (ia < 0 || ia >= da || ib < 0 || ib >= db) {
      throw ConfigError("product state: basis index out of range");
    }
    nogo::ComplexVector a = nogo::ComplexVector::Zero(da);
    nogo::ComplexVector b = nogo::ComplexVector::Zero(db);
    a(ia) = 1.0;
    b(ib) = 1.0;
    return nogo::product_state(a, b);
  }
  throw ConfigError("unknown state kind '" + kind + "'");
}

LoadedModel model_from_file(const KeyValueFile& f, std::uint64_t seed) {
  using namespace nogo;
  const std::string family = f.get("model", "family");
  LoadedModel out;

  if (family == "trivial") {
    const PureState psi = state_from_file(f);
    out.local_dim = psi.dims().a;
    if (psi.dims().a != psi.dims().b) throw ConfigError("trivial model needs equal factor dims");
    out.model = std::make_unique<QuantumTrivialModel>(DensityOperator(psi),
                                                      f.count("params", "hidden", 1));
    return out;
  }

  if (family == "leggett" || family == "eta-leggett") {
    if (f.has("state", "kind") && f.get("state", "kind") != "singlet") {
      throw ConfigError("Leggett models describe the singlet; set kind = singlet");
    }
    const double eta = family == "leggett" ? 1.0 : f.number("params", "eta", 0.5);
    if (family == "leggett" && f.has("params", "eta")) {
      throw ConfigError("family 'leggett' has eta = 1; use 'eta-leggett' for other values");
    }
    const std::string corr = f.get_or("params", "correlation", "product");
    leggett::CorrelationFn fn;
    if (corr == "product") {
      fn = leggett::product_correlation;
    } else if (corr == "quantum") {
      // Singlet correlation, clipped into the admissible range.
      fn = [](const leggett::LeggettLambda& lam, const leggett::BlochVector& a,
              const leggett::BlochVector& b) {
        const auto bounds = leggett::c_bounds(lam, a, b);
        return std::clamp(leggett::singlet_correlation(a, b), bounds.lo, bounds.hi);
      };
    } else {
      throw ConfigError("unknown correlation '" + corr + "' (product | quantum)");
    }
    try {
      out.model = std::make_unique<LeggettModel>(
          LeggettModel::on_grid(f.count("params", "grid", 64), eta, fn, seed));
    } catch (const nogo::ValidationError& e) {
      throw ConfigError(e.what());
    }
    out.local_dim = 2;
    return out;
  }

  if (family == "planted-signalling" || family == "planted-contextual-joint") {
    const std::size_t n = f.count("params", "n", 2);
    const double eps = f.number("params", "epsilon", 0.1);
    try {
      if (family == "planted-signalling") {
        out.model = std::make_unique<PlantedSignallingModel>(Dims{n, n}, eps);
      } else {
        out.model = std::make_unique<PlantedContextualJointModel>(Dims{n, n}, eps);
      }
    } catch (const nogo::ValidationError& e) {
      throw ConfigError(e.what());
    }
    out.local_dim = n;
    return out;
  }

  throw ConfigError("unknown model family '" + family + "'");
}

} // namespace cli
