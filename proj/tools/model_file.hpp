#pragma once

// Declarative key = value files for states and hidden-variable models:
//
//   [model]
//   family = leggett
//   [state]
//   kind = singlet
//   [params]
//   grid = 64
//
// Blank lines and lines starting with '#' are ignored.

#include <map>
#include <memory>
#include <string>

#include "format.hpp"
#include "nogo/hv_models.hpp"
#include "nogo/states.hpp"

namespace cli {

class KeyValueFile {
public:
  static KeyValueFile parse(const std::string& text, const std::string& origin = "<input>");
  static KeyValueFile load(const std::string& path);

  [[nodiscard]] bool has(const std::string& section, const std::string& key) const;
  [[nodiscard]] std::string get(const std::string& section, const std::string& key) const;
  [[nodiscard]] std::string get_or(const std::string& section, const std::string& key,
                                   const std::string& fallback) const;
  [[nodiscard]] double number(const std::string& section, const std::string& key,
                              double fallback) const;
  [[nodiscard]] std::size_t count(const std::string& section, const std::string& key,
                                  std::size_t fallback) const;
  [[nodiscard]] bool has_section(const std::string& section) const;

  /// Resolved contents, for echoing into reports.
  [[nodiscard]] Json to_json() const;

private:
  std::string origin_;
  std::map<std::string, std::map<std::string, std::string>> sections_;
};

/// State described by a [state] section: kind = max_entangled | singlet |
/// product | schmidt, with n (max_entangled), coefficients (schmidt,
/// comma-separated) or a, b (product, computational basis indices) and
/// dims (product, "da,db").
nogo::PureState state_from_file(const KeyValueFile& f);

struct LoadedModel {
  std::unique_ptr<nogo::HVModel> model;
  std::size_t local_dim = 0; // per-side dimension for context generation
};

/// Model described by the [model] and [params] sections.
LoadedModel model_from_file(const KeyValueFile& f, std::uint64_t seed);

} // namespace cli
