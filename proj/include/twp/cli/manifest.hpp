#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "twp/cohomo/lattice.hpp"
#include "twp/core/error.hpp"
#include "twp/dynamics/dynamics.hpp"
#include "twp/symcalc/chart_map.hpp"

namespace twp::cli {

using sym::Chart;
using sym::ChartMap;
using sym::Form;
using sym::Multivector;
using sym::Scalar;

struct SourceError {
  std::size_t line = 0, column = 0;
  std::string message;
};

class ManifestError : public Error {
 public:
  explicit ManifestError(std::vector<SourceError> errors);
  const std::vector<SourceError>& errors() const { return errors_; }

 private:
  std::vector<SourceError> errors_;
};

using Names = std::vector<std::string>;
using Coords = std::vector<sym::Coordinate>;
using Rows = std::vector<std::vector<double>>;  // numbers; rows separated by ';'
struct Scalars {
  Chart chart;
  std::vector<Scalar> items;  // separated by ';'
};
struct Forms {
  Chart chart;
  std::vector<Form> items;  // separated by ';'
};
using Nodes = std::vector<dynamics::LoopNode>;

using Value =
    std::variant<Names, Coords, Rows, long, Scalars, Form, Forms, Multivector, ChartMap, cohomo::IntMatrix, Nodes>;

struct Entry {
  std::string key, sub;  // written `key` or `key.sub`
  Value value;
  std::size_t line = 0, column = 0;  // of the value
};

struct Section {
  std::string kind, name;
  std::vector<Entry> entries;
  std::size_t line = 0;

  const Entry* find(std::string_view key, std::string_view sub = {}) const;
  bool has(std::string_view key, std::string_view sub = {}) const { return find(key, sub) != nullptr; }
  template <class T>
  const T& get(std::string_view key, std::string_view sub = {}) const;
  template <class T>
  const T* get_if(std::string_view key, std::string_view sub = {}) const {
    const Entry* e = find(key, sub);
    return e ? std::get_if<T>(&e->value) : nullptr;
  }
  // The single name of a reference entry.
  const std::string& ref(std::string_view key) const;
};

// Declarations in source order. Every section kind and key is documented in README.md.
class Manifest {
 public:
  std::vector<Section> sections;

  const Section* find(std::string_view kind, std::string_view name) const;
  const Section& at(std::string_view kind, std::string_view name) const;
  std::vector<const Section*> of_kind(std::string_view kind) const;
  // The chart declared by `chart NAME`.
  Chart chart(std::string_view name) const;
};

Manifest parse_manifest(std::string_view text);
// Canonical text: one section per block, one entry per line, expressions in canonical form.
std::string serialize(const Manifest& m);
// Symbolic equality of every value; charts and names compare by value.
bool equivalent(const Manifest& a, const Manifest& b);

template <class T>
const T& Section::get(std::string_view key, std::string_view sub) const {
  const Entry* e = find(key, sub);
  if (!e) throw ValidationError(kind + " " + name + ": missing '" + std::string(key) + (sub.empty() ? "" : "." + std::string(sub)) + "'");
  const T* v = std::get_if<T>(&e->value);
  if (!v) throw ValidationError(kind + " " + name + ": '" + std::string(key) + "' has the wrong type");
  return *v;
}

}  // namespace twp::cli
