#include "twp/cli/manifest.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <set>

#include "json.hpp"
#include "twp/symcalc/text.hpp"

namespace twp::cli {

using sym::CoordKind;
using sym::ParseError;

ManifestError::ManifestError(std::vector<SourceError> errors)
    : Error([&] {
        std::string s;
        for (const auto& e : errors) {
          if (!s.empty()) s += "\n";
          s += std::to_string(e.line) + ":" + std::to_string(e.column) + ": " + e.message;
        }
        return s;
      }()),
      errors_(std::move(errors)) {}

const Entry* Section::find(std::string_view key, std::string_view sub) const {
  for (const auto& e : entries)
    if (e.key == key && e.sub == sub) return &e;
  return nullptr;
}

const std::string& Section::ref(std::string_view key) const {
  const Names& n = get<Names>(key);
  if (n.size() != 1) throw ValidationError(kind + " " + name + ": '" + std::string(key) + "' must name one declaration");
  return n[0];
}

const Section* Manifest::find(std::string_view kind, std::string_view name) const {
  for (const auto& s : sections)
    if (s.kind == kind && s.name == name) return &s;
  return nullptr;
}

const Section& Manifest::at(std::string_view kind, std::string_view name) const {
  const Section* s = find(kind, name);
  if (!s) throw ValidationError("no " + std::string(kind) + " named '" + std::string(name) + "'");
  return *s;
}

std::vector<const Section*> Manifest::of_kind(std::string_view kind) const {
  std::vector<const Section*> out;
  for (const auto& s : sections)
    if (s.kind == kind) out.push_back(&s);
  return out;
}

Chart Manifest::chart(std::string_view name) const { return Chart(at("chart", name).get<Coords>("coords")); }

namespace {

// ------------------------------------------------------------ text helpers

struct Piece {
  std::string_view text;
  std::size_t offset;  // 0-based within the value
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<Piece> split(std::string_view s, char sep, std::size_t base = 0) {
  std::vector<Piece> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      std::string_view part = s.substr(start, i - start);
      std::size_t lead = 0;
      while (lead < part.size() && std::isspace(static_cast<unsigned char>(part[lead]))) ++lead;
      out.push_back({trim(part), base + start + lead});
      start = i + 1;
    }
  }
  return out;
}

bool is_identifier(std::string_view s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  return std::all_of(s.begin(), s.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

// Error at a 0-based offset inside the current value.
struct ValueError {
  std::size_t offset;
  std::string message;
};

std::string format_double(double x) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

double parse_double(const Piece& p) {
  double x = 0;
  auto r = std::from_chars(p.text.data(), p.text.data() + p.text.size(), x);
  if (p.text.empty() || r.ec != std::errc() || r.ptr != p.text.data() + p.text.size())
    throw ValueError{p.offset, "expected a number, found '" + std::string(p.text) + "'"};
  return x;
}

long parse_long(const Piece& p) {
  long x = 0;
  auto r = std::from_chars(p.text.data(), p.text.data() + p.text.size(), x);
  if (p.text.empty() || r.ec != std::errc() || r.ptr != p.text.data() + p.text.size())
    throw ValueError{p.offset, "expected an integer, found '" + std::string(p.text) + "'"};
  return x;
}

template <class F>
auto with_offset(std::size_t offset, F&& f) {
  try {
    return f();
  } catch (const ParseError& e) {
    throw ValueError{offset + (e.column() ? e.column() - 1 : 0), e.what()};
  } catch (const Error& e) {
    throw ValueError{offset, e.what()};
  }
}

Names parse_names(std::string_view text) {
  Names out;
  for (const auto& p : split(text, ',')) {
    if (!is_identifier(p.text)) throw ValueError{p.offset, "expected a name, found '" + std::string(p.text) + "'"};
    out.emplace_back(p.text);
  }
  return out;
}

Coords parse_coords(std::string_view text) {
  Coords out;
  std::set<std::string> seen;
  for (const auto& p : split(text, ',')) {
    const auto parts = split(p.text, ':', p.offset);
    if (parts.size() != 2 || !is_identifier(parts[0].text))
      throw ValueError{p.offset, "expected <name>:<kind>, found '" + std::string(p.text) + "'"};
    CoordKind kind;
    if (parts[1].text == "real")
      kind = CoordKind::real;
    else if (parts[1].text == "angle")
      kind = CoordKind::angle;
    else
      throw ValueError{parts[1].offset, "coordinate kind must be 'real' or 'angle'"};
    const std::string name(parts[0].text);
    if (name == "pi" || name == "sin" || name == "cos") throw ValueError{p.offset, "'" + name + "' is reserved"};
    if (!seen.insert(name).second) throw ValueError{p.offset, "duplicate coordinate '" + name + "'"};
    out.push_back({name, kind});
  }
  return out;
}

Rows parse_rows(std::string_view text) {
  Rows out;
  for (const auto& row : split(text, ';')) {
    std::vector<double> r;
    for (const auto& p : split(row.text, ',', row.offset)) r.push_back(parse_double(p));
    out.push_back(std::move(r));
  }
  return out;
}

Scalars parse_scalars(std::string_view text, const Chart& chart) {
  Scalars out{chart, {}};
  for (const auto& p : split(text, ';'))
    out.items.push_back(with_offset(p.offset, [&] { return sym::parse_scalar(p.text, chart); }));
  return out;
}

Forms parse_forms(std::string_view text, const Chart& chart, int degree) {
  Forms out{chart, {}};
  for (const auto& p : split(text, ';'))
    out.items.push_back(with_offset(p.offset, [&] { return sym::parse_form(p.text, chart, degree); }));
  return out;
}

ChartMap parse_map(std::string_view text, const Chart& from, const Chart& to) {
  std::vector<sym::CoordinateImage> images(to.dim());
  std::vector<bool> seen(to.dim(), false);
  for (const auto& p : split(text, ';')) {
    const std::size_t colon = p.text.find(':');
    if (colon == std::string_view::npos) throw ValueError{p.offset, "expected <target>: <expression>"};
    const std::string name(trim(p.text.substr(0, colon)));
    const auto i = to.find(name);
    if (!i) throw ValueError{p.offset, "unknown target coordinate '" + name + "'"};
    if (seen[*i]) throw ValueError{p.offset, "target coordinate '" + name + "' given twice"};
    seen[*i] = true;
    std::string_view rhs = p.text.substr(colon + 1);
    std::size_t lead = 0;
    while (lead < rhs.size() && std::isspace(static_cast<unsigned char>(rhs[lead]))) ++lead;
    const std::size_t off = p.offset + colon + 1 + lead;
    rhs = trim(rhs);
    if (to.is_angle(*i))
      images[*i].angle = with_offset(off, [&] { return sym::parse_angle_image(rhs, from); });
    else
      images[*i].expr = with_offset(off, [&] { return sym::parse_scalar(rhs, from); });
  }
  for (std::size_t i = 0; i < to.dim(); ++i)
    if (!seen[i]) throw ValueError{0, "no image for target coordinate '" + to.coord(i).name + "'"};
  return with_offset(0, [&] { return ChartMap(from, to, images); });
}

cohomo::IntMatrix parse_matrix(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception&) {
    throw ValueError{0, "expected an integer matrix such as [[1, 0], [0, 1]]"};
  }
  cohomo::IntMatrix m;
  if (!j.is_array() || j.empty()) throw ValueError{0, "expected a non-empty list of rows"};
  for (const auto& row : j) {
    if (!row.is_array()) throw ValueError{0, "expected a list of rows"};
    std::vector<long> r;
    for (const auto& x : row) {
      if (!x.is_number_integer()) throw ValueError{0, "matrix entries must be integers"};
      r.push_back(x.get<long>());
    }
    if (r.size() != j.size()) throw ValueError{0, "matrix must be square"};
    m.push_back(std::move(r));
  }
  return m;
}

Nodes parse_nodes(std::string_view text) {
  Nodes out;
  for (const auto& p : split(text, ';')) {
    const std::size_t colon = p.text.find(':');
    if (colon == std::string_view::npos) throw ValueError{p.offset, "expected <chart>: <base point>"};
    const std::string_view name = trim(p.text.substr(0, colon));
    if (!is_identifier(name)) throw ValueError{p.offset, "expected a chart name"};
    dynamics::LoopNode n{std::string(name), {}};
    for (const auto& x : split(p.text.substr(colon + 1), ',', p.offset + colon + 1)) n.base.push_back(parse_double(x));
    out.push_back(std::move(n));
  }
  return out;
}

// ------------------------------------------------------------ schema

enum class Type { ref, refs, names, coords, number, numbers, rows, integer, scalars, form, forms, mv, map, matrix, nodes };

enum class Sub { none, cover_chart, cover_overlap };

struct KeySpec {
  const char* key;
  Type type;
  Sub sub = Sub::none;
  const char* ref_kind = nullptr;  // for ref / refs
  int degree = 0;                  // for forms
  bool required = false;
};

const std::map<std::string, std::vector<KeySpec>>& schema() {
  static const std::map<std::string, std::vector<KeySpec>> s = {
      {"chart",
       {{"coords", Type::coords, Sub::none, nullptr, 0, true},
        {"casimirs", Type::names},
        {"domain", Type::scalars}}},
      {"system",
       {{"chart", Type::ref, Sub::none, "chart", 0, true},
        {"sigma", Type::form, Sub::none, nullptr, 2, true},
        {"integrals", Type::names, Sub::none, nullptr, 0, true},
        {"k", Type::integer, Sub::none, nullptr, 0, true}}},
      {"twisted",
       {{"chart", Type::ref, Sub::none, "chart", 0, true},
        {"pi", Type::mv, Sub::none, nullptr, 2, true},
        {"phi", Type::form, Sub::none, nullptr, 3},
        {"tau", Type::form, Sub::none, nullptr, 2}}},
      {"overlap",
       {{"from", Type::ref, Sub::none, "chart", 0, true},
        {"to", Type::ref, Sub::none, "chart", 0, true},
        {"map", Type::map, Sub::none, nullptr, 0, true},
        {"domain", Type::scalars}}},
      {"cover", {{"charts", Type::refs, Sub::none, "chart", 0, true}, {"overlaps", Type::refs, Sub::none, "overlap"}}},
      {"lattice",
       {{"cover", Type::ref, Sub::none, "cover", 0, true},
        {"basis", Type::forms, Sub::cover_chart, nullptr, 1},
        {"transition", Type::matrix, Sub::cover_overlap},
        {"primitive", Type::scalars, Sub::cover_chart}}},
      {"atlas",
       {{"cover", Type::ref, Sub::none, "cover", 0, true},
        {"submersion", Type::scalars, Sub::cover_chart},
        {"linear", Type::matrix, Sub::cover_overlap},
        {"shift", Type::scalars, Sub::cover_overlap}}},
      {"cocycle",
       {{"lattice", Type::ref, Sub::none, "lattice", 0, true},
        {"base", Type::ref, Sub::cover_chart, "twisted"},
        {"tau", Type::form, Sub::cover_chart, nullptr, 2},
        {"zeta", Type::form, Sub::cover_chart, nullptr, 2},
        {"eta", Type::form, Sub::cover_chart, nullptr, 2},
        {"kappa", Type::scalars, Sub::cover_overlap}}},
      {"quotient",
       {{"twisted", Type::ref, Sub::none, "twisted", 0, true},
        {"lattice", Type::ref, Sub::none, "lattice", 0, true},
        {"s", Type::form, Sub::none, nullptr, 2}}},
      {"piece",
       {{"total", Type::ref, Sub::none, "chart", 0, true},
        {"base", Type::ref, Sub::none, "twisted", 0, true},
        {"sigma", Type::form, Sub::none, nullptr, 2, true},
        {"domain", Type::scalars}}},
      {"fibremap",
       {{"from", Type::ref, Sub::none, "piece", 0, true},
        {"to", Type::ref, Sub::none, "piece", 0, true},
        {"map", Type::map, Sub::none, nullptr, 0, true},
        {"domain", Type::scalars}}},
      {"realisation",
       {{"system", Type::ref, Sub::none, "system"},
        {"cocycle", Type::ref, Sub::none, "cocycle"},
        {"quotient", Type::ref, Sub::none, "quotient"},
        {"pieces", Type::refs, Sub::none, "piece"},
        {"transitions", Type::refs, Sub::none, "fibremap"}}},
      {"integrand",
       {{"cover", Type::ref, Sub::none, "cover", 0, true},
        {"form", Type::form, Sub::cover_chart, nullptr, 3},
        {"upsilon", Type::form, Sub::cover_chart, nullptr, 2},
        {"cell", Type::numbers}}},
      {"criterion",
       {{"lattice", Type::ref, Sub::none, "lattice"},
        {"cocycle", Type::ref, Sub::none, "cocycle"},
        {"c", Type::form, Sub::cover_chart, nullptr, 2},
        {"frame", Type::integer},
        {"characteristic", Type::form, Sub::cover_chart, nullptr, 3},
        {"witness", Type::form, Sub::cover_chart, nullptr, 2},
        {"cell", Type::numbers}}},
      {"periods",
       {{"realisation", Type::ref, Sub::none, "realisation", 0, true},
        {"chart", Type::names},
        {"point", Type::rows, Sub::none, nullptr, 0, true},
        {"expect", Type::rows}}},
      {"loop",
       {{"realisation", Type::ref, Sub::none, "realisation", 0, true},
        {"fibre", Type::numbers},
        {"nodes", Type::nodes, Sub::none, nullptr, 0, true},
        {"expect", Type::matrix}}},
      {"pullback",
       {{"realisation", Type::ref, Sub::none, "realisation", 0, true},
        {"chart", Type::names},
        {"base", Type::ref, Sub::none, "chart", 0, true},
        {"alpha", Type::form, Sub::none, nullptr, 1, true},
        {"point", Type::numbers, Sub::none, nullptr, 0, true},
        {"pairs", Type::integer}}},
      {"config",
       {{"step", Type::number},
        {"tolerance_return", Type::number},
        {"t_max", Type::number},
        {"tolerance", Type::number},
        {"quadrature_order", Type::integer},
        {"panels", Type::integer},
        {"samples", Type::integer},
        {"seed", Type::integer}}},
  };
  return s;
}

const KeySpec* find_key(const std::string& kind, const std::string& key) {
  for (const auto& k : schema().at(kind))
    if (key == k.key) return &k;
  return nullptr;
}

// ------------------------------------------------------------ parser

class Parser {
 public:
  explicit Parser(const Manifest& m) : m_(m) {}

  Value parse(const Section& s, const KeySpec& spec, const std::string& sub, std::string_view text) {
    check_sub(s, spec, sub);
    switch (spec.type) {
      case Type::ref:
      case Type::refs: {
        Names n = parse_names(text);
        if (spec.type == Type::ref && n.size() != 1) throw ValueError{0, "expected one name"};
        for (const auto& name : n) {
          const Section* t = m_.find(spec.ref_kind, name);
          if (!t) throw ValueError{0, "unknown " + std::string(spec.ref_kind) + " '" + name + "'"};
        }
        check_refs(s, spec, sub, n);
        return n;
      }
      case Type::names: {
        Names n = parse_names(text);
        if (s.kind == "chart" || s.kind == "system") {
          const Chart c = s.kind == "chart" ? Chart(s.get<Coords>("coords")) : m_.chart(s.ref("chart"));
          for (const auto& name : n)
            if (!c.find(name)) throw ValueError{0, "unknown coordinate '" + name + "'"};
        }
        if (std::string(spec.key) == "chart" && n.size() != 1) throw ValueError{0, "expected one chart name"};
        return n;
      }
      case Type::coords:
        return parse_coords(text);
      case Type::number:
      case Type::numbers:
      case Type::rows: {
        Rows r = parse_rows(text);
        if (spec.type != Type::rows && r.size() != 1) throw ValueError{0, "expected a single list of numbers"};
        if (spec.type == Type::number && r[0].size() != 1) throw ValueError{0, "expected one number"};
        if (std::string(spec.key) == "cell" && r[0].size() != 2) throw ValueError{0, "cell needs t0, t1"};
        return r;
      }
      case Type::integer:
        return parse_long({trim(text), 0});
      case Type::scalars: {
        Scalars v = parse_scalars(text, context_chart(s, spec, sub));
        if (std::string(spec.key) == "shift")
          for (const auto& f : v.items)
            if (!f.constant_value()) throw ValueError{0, "shifts must be rational constants"};
        return v;
      }
      case Type::form:
        return with_offset(0, [&] { return sym::parse_form(text, context_chart(s, spec, sub), spec.degree); });
      case Type::forms:
        return parse_forms(text, context_chart(s, spec, sub), spec.degree);
      case Type::mv:
        return with_offset(0, [&] { return sym::parse_multivector(text, context_chart(s, spec, sub), spec.degree); });
      case Type::map: {
        if (s.kind == "overlap") return parse_map(text, m_.chart(s.ref("from")), m_.chart(s.ref("to")));
        return parse_map(text, m_.chart(m_.at("piece", s.ref("from")).ref("total")),
                         m_.chart(m_.at("piece", s.ref("to")).ref("total")));
      }
      case Type::matrix:
        return parse_matrix(text);
      case Type::nodes:
        return parse_nodes(text);
    }
    throw ValueError{0, "unsupported value"};
  }

 private:
  // Cover of a section whose sub-keys name cover charts or overlaps.
  const Section& cover_of(const Section& s) const {
    if (s.kind == "lattice" || s.kind == "atlas" || s.kind == "integrand") return m_.at("cover", s.ref("cover"));
    if (s.kind == "cocycle") return m_.at("cover", m_.at("lattice", s.ref("lattice")).ref("cover"));
    if (s.kind == "criterion") {
      if (s.has("lattice")) return m_.at("cover", m_.at("lattice", s.ref("lattice")).ref("cover"));
      if (s.has("cocycle")) return cover_of(m_.at("cocycle", s.ref("cocycle")));
      throw ValueError{0, "declare 'lattice' or 'cocycle' first"};
    }
    throw ValueError{0, "section has no cover"};
  }

  void check_sub(const Section& s, const KeySpec& spec, const std::string& sub) const {
    if (spec.sub == Sub::none) {
      if (!sub.empty()) throw ValueError{0, "key '" + std::string(spec.key) + "' takes no suffix"};
      return;
    }
    if (sub.empty()) throw ValueError{0, "key '" + std::string(spec.key) + "' needs a .<chart> or .<overlap> suffix"};
    const Section& cover = cover_of(s);
    if (spec.sub == Sub::cover_overlap && !cover.has("overlaps"))
      throw ValueError{0, "cover " + cover.name + " has no overlaps"};
    const Names& list = cover.get<Names>(spec.sub == Sub::cover_chart ? "charts" : "overlaps");
    if (std::find(list.begin(), list.end(), sub) == list.end())
      throw ValueError{0, "'" + sub + "' is not " + (spec.sub == Sub::cover_chart ? "a chart" : "an overlap") +
                              " of cover " + cover.name};
  }

  void check_refs(const Section& s, const KeySpec& spec, const std::string& sub, const Names& n) const {
    const std::string key = spec.key;
    if (s.kind == "cover" && key == "overlaps") {
      const Names& charts = s.get<Names>("charts");
      for (const auto& o : n) {
        const Section& ov = m_.at("overlap", o);
        for (const char* end : {"from", "to"})
          if (std::find(charts.begin(), charts.end(), ov.ref(end)) == charts.end())
            throw ValueError{0, "overlap " + o + " joins a chart outside the cover"};
      }
    }
    if (s.kind == "cocycle" && key == "base" && !(m_.chart(m_.at("twisted", n[0]).ref("chart")) == m_.chart(sub)))
      throw ValueError{0, "twisted structure " + n[0] + " does not live on chart " + sub};
    if (s.kind == "quotient" && key == "twisted" && !m_.at("twisted", n[0]).has("tau"))
      throw ValueError{0, "twisted structure " + n[0] + " declares no leaf extension 'tau'"};
  }

  Chart context_chart(const Section& s, const KeySpec& spec, const std::string& sub) const {
    if (spec.sub == Sub::cover_chart) return m_.chart(sub);
    if (spec.sub == Sub::cover_overlap) return m_.chart(m_.at("overlap", sub).ref("from"));
    const std::string key = spec.key;
    if (s.kind == "chart") return Chart(s.get<Coords>("coords"));
    if (s.kind == "system" || s.kind == "twisted") return m_.chart(s.ref("chart"));
    if (s.kind == "overlap") return m_.chart(s.ref("from"));
    if (s.kind == "quotient") return m_.chart(m_.at("twisted", s.ref("twisted")).ref("chart"));
    if (s.kind == "piece")
      return key == "sigma" ? m_.chart(s.ref("total")) : m_.chart(m_.at("twisted", s.ref("base")).ref("chart"));
    if (s.kind == "fibremap") return m_.chart(m_.at("twisted", m_.at("piece", s.ref("from")).ref("base")).ref("chart"));
    if (s.kind == "pullback") return m_.chart(s.ref("base"));
    throw ValueError{0, "no chart for this key"};
  }

  const Manifest& m_;
};

void check_required(const Section& s, std::vector<SourceError>& errors) {
  for (const auto& k : schema().at(s.kind))
    if (k.required && !s.has(k.key))
      errors.push_back({s.line, 1, s.kind + " " + s.name + ": missing required key '" + k.key + "'"});
  if (s.kind == "realisation") {
    int modes = 0;
    for (const char* k : {"system", "cocycle", "quotient", "pieces"}) modes += s.has(k);
    if (modes != 1)
      errors.push_back({s.line, 1, "realisation " + s.name + ": give exactly one of system, cocycle, quotient, pieces"});
    if (s.has("transitions") && !s.has("pieces"))
      errors.push_back({s.line, 1, "realisation " + s.name + ": transitions need pieces"});
  }
  if (s.kind == "criterion" && s.has("lattice") == s.has("cocycle"))
    errors.push_back({s.line, 1, "criterion " + s.name + ": give exactly one of lattice, cocycle"});
}

}  // namespace

Manifest parse_manifest(std::string_view text) {
  Manifest m;
  std::vector<SourceError> errors;
  Parser parser(m);
  std::size_t line_no = 0;
  bool in_section = false, section_ok = false, section_failed = false;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    const std::size_t next = end + 1;
    ++line_no;
    if (const std::size_t hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    std::size_t lead = 0;
    while (lead < line.size() && std::isspace(static_cast<unsigned char>(line[lead]))) ++lead;
    const std::string_view body = trim(line);
    pos = next;
    if (body.empty()) continue;

    if (body.front() == '[') {
      in_section = true;
      section_ok = false;
      if (!m.sections.empty() && !section_failed) check_required(m.sections.back(), errors);
      section_failed = false;
      if (body.back() != ']') {
        errors.push_back({line_no, lead + body.size(), "expected ']'"});
        continue;
      }
      const auto words = split(trim(body.substr(1, body.size() - 2)), ' ');
      std::vector<Piece> w;
      for (const auto& p : words)
        if (!p.text.empty()) w.push_back(p);
      if (w.empty() || !schema().count(std::string(w[0].text))) {
        errors.push_back({line_no, lead + 2, "unknown section kind '" + std::string(w.empty() ? "" : w[0].text) + "'"});
        continue;
      }
      const std::string kind(w[0].text);
      const bool named = kind != "config";
      if (w.size() != (named ? 2u : 1u) || (named && !is_identifier(w[1].text))) {
        errors.push_back({line_no, lead + 2, named ? "expected [" + kind + " <name>]" : "expected [config]"});
        continue;
      }
      const std::string name = named ? std::string(w[1].text) : std::string();
      if (m.find(kind, name)) {
        errors.push_back({line_no, lead + 2 + w[1].offset, "duplicate " + kind + " '" + name + "'"});
        continue;
      }
      m.sections.push_back({kind, name, {}, line_no});
      section_ok = true;
      continue;
    }

    if (!in_section) {
      errors.push_back({line_no, lead + 1, "entry outside a section"});
      continue;
    }
    if (!section_ok) continue;
    Section& s = m.sections.back();
    const std::size_t eq = body.find('=');
    if (eq == std::string_view::npos) {
      errors.push_back({line_no, lead + 1, "expected <key> = <value>"});
      continue;
    }
    const std::string_view lhs = trim(body.substr(0, eq));
    const std::size_t dot = lhs.find('.');
    const std::string key(dot == std::string_view::npos ? lhs : lhs.substr(0, dot));
    const std::string sub(dot == std::string_view::npos ? std::string_view() : lhs.substr(dot + 1));
    const KeySpec* spec = find_key(s.kind, key);
    if (!spec) {
      errors.push_back({line_no, lead + 1, "unknown key '" + key + "' in " + s.kind});
      continue;
    }
    if (s.find(key, sub)) {
      errors.push_back({line_no, lead + 1, "duplicate key '" + std::string(lhs) + "'"});
      continue;
    }
    std::string_view rhs = body.substr(eq + 1);
    std::size_t rlead = 0;
    while (rlead < rhs.size() && std::isspace(static_cast<unsigned char>(rhs[rlead]))) ++rlead;
    const std::size_t value_col = lead + eq + 1 + rlead + 1;
    rhs = trim(rhs);
    if (rhs.empty()) {
      errors.push_back({line_no, value_col, "empty value"});
      continue;
    }
    try {
      Value v = parser.parse(s, *spec, sub, rhs);
      s.entries.push_back({key, sub, std::move(v), line_no, value_col});
    } catch (const ValueError& e) {
      errors.push_back({line_no, value_col + e.offset, e.message});
      section_failed = true;
    } catch (const Error& e) {
      errors.push_back({line_no, value_col, e.what()});
      section_failed = true;
    }
  }
  if (!m.sections.empty() && !section_failed) check_required(m.sections.back(), errors);
  if (m.of_kind("chart").empty() && errors.empty()) errors.push_back({1, 1, "no chart declared"});
  if (!errors.empty()) throw ManifestError(std::move(errors));
  return m;
}

// ------------------------------------------------------------ serializer

namespace {

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string s;
  for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? sep : "") + parts[i];
  return s;
}

std::string numbers_text(const std::vector<double>& v) {
  std::vector<std::string> p;
  for (double x : v) p.push_back(format_double(x));
  return join(p, ", ");
}

struct Printer {
  std::string operator()(const Names& n) const { return join(n, ", "); }
  std::string operator()(const Coords& c) const {
    std::vector<std::string> p;
    for (const auto& x : c) p.push_back(x.name + (x.kind == CoordKind::angle ? ":angle" : ":real"));
    return join(p, ", ");
  }
  std::string operator()(const Rows& r) const {
    std::vector<std::string> p;
    for (const auto& row : r) p.push_back(numbers_text(row));
    return join(p, "; ");
  }
  std::string operator()(long x) const { return std::to_string(x); }
  std::string operator()(const Scalars& s) const {
    std::vector<std::string> p;
    for (const auto& f : s.items) p.push_back(sym::to_string(f, s.chart));
    return join(p, "; ");
  }
  std::string operator()(const Form& f) const { return sym::to_string(f); }
  std::string operator()(const Forms& f) const {
    std::vector<std::string> p;
    for (const auto& w : f.items) p.push_back(sym::to_string(w));
    return join(p, "; ");
  }
  std::string operator()(const Multivector& m) const { return sym::to_string(m); }
  std::string operator()(const ChartMap& m) const {
    std::vector<std::string> p;
    for (std::size_t i = 0; i < m.target().dim(); ++i) {
      const auto& im = m.images()[i];
      p.push_back(m.target().coord(i).name + ": " +
                  (m.target().is_angle(i) ? sym::angle_image_to_string(im.angle, m.source())
                                          : sym::to_string(im.expr, m.source())));
    }
    return join(p, "; ");
  }
  std::string operator()(const cohomo::IntMatrix& m) const {
    std::vector<std::string> rows;
    for (const auto& r : m) {
      std::vector<std::string> e;
      for (long x : r) e.push_back(std::to_string(x));
      rows.push_back("[" + join(e, ", ") + "]");
    }
    return "[" + join(rows, ", ") + "]";
  }
  std::string operator()(const Nodes& n) const {
    std::vector<std::string> p;
    for (const auto& x : n) p.push_back(x.chart + ": " + numbers_text(x.base));
    return join(p, "; ");
  }
};

bool same_map(const ChartMap& a, const ChartMap& b) {
  if (!(a.source() == b.source()) || !(a.target() == b.target())) return false;
  for (std::size_t i = 0; i < a.images().size(); ++i) {
    const auto &x = a.images()[i], &y = b.images()[i];
    if (!(x.expr == y.expr) || x.angle.terms != y.angle.terms || !(x.angle.shift == y.angle.shift)) return false;
  }
  return true;
}

bool same_value(const Value& a, const Value& b) {
  if (a.index() != b.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const T& y = std::get<T>(b);
        if constexpr (std::is_same_v<T, Scalars>) {
          return x.chart == y.chart && x.items.size() == y.items.size() &&
                 std::equal(x.items.begin(), x.items.end(), y.items.begin());
        } else if constexpr (std::is_same_v<T, Forms>) {
          return x.chart == y.chart && x.items.size() == y.items.size() &&
                 std::equal(x.items.begin(), x.items.end(), y.items.begin());
        } else if constexpr (std::is_same_v<T, ChartMap>) {
          return same_map(x, y);
        } else if constexpr (std::is_same_v<T, Nodes>) {
          if (x.size() != y.size()) return false;
          for (std::size_t i = 0; i < x.size(); ++i)
            if (x[i].chart != y[i].chart || x[i].base != y[i].base) return false;
          return true;
        } else {
          return x == y;
        }
      },
      a);
}

}  // namespace

std::string serialize(const Manifest& m) {
  std::string out;
  for (const auto& s : m.sections) {
    if (!out.empty()) out += "\n";
    out += "[" + s.kind + (s.name.empty() ? "" : " " + s.name) + "]\n";
    for (const auto& e : s.entries)
      out += e.key + (e.sub.empty() ? "" : "." + e.sub) + " = " + std::visit(Printer{}, e.value) + "\n";
  }
  return out;
}

bool equivalent(const Manifest& a, const Manifest& b) {
  if (a.sections.size() != b.sections.size()) return false;
  for (std::size_t i = 0; i < a.sections.size(); ++i) {
    const Section &x = a.sections[i], &y = b.sections[i];
    if (x.kind != y.kind || x.name != y.name || x.entries.size() != y.entries.size()) return false;
    for (std::size_t j = 0; j < x.entries.size(); ++j) {
      const Entry &p = x.entries[j], &q = y.entries[j];
      if (p.key != q.key || p.sub != q.sub || !same_value(p.value, q.value)) return false;
    }
  }
  return true;
}

}  // namespace twp::cli
