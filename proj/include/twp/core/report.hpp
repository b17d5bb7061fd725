#pragma once

#include <optional>
#include <string>
#include <vector>

namespace twp {

enum class Verdict { pass, fail, undecided };

const char* to_string(Verdict v);

struct Check {
  std::string name;
  Verdict verdict = Verdict::pass;
  std::string detail;
  std::optional<double> value;
  std::optional<double> tolerance;
};

// Ordered collection of checks. The overall verdict is FAIL if any check fails,
// otherwise UNDECIDED if any check is undecided, otherwise PASS.
struct Report {
  std::string subject;
  std::vector<Check> checks;

  void add(Check c) { checks.push_back(std::move(c)); }
  void add(std::string name, bool ok, std::string detail = {});
  void merge(const Report& other, const std::string& prefix = {});
  Verdict overall() const;
  bool passed() const { return overall() == Verdict::pass; }
  const Check* find(const std::string& name) const;
};

}  // namespace twp
