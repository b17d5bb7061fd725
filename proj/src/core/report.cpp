#include "twp/core/report.hpp"

namespace twp {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::pass:
      return "PASS";
    case Verdict::fail:
      return "FAIL";
    case Verdict::undecided:
      return "UNDECIDED";
  }
  return "?";
}

void Report::add(std::string name, bool ok, std::string detail) {
  checks.push_back(Check{std::move(name), ok ? Verdict::pass : Verdict::fail, std::move(detail), {}, {}});
}

void Report::merge(const Report& other, const std::string& prefix) {
  for (const auto& c : other.checks) {
    Check copy = c;
    if (!prefix.empty()) copy.name = prefix + "." + copy.name;
    checks.push_back(std::move(copy));
  }
}

Verdict Report::overall() const {
  bool undecided = false;
  for (const auto& c : checks) {
    if (c.verdict == Verdict::fail) return Verdict::fail;
    if (c.verdict == Verdict::undecided) undecided = true;
  }
  return undecided ? Verdict::undecided : Verdict::pass;
}

const Check* Report::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

}  // namespace twp
