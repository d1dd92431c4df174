#pragma once

#include <cstddef>
#include <deque>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace kanlift {

/// One named property with its verdict. `witness` describes the first
/// counterexample found and is empty on success.
struct CheckResult {
  std::string name;
  bool passed = true;
  std::size_t cases = 0;
  std::string witness;
};

/// Outcome of a verification battery.
class Report {
 public:
  /// References stay valid across later add() calls.
  CheckResult& add(std::string name) {
    checks_.push_back(CheckResult{std::move(name), true, 0, {}});
    return checks_.back();
  }

  void append(const Report& other) {
    checks_.insert(checks_.end(), other.checks_.begin(), other.checks_.end());
  }

  bool passed() const {
    for (const auto& c : checks_)
      if (!c.passed) return false;
    return true;
  }

  const std::deque<CheckResult>& checks() const noexcept { return checks_; }

  const CheckResult* first_failure() const {
    for (const auto& c : checks_)
      if (!c.passed) return &c;
    return nullptr;
  }

  friend std::ostream& operator<<(std::ostream& os, const Report& r) {
    for (const auto& c : r.checks_) {
      os << (c.passed ? "PASS " : "FAIL ") << c.name << " (" << c.cases << " cases)";
      if (!c.passed) os << "\n     witness: " << c.witness;
      os << '\n';
    }
    return os;
  }

 private:
  std::deque<CheckResult> checks_;
};

/// Records a failure once; later failures keep the first witness.
inline void fail(CheckResult& check, const std::string& witness) {
  if (check.passed) check.witness = witness;
  check.passed = false;
}

}  // namespace kanlift
