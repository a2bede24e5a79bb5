#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace scmimo {

enum class Relation { Within, Greater, AtLeast, Less };

/// One line of a validation report.
struct Check {
  std::string name;
  Relation relation = Relation::Within;
  double expected = 0.0;
  double measured = 0.0;
  double tolerance = 0.0;  // absolute; Within only
  std::string group;       // acceptance item the check belongs to, if any
  bool passed() const;
};

struct SuiteReport {
  std::string suite;
  std::vector<Check> checks;
  bool passed() const;
  // True when every check in `group` passes (and at least one exists).
  bool group_passed(const std::string& group) const;
  // "name,expected,measured,tolerance,verdict" lines, header first.
  std::string format() const;
};

struct SuiteOptions {
  double tolerance_scale = 1.0;  // multiplies every Within tolerance
  std::uint64_t seed = 20240611;
};

// Suites: closed_forms, appendix, zero_forcing, figures. Throws
// std::invalid_argument for any other name.
SuiteReport run_suite(const std::string& name, const SuiteOptions& options = {});
const std::vector<std::string>& suite_names();

SuiteReport closed_forms_suite(const SuiteOptions& options);
SuiteReport appendix_suite(const SuiteOptions& options);
SuiteReport zero_forcing_suite(const SuiteOptions& options);
SuiteReport figures_suite(const SuiteOptions& options);

}  // namespace scmimo
