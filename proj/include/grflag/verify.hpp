#pragma once

#include "grflag/filtration.hpp"
#include "grflag/groebner.hpp"
#include "grflag/lie_data.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace grflag {

inline constexpr const char* kEngineVersion = "grflag 0.1.0";

enum class Status { Pass, Fail, NotCheckable };
std::string status_name(Status s);

struct Check {
  std::string id;
  Status status;
  std::string expected;
  std::string actual;
  std::string anchor;
};

struct VerificationReport {
  std::string case_name;
  std::string suite;
  std::vector<Check> checks;
  std::string engine_version = kEngineVersion;
  double wall_time = 0;  // seconds

  bool failed() const;
  std::size_t count(Status s) const;
  // Keys in fixed order; wall_time is the only nondeterministic field.
  std::string to_json(bool include_timing = true) const;
  std::string to_text() const;
};

class SuiteError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

const std::vector<std::string>& suite_names();

// Throws SuiteError for an unknown suite.
VerificationReport run_suite(const GroupCase& c, const std::string& suite, Exec exec = default_exec());
// Cases run concurrently; output order follows `cases`.
std::vector<VerificationReport> run_suites(const std::vector<std::string>& cases, const std::string& suite,
                                           Exec exec = default_exec());
std::string reports_to_json(const std::vector<VerificationReport>& reports, bool include_timing = true);

struct PresentationComparison {
  bool checkable = false;
  std::string reason;
  std::vector<std::int64_t> ideal_series;    // dense, from the Groebner basis
  std::vector<std::int64_t> gr_series;       // mod-p dimensions of gr by weight
  std::vector<std::int64_t> ci_series;       // S(t)/(b-sequence)
  std::vector<std::int64_t> product_series;  // gr_series * ci_series
  std::vector<int> mismatched_degrees;
  bool equal = false;
  std::int64_t ideal_dim = 0;
  std::int64_t product_dim = 0;
};

PresentationComparison assemble_flag_presentation(const GroupCase& c, Exec exec = default_exec());

}  // namespace grflag
