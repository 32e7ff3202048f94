#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "lvmkit/interchange.hpp"

namespace lvmkit {

struct SuiteOptions {
  std::uint64_t seed = 0;
  int samples = 100; // instances per check
  double tol = 1e-10;
  int bound = 16;
  int p = 1;
  /// Negative control: perturbs one map in every suite so its checks must fail.
  bool inject_fault = false;
  /// 0 reads LVMKIT_THREADS, defaulting to the hardware concurrency.
  int threads = 0;
};

struct CheckResult {
  std::string name;
  int count = 0;
  double max_residual = 0.0;
  double tol = 0.0;
  bool pass = false;
  std::string detail;
};

struct SuiteReport {
  std::string suite;
  std::vector<CheckResult> checks;
  bool pass = false;
};

/// Names accepted by run_suite: group-laws, gluing, developing, action, all.
const std::vector<std::string>& suite_names();

/// Throws InputError for an unknown suite.
SuiteReport run_suite(const std::string& name, const SuiteOptions& opt);

SuiteReport group_law_suite(const SuiteOptions& opt);
SuiteReport gluing_suite(const SuiteOptions& opt);
SuiteReport developing_suite(const SuiteOptions& opt);
SuiteReport action_suite(const SuiteOptions& opt);

/// Deterministic per-instance seed so results do not depend on the thread count.
std::uint64_t instance_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

/// Runs body(i) for i in [0, n) on up to `threads` workers and returns the results in order.
std::vector<double> parallel_map(int n, int threads, const std::function<double(int)>& body);

int thread_count(int requested);

io::Json to_json(const SuiteReport& r, const SuiteOptions& opt);
std::string to_text(const SuiteReport& r, const SuiteOptions& opt);

} // namespace lvmkit
