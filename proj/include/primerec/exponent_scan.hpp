#pragma once

// The minimal effective exponent s_n: the smallest s such that
// ceil(h(s')) = p_{n+1} for every s' >= s, located by a grid search on
// (1.1, 2 p_n] followed by bisection.

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "primerec/ball.hpp"

namespace primerec {

struct ScanRecord {
  std::size_t n = 0;
  std::int64_t p_n = 0;
  std::int64_t p_next = 0;
  double s_n = 0.0;
  double ratio = 0.0;  // s_n / p_n
  /// Sign changes of h(s) - (p_next - 1) seen on the grid; 1 when the
  /// crossing is unique at grid resolution.
  int crossings_checked = 0;
  double tol = 0.0;
  long max_precision_bits = 0;
};

struct ScanOptions {
  double tol = 1e-6;
  /// Grid step as a multiple of p_n.
  double grid_step_factor = 0.05;
  /// Absolute grid step; overrides grid_step_factor when positive.
  double grid_step = 0.0;
  double grid_start = 1.1;
  PrecisionPolicy precision;
  /// Worker threads for scan_range; 0 picks the hardware concurrency.
  unsigned threads = 0;
};

/// The grid found h(s) above p_{n+1} - 1 nowhere, or everywhere.
class NoCrossingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// s_n for step n, using primes[0..n] (primes[n] is p_{n+1}). Returns the
/// upper end of the final bisection bracket of the last upward crossing on
/// the grid, so s_n is within tol/2 of that crossing. Throws
/// NoCrossingError, PrecisionExhausted, std::invalid_argument.
ScanRecord minimal_exponent(std::span<const std::int64_t> primes, std::size_t n,
                            const ScanOptions& options = {});

/// One record per n in [n_min, n_max], in order. Evaluation runs in
/// parallel across n. Errors are rethrown as StepError with the failing n.
std::vector<ScanRecord> scan_range(std::span<const std::int64_t> primes, std::size_t n_min,
                                   std::size_t n_max, const ScanOptions& options = {});

/// Re-evaluates h at s_n - tol and s_n + tol and checks that the enclosures
/// lie strictly below and strictly above p_next - 1.
bool verify_bracket(std::span<const std::int64_t> primes, const ScanRecord& record,
                    const PrecisionPolicy& precision = {});

/// Header `n,p_n,p_next,s_n,ratio`, reals to 9 significant digits.
void write_scan_csv(std::ostream& out, const std::vector<ScanRecord>& records);

/// Gnuplot script plotting ratio against n from `csv_path`.
void write_gnuplot_script(std::ostream& out, const std::string& csv_path);

/// `%.9g` formatting shared by the CSV writers.
std::string format_real(double value);

}  // namespace primerec
