#include "primerec/exponent_scan.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <thread>

#include "primerec/recurrence.hpp"

namespace primerec {

namespace {

struct SignProbe {
  std::span<const std::int64_t> primes;
  std::size_t n;
  const PrecisionPolicy& precision;
  long max_bits_used = 0;

  // Sign of h(s) - (p_{n+1} - 1), certified.
  int operator()(double s) {
    const std::int64_t p_n = primes[n - 1];
    const BallReal threshold = BallReal::exact(static_cast<long>(primes[n] - 1));
    const BallReal sb = BallReal::exact(s);
    long bits = precision.working_bits(s, p_n);
    if (const int sign = direct_sign(s, sb, threshold, bits); sign != 0) return sign;
    for (int escalation = 0; escalation <= precision.max_escalations; ++escalation) {
      max_bits_used = std::max(max_bits_used, bits);
      try {
        const BallReal h = h_of_s(primes, n, sb, precision.checked(bits));
        if (certainly_less(h, threshold)) return -1;
        if (certainly_less(threshold, h)) return 1;
      } catch (const DomainError&) {
        // D_n(s) - 1 not separated from 0
      }
      bits = precision.escalate(bits);
    }
    throw PrecisionExhausted("exponent scan: enclosure of h(" + format_real(s) +
                             ") too wide to compare with " + std::to_string(primes[n] - 1) +
                             " (n = " + std::to_string(n) + ")");
  }

  // The cancellation-free direct sum for D_n(s) - 1 needs only relative
  // precision, but its cutoff K must push the tail K^(1-s)/(s-1) below
  // p_{n+1}^-s by guard bits. Returns 0 when that costs more than the
  // product form at `product_bits` or the comparison stays undecided.
  int direct_sign(double s, const BallReal& sb, const BallReal& threshold, long product_bits) {
    const double log2_cutoff =
        (static_cast<double>(precision.guard_bits) +
         s * std::log2(static_cast<double>(primes[n])) - std::log2(s - 1.0)) /
        (s - 1.0);
    if (!(log2_cutoff < std::log2(static_cast<double>(kDirectTermsPerBit * product_bits)))) return 0;
    const auto cutoff = std::max<std::int64_t>(
        primes[n - 1], static_cast<std::int64_t>(std::ceil(std::exp2(log2_cutoff))));
    const long bits = precision.base_bits + precision.guard_bits;
    max_bits_used = std::max(max_bits_used, bits);
    try {
      const BallReal excess = dirichlet_series_direct_minus_one(primes, n, sb, cutoff, bits);
      const BallReal h = h_from_excess(excess, sb, bits);
      if (certainly_less(h, threshold)) return -1;
      if (certainly_less(threshold, h)) return 1;
    } catch (const DomainError&) {
      // fall back to the product form
    }
    return 0;
  }

  static constexpr long kDirectTermsPerBit = 8;
};

std::vector<double> grid_points(double start, double end, double step) {
  std::vector<double> grid;
  for (long k = 0;; ++k) {
    const double s = start + static_cast<double>(k) * step;
    if (s >= end) break;
    grid.push_back(s);
  }
  grid.push_back(end);
  return grid;
}

void check_options(const ScanOptions& options) {
  if (!(options.tol > 0.0)) throw std::invalid_argument("tol must be positive");
  if (!(options.grid_start > 1.0)) throw std::invalid_argument("grid start must exceed 1");
  if (options.grid_step < 0.0 || !(options.grid_step_factor > 0.0)) {
    throw std::invalid_argument("grid step must be positive");
  }
  options.precision.validate();
}

}  // namespace

std::string format_real(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", value);
  return buf;
}

ScanRecord minimal_exponent(std::span<const std::int64_t> primes, std::size_t n,
                            const ScanOptions& options) {
  check_options(options);
  if (n == 0) throw std::invalid_argument("minimal_exponent: n must be at least 1");
  if (primes.size() <= n) {
    throw std::invalid_argument("minimal_exponent: p_{n+1} must be supplied");
  }
  const std::int64_t p_n = primes[n - 1];
  const double end = 2.0 * static_cast<double>(p_n);
  const double step =
      options.grid_step > 0.0 ? options.grid_step : options.grid_step_factor * static_cast<double>(p_n);
  if (options.grid_start >= end) throw std::invalid_argument("grid start beyond 2 p_n");

  SignProbe sign{primes, n, options.precision};
  const std::vector<double> grid = grid_points(options.grid_start, end, step);
  std::vector<int> signs;
  signs.reserve(grid.size());
  for (double s : grid) signs.push_back(sign(s));

  int crossings = 0;
  for (std::size_t i = 1; i < signs.size(); ++i) {
    if (signs[i] != signs[i - 1]) ++crossings;
  }
  if (signs.back() < 0) {
    throw NoCrossingError("exponent scan: h(2 p_n) <= p_{n+1} - 1 (n = " + std::to_string(n) + ")");
  }
  if (signs.front() > 0) {
    throw NoCrossingError("exponent scan: crossing lies below the grid start (n = " +
                          std::to_string(n) + ")");
  }
  // last negative grid point; everything after it is positive
  std::size_t last = signs.size() - 1;
  while (signs[last] > 0) --last;
  double lo = grid[last];
  double hi = grid[last + 1];
  while (hi - lo > options.tol / 2) {
    const double mid = lo + (hi - lo) / 2;
    if (mid <= lo || mid >= hi) break;
    if (sign(mid) > 0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }

  ScanRecord record;
  record.n = n;
  record.p_n = p_n;
  record.p_next = primes[n];
  record.s_n = hi;
  record.ratio = hi / static_cast<double>(p_n);
  record.crossings_checked = crossings;
  record.tol = options.tol;
  record.max_precision_bits = sign.max_bits_used;
  return record;
}

std::vector<ScanRecord> scan_range(std::span<const std::int64_t> primes, std::size_t n_min,
                                   std::size_t n_max, const ScanOptions& options) {
  check_options(options);
  if (n_min == 0 || n_max < n_min) throw std::invalid_argument("scan_range: need 1 <= n_min <= n_max");
  if (primes.size() <= n_max) throw std::invalid_argument("scan_range: chain must hold n_max + 1 primes");

  const std::size_t count = n_max - n_min + 1;
  std::vector<ScanRecord> records(count);
  std::vector<std::exception_ptr> errors(count);
  // largest n first: those evaluations are the most expensive
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < count; k = next++) {
      const std::size_t i = count - 1 - k;
      try {
        records[i] = minimal_exponent(primes, n_min + i, options);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  unsigned threads = options.threads != 0 ? options.threads : std::thread::hardware_concurrency();
  threads = std::clamp<unsigned>(threads, 1, static_cast<unsigned>(count));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  for (std::size_t i = 0; i < count; ++i) {
    if (!errors[i]) continue;
    try {
      std::rethrow_exception(errors[i]);
    } catch (const std::exception& e) {
      std::throw_with_nested(StepError(n_min + i, e.what()));
    }
  }
  return records;
}

bool verify_bracket(std::span<const std::int64_t> primes, const ScanRecord& record,
                    const PrecisionPolicy& precision) {
  if (record.n == 0 || primes.size() <= record.n || !(record.tol > 0.0)) return false;
  if (primes[record.n - 1] != record.p_n || primes[record.n] != record.p_next) return false;
  const double below = record.s_n - record.tol;
  if (!(below > 1.0)) return false;
  SignProbe sign{primes, record.n, precision};
  try {
    return sign(below) < 0 && sign(record.s_n + record.tol) > 0;
  } catch (const PrecisionExhausted&) {
    return false;
  }
}

void write_scan_csv(std::ostream& out, const std::vector<ScanRecord>& records) {
  out << "n,p_n,p_next,s_n,ratio\n";
  for (const auto& r : records) {
    out << r.n << ',' << r.p_n << ',' << r.p_next << ',' << format_real(r.s_n) << ','
        << format_real(r.ratio) << '\n';
  }
}

void write_gnuplot_script(std::ostream& out, const std::string& csv_path) {
  out << "set datafile separator ','\n"
      << "set key off\n"
      << "set xlabel 'n'\n"
      << "set ylabel 's_n / p_n'\n"
      << "set yrange [0:1.1]\n"
      << "set grid\n"
      << "plot '" << csv_path << "' using 1:5 every ::1 with linespoints pt 7 ps 0.5\n";
}

}  // namespace primerec
