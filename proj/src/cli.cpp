#include "primerec/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <fstream>
#include <functional>
#include <json.hpp>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "primerec/acceptance.hpp"
#include "primerec/classical.hpp"
#include "primerec/exponent_scan.hpp"
#include "primerec/mod4.hpp"
#include "primerec/oracle.hpp"
#include "primerec/recurrence.hpp"

namespace primerec::cli {

namespace {

using Json = nlohmann::ordered_json;

enum class Format { csv, json };

struct RunConfig {
  std::string subcommand;
  std::size_t count = 10;
  std::size_t min_n = 1;
  std::size_t max_n = 10;
  ExponentPolicy exponent;
  PrecisionPolicy precision;
  double tol = 1e-6;
  std::vector<long> bases{2};
  Format format = Format::csv;
  std::string out_path;
  std::string plot_path;
  unsigned threads = 0;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The number as it appears in the CSV, so JSON carries identical values.
double csv_value(double v) { return std::stod(format_real(v)); }

std::string width_string(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// A table with named columns, written as CSV or as a JSON array of objects.
class Table {
 public:
  explicit Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

  void add(std::vector<Json> row) { rows_.push_back(std::move(row)); }

  void write(std::ostream& out, Format format) const {
    if (format == Format::json) {
      Json array = Json::array();
      for (const auto& row : rows_) {
        Json object = Json::object();
        for (std::size_t i = 0; i < columns_.size(); ++i) object[columns_[i]] = row[i];
        array.push_back(std::move(object));
      }
      out << array.dump(2) << '\n';
      return;
    }
    for (std::size_t i = 0; i < columns_.size(); ++i) out << (i ? "," : "") << columns_[i];
    out << '\n';
    for (const auto& row : rows_) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) out << ',';
        if (row[i].is_string()) {
          out << row[i].get<std::string>();
        } else if (row[i].is_number_float()) {
          out << format_real(row[i].get<double>());
        } else {
          out << row[i].dump();
        }
      }
      out << '\n';
    }
  }

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<Json>> rows_;
};

void check_range(const RunConfig& config) {
  if (config.min_n < 1) throw UsageError("--min-n must be at least 1");
  if (config.max_n < config.min_n) throw UsageError("--max-n must be at least --min-n");
}

int cmd_chain(const RunConfig& config, std::ostream& out, std::ostream& err) {
  if (config.count < 1) throw UsageError("--count must be at least 1");
  const PrimeChain chain = generate_chain(config.count, config.exponent, config.precision);
  Table table({"n", "p_n", "s", "precision_bits", "enclosure_width", "escalations", "p_next",
               "oracle", "match"});
  std::size_t mismatches = 0;
  for (const auto& step : chain.steps) {
    if (!step.matches_oracle()) ++mismatches;
    table.add({step.n, chain.primes[step.n - 1], csv_value(step.exponent), step.precision_bits,
               width_string(step.enclosure_width), step.escalations, step.computed,
               step.oracle.value_or(0), step.matches_oracle()});
  }
  table.write(out, config.format);
  const bool report_only = config.exponent.mode == ExponentMode::conjectural;
  err << "chain: " << chain.size() << " primes, exponent " << config.exponent.name() << ", ";
  if (mismatches == 0) {
    err << "all " << chain.steps.size() << " steps match the sieve\n";
    return kOk;
  }
  err << mismatches << " of " << chain.steps.size() << " steps disagree with the sieve"
      << (report_only ? " (report-only for the conjectural exponent)" : "") << '\n';
  return report_only ? kOk : kOracleMismatch;
}

int cmd_scan(const RunConfig& config, std::ostream& out, std::ostream& err) {
  check_range(config);
  if (!(config.tol > 0.0)) throw UsageError("--tol must be positive");
  const auto primes = sieve_primes(config.max_n + 1);
  ScanOptions options;
  options.tol = config.tol;
  options.precision = config.precision;
  options.threads = config.threads;
  const auto records = scan_range(primes, config.min_n, config.max_n, options);

  if (config.format == Format::csv) {
    write_scan_csv(out, records);
  } else {
    Json array = Json::array();
    for (const auto& r : records) {
      array.push_back({{"n", r.n}, {"p_n", r.p_n}, {"p_next", r.p_next}, {"s_n", csv_value(r.s_n)},
                       {"ratio", csv_value(r.ratio)}});
    }
    out << array.dump(2) << '\n';
  }
  if (!config.plot_path.empty()) {
    std::ofstream plot(config.plot_path);
    if (!plot) throw UsageError("cannot write " + config.plot_path);
    write_gnuplot_script(plot, config.out_path.empty() ? "scan.csv" : config.out_path);
  }

  const auto top = std::max_element(records.begin(), records.end(),
                                    [](const auto& a, const auto& b) { return a.ratio < b.ratio; });
  std::vector<std::size_t> above_conjecture;
  std::vector<std::size_t> above_bound;
  int multiple = 0;
  for (const auto& r : records) {
    if (r.ratio > 1.0) above_conjecture.push_back(r.n);
    if (r.ratio > 2.0) above_bound.push_back(r.n);
    if (r.crossings_checked > 1) ++multiple;
  }
  err << "scan: " << records.size() << " records, max ratio " << format_real(top->ratio)
      << " at n = " << top->n << "; ";
  if (above_conjecture.empty()) {
    err << "s_n <= p_n for every n";
  } else {
    err << "s_n > p_n at " << above_conjecture.size() << " n (report-only), first n = "
        << above_conjecture.front();
  }
  if (multiple > 0) err << "; " << multiple << " n with several grid crossings";
  err << '\n';
  if (!above_bound.empty()) {
    err << "scan: s_n > 2 p_n at n = " << above_bound.front() << '\n';
    return kOracleMismatch;
  }
  return kOk;
}

int cmd_mod4(const RunConfig& config, std::ostream& out, std::ostream& err) {
  check_range(config);
  const auto primes = sieve_primes(config.max_n + 1);
  std::vector<Mod4Prediction> rows;
  for (std::size_t n = config.min_n; n <= config.max_n; ++n) {
    rows.push_back(predict_mod4(primes, n, config.exponent, config.precision));
  }
  if (config.format == Format::csv) {
    write_mod4_csv(out, rows);
  } else {
    Json array = Json::array();
    for (const auto& r : rows) {
      array.push_back({{"n", r.n},
                       {"p_n", r.p_n},
                       {"p_next", r.p_next},
                       {"predicted", r.predicted ? Json(*r.predicted) : Json("indeterminate")},
                       {"actual", r.actual},
                       {"match", r.matches()}});
    }
    out << array.dump(2) << '\n';
  }
  std::size_t correct = 0;
  std::size_t indeterminate = 0;
  for (const auto& r : rows) {
    if (r.matches()) ++correct;
    if (r.indeterminate()) ++indeterminate;
  }
  const std::size_t wrong = rows.size() - correct - indeterminate;
  err << "mod4: " << correct << "/" << rows.size() << " correct, " << indeterminate
      << " indeterminate, " << wrong << " wrong\n";
  return wrong == 0 ? kOk : kOracleMismatch;
}

int cmd_gandhi(const RunConfig& config, std::ostream& out, std::ostream& err) {
  check_range(config);
  const auto primes = sieve_primes(config.max_n + 1);
  Table table({"n", "p_n", "p_next", "computed", "window", "match"});
  std::size_t mismatches = 0;
  for (std::size_t n = config.min_n; n <= config.max_n; ++n) {
    const ClassicalResult r = gandhi_next_prime(primes, n, config.precision);
    const bool match = r.prime == primes[n];
    if (!match) ++mismatches;
    table.add({n, primes[n - 1], primes[n], r.prime, csv_value(r.certificate.mid_double()), match});
  }
  table.write(out, config.format);
  err << "gandhi: " << (config.max_n - config.min_n + 1 - mismatches) << "/"
      << (config.max_n - config.min_n + 1) << " match the sieve\n";
  return mismatches == 0 ? kOk : kOracleMismatch;
}

int cmd_trefeu(const RunConfig& config, std::ostream& out, std::ostream& err) {
  check_range(config);
  const auto primes = sieve_primes(config.max_n + 1);
  Table table({"n", "base", "p_n", "p_next", "computed", "match"});
  std::size_t total = 0;
  std::size_t mismatches = 0;
  for (long b : config.bases) {
    for (std::size_t n = config.min_n; n <= config.max_n; ++n) {
      const ClassicalResult r = golomb_trefeu_next_prime(primes, n, b, config.precision);
      const bool match = r.prime == primes[n];
      ++total;
      if (!match) ++mismatches;
      table.add({n, b, primes[n - 1], primes[n], r.prime, match});
    }
  }
  table.write(out, config.format);
  err << "trefeu: " << (total - mismatches) << "/" << total << " match the sieve\n";
  return mismatches == 0 ? kOk : kOracleMismatch;
}

int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream&) {
  AcceptanceOptions options;
  options.threads = config.threads;
  bool all = true;
  run_acceptance(options, [&](const CriterionResult& r) {
    out << format_criterion(r) << std::endl;
    all = all && r.passed;
  });
  return all ? kOk : kOracleMismatch;
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const PrecisionExhausted*>(&e)) return kPrecisionExhausted;
  try {
    std::rethrow_if_nested(e);
  } catch (const std::exception& inner) {
    return exit_code_for(inner);
  }
  return kInternalError;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig config;
  std::string mode = "proven";
  std::string format = "csv";

  CLI::App app{"Next-prime recurrences with certified ball arithmetic", "primerec"};
  app.fallthrough();
  app.require_subcommand(1);
  app.add_option("--count", config.count, "Chain length")->capture_default_str();
  app.add_option("--min-n", config.min_n, "First n of a sweep")->capture_default_str();
  app.add_option("--max-n", config.max_n, "Last n of a sweep")->capture_default_str();
  app.add_option("--mode", mode, "Exponent: proven, conjectural or fixed=<s>")->capture_default_str();
  app.add_option("--guard-bits", config.precision.guard_bits, "Guard bits")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  app.add_option("--max-escalations", config.precision.max_escalations, "Precision escalations")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  app.add_option("--tol", config.tol, "Scan tolerance")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--base", config.bases, "Logarithm base(s), repeatable or comma separated")
      ->delimiter(',')
      ->check(CLI::Range(2L, 1L << 20));
  app.add_option("--format", format, "csv or json")
      ->capture_default_str()
      ->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--out", config.out_path, "Output file (default stdout)");
  app.add_option("--plot", config.plot_path, "Scan: also write a gnuplot script here");
  app.add_option("--threads", config.threads, "Scan worker threads (0 = all cores)");

  const std::vector<std::pair<const char*, const char*>> commands{
      {"chain", "Generate primes with the effective recurrence"},
      {"scan", "Minimal effective exponents s_n"},
      {"mod4", "Predict p_{n+1} mod 4 from the chi_4 criterion"},
      {"gandhi", "Next prime from the power-of-two Moebius sum"},
      {"trefeu", "Next prime from the base-b Moebius sum"},
      {"verify", "Run the acceptance suite"},
  };
  for (const auto& [name, help] : commands) {
    app.add_subcommand(name, help)->callback([&config, name = std::string(name)] {
      config.subcommand = name;
    });
  }

  try {
    app.parse(argc, argv);
    config.exponent = parse_exponent_policy(mode);
    config.format = format == "json" ? Format::json : Format::csv;
    config.precision.validate();
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n' << "run with --help for usage\n";
    return kBadArguments;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kBadArguments;
  }

  const std::map<std::string, std::function<int(const RunConfig&, std::ostream&, std::ostream&)>>
      handlers{{"chain", cmd_chain}, {"scan", cmd_scan},     {"mod4", cmd_mod4},
               {"gandhi", cmd_gandhi}, {"trefeu", cmd_trefeu}, {"verify", cmd_verify}};

  std::ofstream file;
  if (!config.out_path.empty()) {
    file.open(config.out_path);
    if (!file) {
      err << "error: cannot write " << config.out_path << '\n';
      return kBadArguments;
    }
  }
  std::ostream& sink = config.out_path.empty() ? out : file;
  try {
    return handlers.at(config.subcommand)(config, sink, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kBadArguments;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }
}

}  // namespace primerec::cli
