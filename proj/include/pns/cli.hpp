#pragma once

// Command-line front end: argument and config-file handling, report rows and
// their CSV / JSON emission, and the subcommand driver used by tools/pns.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pns/certified_real.hpp"
#include "pns/poincare.hpp"

namespace pns::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitUndetermined = 3;

// Bad config value. `line` is 0 for values that came from a flag.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string source, int line, std::string field, const std::string& message);

  const std::string& field() const { return field_; }
  int line() const { return line_; }

 private:
  std::string field_;
  int line_;
};

struct KRange {
  unsigned start = 16;
  unsigned end = 16;
  unsigned step = 2;

  std::vector<unsigned> values() const;
};

/// "16", "16:60" or "16:60:2".
KRange parse_k_range(const std::string& text);
/// Comma separated positive integers.
std::vector<std::uint64_t> parse_n_list(const std::string& text);

struct SweepConfig {
  int theorem_id = 1;
  KRange k_range;
  std::vector<std::uint64_t> N_list{1};
  std::optional<double> epsilon;  // set: check the vanishing window instead of the theorem scan length
  long precision = 128;
  double target_radius = 1e-30;
  long max_precision = 1024;
  std::string output_path;
  std::string output_format = "csv";
  unsigned jobs = 0;  // 0: one per hardware thread

  /// Throws ConfigError naming the offending field.
  void validate(const std::string& source = "flags") const;
};

// Flat text format, one `key = value` per line, `#` starts a comment.
// Keys: theorem, k, N, epsilon, precision, target_radius, max_precision,
// output, format, jobs.
void apply_config(SweepConfig& config, std::istream& in, const std::string& source);
void load_config(SweepConfig& config, const std::string& path);

struct ReportRow {
  unsigned k = 0;
  std::uint64_t N = 0;
  std::uint64_t m = 0;
  std::optional<std::uint64_t> n_first;
  std::string value;
  std::string radius;
  std::string sign;
  long precision = 0;
  std::string status;  // nonzero | undetermined
};

struct Summary {
  std::size_t rows = 0;
  std::size_t nonzero = 0;
  std::size_t undetermined = 0;
};

/// Midpoint to 17 significant digits.
std::string format_value(const CertifiedReal& x);
/// Radius to 3 significant digits, rounded up.
std::string format_radius(const CertifiedReal& x);

ReportRow make_row(const poincare::VanishingReport& report);
Summary summarize(const std::vector<ReportRow>& rows);

inline constexpr const char* kCsvHeader = "k,N,m,n_first,value,radius,sign,precision,status";

void write_csv(std::ostream& out, const std::vector<ReportRow>& rows);
void write_json(std::ostream& out, const SweepConfig& config, const std::vector<ReportRow>& rows,
                const Summary& summary);

/// Every (k, N, m) cell of the sweep, evaluated on a bounded worker pool.
/// Rows come back in (k, N, m) order whatever the scheduling.
std::vector<ReportRow> run_sweep(const SweepConfig& config);

/// Entry point shared by the binary and the tests; returns the exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pns::cli
