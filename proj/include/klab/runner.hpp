#pragma once

// Experiment runner: subcommand schemas, flat key=value configuration,
// experiment records and their CSV / JSON-lines persistence.

#include <cstdint>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace klab::runner {

/// Invalid configuration or usage. Maps to exit status 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kExitPass = 0;
inline constexpr int kExitAssertion = 1;
inline constexpr int kExitUsage = 2;

struct OptionSpec {
  std::string key;
  std::string default_value;
  std::string help;
};

struct SubcommandSpec {
  std::string name;
  std::string help;
  std::vector<OptionSpec> options;  // includes the common `seed` and `workers`
};

const std::vector<SubcommandSpec>& subcommands();
const SubcommandSpec& find_subcommand(const std::string& name);

/// Effective configuration of one subcommand: schema defaults, then file, then flags.
class Config {
 public:
  explicit Config(const SubcommandSpec& spec);

  /// Throws ConfigError for keys outside the schema.
  void set(const std::string& key, const std::string& value);
  /// Reads `key = value` lines; '#' starts a comment.
  void merge_file(const std::string& path);

  const std::string& subcommand() const { return subcommand_; }
  const std::string& get(const std::string& key) const;
  std::int64_t get_int(const std::string& key) const;
  std::uint64_t get_seed() const;
  double get_double(const std::string& key) const;
  bool get_bool(const std::string& key) const;
  std::vector<std::int64_t> get_int_list(const std::string& key) const;

  /// Full parameter echo, `k=v` joined by ';' in key order.
  std::string echo() const;
  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::string subcommand_;
  std::map<std::string, std::string> values_;
};

struct Record {
  std::string label;                                   // distinguishes records of one run
  std::vector<std::pair<std::string, std::string>> detail;  // per-record parameters
  std::vector<std::pair<std::string, double>> measured;
  std::vector<std::pair<std::string, bool>> assertions;  // hard assertions only

  // Filled by run().
  std::string id;
  std::string timestamp;
  std::string subcommand;
  std::uint64_t seed = 0;
  std::string params;
  double runtime_seconds = 0.0;

  bool passed() const;
};

struct RunOutcome {
  std::vector<Record> records;
  double runtime_seconds = 0.0;
  bool passed() const;
  int exit_code() const { return passed() ? kExitPass : kExitAssertion; }
};

/// Executes one subcommand. Library precondition failures surface as ConfigError.
RunOutcome run(const Config& config);

/// %.17g.
std::string format_real(double x);

inline constexpr const char* kCsvHeader = "experiment_id,timestamp,subcommand,seed,params,measured,assertions";

std::string csv_row(const Record& r);
std::string json_line(const Record& r);

/// Appends rows to `path`, writing the header first when the file is new or empty.
void append_csv(const std::string& path, const std::vector<Record>& records);
void append_json(const std::string& path, const std::vector<Record>& records);
void print_table(std::ostream& os, const std::vector<Record>& records);

}  // namespace klab::runner
